#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "bpiree/objective.hpp"

namespace bpiree {

/// A problem plus the planted solution it was generated from (empty when
/// unknown).
struct Instance {
  Problem problem;
  Eigen::VectorXd x_true;
};

/// Instance document, version "bpiree-instance/1":
///
///   {"format": "bpiree-instance/1",
///    "loss": "least_squares" | "matrix_least_squares",
///    "A": [[...], ...]                      row-major nested arrays, or
///         {"blob": PATH, "rows": n, "cols": q}   little-endian float64, row-major,
///                                                PATH relative to the document,
///    "b": [...]            (least_squares)
///    "B": [[...], ...]     (matrix_least_squares, row-major n×t),
///    "blocks": [[0, 1, ...], ...]            0-based flattened indices,
///    "penalty": {"kind": "log", "lambda": λ, "eps_bar": ε̄}
///             | {"kind": "smoothed_lp", "lambda": λ, "p": p},
///    "x_true": [...]       optional, flattened like x}
///
/// Custom penalties and other losses cannot be serialized
/// (UnsupportedOperation). Malformed documents raise ConfigError naming the
/// field; unreadable files raise IoError.
std::string instance_to_json(const Instance& instance, const std::string& blob_ref = {});
Instance instance_from_json(std::string_view text,
                            const std::filesystem::path& base_dir = std::filesystem::path("."));

/// Writes the document, and the matrix to `blob` when given, each through a
/// temporary file renamed into place.
void write_instance(const std::filesystem::path& path, const Instance& instance,
                    const std::optional<std::filesystem::path>& blob = std::nullopt);
Instance read_instance(const std::filesystem::path& path);

void write_matrix_blob(const std::filesystem::path& path, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix_blob(const std::filesystem::path& path, Index rows, Index cols);

/// Whole-file helpers. write_file_atomic() writes `path.tmp` and renames it,
/// so a failed write never leaves a partial file behind.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace bpiree
