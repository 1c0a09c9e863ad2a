#include "bpiree/instance_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "bpiree/errors.hpp"
#include "json_util.hpp"

namespace bpiree {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::require;

namespace {

constexpr const char* kFormat = "bpiree-instance/1";

json rows_of(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_of(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::MatrixXd parse_rows(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field + " must be a nonempty array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (!j[0].is_array()) throw ConfigError(field + " must be an array of rows");
  const Index cols = static_cast<Index>(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ConfigError(field + " rows must all have length " + std::to_string(cols));
    }
    for (Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ConfigError(field + " entries must be numbers");
      M(i, c) = v.get<double>();
    }
  }
  return M;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(field + " entries must be numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

json penalty_to_json(const PenaltySpec& penalty) {
  switch (penalty.kind()) {
    case PenaltyKind::Log:
      return {{"kind", "log"}, {"lambda", penalty.lambda()}, {"eps_bar", penalty.eps_bar()}};
    case PenaltyKind::SmoothedLp:
      return {{"kind", "smoothed_lp"}, {"lambda", penalty.lambda()}, {"p", penalty.p()}};
    case PenaltyKind::Custom:
      break;
  }
  throw UnsupportedOperation("custom penalties cannot be serialized");
}

PenaltySpec penalty_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("penalty must be an object");
  const std::string kind = require<std::string>(j, "kind", "penalty.kind");
  try {
    if (kind == "log") {
      detail::reject_unknown(j, {"kind", "lambda", "eps_bar"}, "penalty");
      return PenaltySpec::log(require<double>(j, "lambda", "penalty.lambda"),
                              require<double>(j, "eps_bar", "penalty.eps_bar"));
    }
    if (kind == "smoothed_lp") {
      detail::reject_unknown(j, {"kind", "lambda", "p"}, "penalty");
      return PenaltySpec::smoothed_lp(require<double>(j, "lambda", "penalty.lambda"),
                                      require<double>(j, "p", "penalty.p"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("penalty: ") + e.what());
  }
  throw ConfigError("penalty.kind must be \"log\" or \"smoothed_lp\", got \"" + kind + "\"");
}

}  // namespace

std::string instance_to_json(const Instance& instance, const std::string& blob_ref) {
  const Problem& problem = instance.problem;
  json doc;
  doc["format"] = kFormat;
  const Eigen::MatrixXd* A = nullptr;
  if (const auto* ls = dynamic_cast<const LeastSquares*>(&problem.loss())) {
    doc["loss"] = "least_squares";
    A = &ls->A();
    doc["b"] = vector_of(ls->b());
  } else if (const auto* mls = dynamic_cast<const MatrixLeastSquares*>(&problem.loss())) {
    doc["loss"] = "matrix_least_squares";
    A = &mls->A();
    doc["B"] = rows_of(mls->B());
  } else {
    throw UnsupportedOperation("only (matrix) least squares losses can be serialized");
  }
  if (blob_ref.empty()) {
    doc["A"] = rows_of(*A);
  } else {
    doc["A"] = {{"blob", blob_ref}, {"rows", A->rows()}, {"cols", A->cols()}};
  }
  doc["blocks"] = problem.partition().blocks();
  doc["penalty"] = penalty_to_json(problem.penalty());
  if (instance.x_true.size() > 0) doc["x_true"] = vector_of(instance.x_true);
  return doc.dump() + "\n";
}

Instance instance_from_json(std::string_view text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("instance must be a JSON object");
  detail::reject_unknown(doc, {"format", "loss", "A", "b", "B", "blocks", "penalty", "x_true"},
                         "instance");
  const std::string format = require<std::string>(doc, "format", "format");
  if (format != kFormat) throw ConfigError("format must be \"" + std::string(kFormat) + "\"");
  const std::string loss_kind = require<std::string>(doc, "loss", "loss");

  if (!doc.contains("A")) throw ConfigError("A is required");
  Eigen::MatrixXd A;
  const json& ja = doc["A"];
  if (ja.is_object()) {
    detail::reject_unknown(ja, {"blob", "rows", "cols"}, "A");
    const auto rows = require<std::int64_t>(ja, "rows", "A.rows");
    const auto cols = require<std::int64_t>(ja, "cols", "A.cols");
    if (rows <= 0 || cols <= 0) throw ConfigError("A.rows and A.cols must be > 0");
    fs::path blob = require<std::string>(ja, "blob", "A.blob");
    if (blob.is_relative()) blob = base_dir / blob;
    A = read_matrix_blob(blob, rows, cols);
  } else {
    A = parse_rows(ja, "A");
  }

  std::shared_ptr<const SmoothLoss> loss;
  try {
    if (loss_kind == "least_squares") {
      if (!doc.contains("b")) throw ConfigError("b is required for least_squares");
      loss = std::make_shared<LeastSquares>(std::move(A), parse_vector(doc["b"], "b"));
    } else if (loss_kind == "matrix_least_squares") {
      if (!doc.contains("B")) throw ConfigError("B is required for matrix_least_squares");
      loss = std::make_shared<MatrixLeastSquares>(std::move(A), parse_rows(doc["B"], "B"));
    } else {
      throw ConfigError("loss must be \"least_squares\" or \"matrix_least_squares\"");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("loss: ") + e.what());
  }

  if (!doc.contains("blocks") || !doc["blocks"].is_array()) {
    throw ConfigError("blocks must be an array of index arrays");
  }
  std::vector<std::vector<Index>> blocks;
  try {
    blocks = doc["blocks"].get<std::vector<std::vector<Index>>>();
  } catch (const json::exception&) {
    throw ConfigError("blocks must be an array of integer arrays");
  }
  BlockPartition partition(std::move(blocks), loss->dim());
  if (auto violation = validate_partition(partition)) {
    throw ConfigError("blocks: " + violation->message);
  }
  if (!doc.contains("penalty")) throw ConfigError("penalty is required");
  Problem problem(loss, penalty_from_json(doc["penalty"]), std::move(partition));

  Eigen::VectorXd x_true;
  if (doc.contains("x_true")) {
    x_true = parse_vector(doc["x_true"], "x_true");
    if (x_true.size() != problem.dim()) {
      throw ConfigError("x_true must have length " + std::to_string(problem.dim()));
    }
  }
  return Instance{std::move(problem), std::move(x_true)};
}

void write_instance(const fs::path& path, const Instance& instance,
                    const std::optional<fs::path>& blob) {
  std::string blob_ref;
  if (blob) {
    const Eigen::MatrixXd* A = nullptr;
    if (const auto* ls = dynamic_cast<const LeastSquares*>(&instance.problem.loss())) A = &ls->A();
    if (const auto* mls = dynamic_cast<const MatrixLeastSquares*>(&instance.problem.loss())) {
      A = &mls->A();
    }
    if (!A) throw UnsupportedOperation("only (matrix) least squares losses can be serialized");
    write_matrix_blob(*blob, *A);
    const fs::path doc_dir = fs::absolute(path).parent_path();
    blob_ref = fs::absolute(*blob).lexically_relative(doc_dir).generic_string();
    if (blob_ref.empty()) blob_ref = fs::absolute(*blob).generic_string();
  }
  write_file_atomic(path, instance_to_json(instance, blob_ref));
}

Instance read_instance(const fs::path& path) {
  return instance_from_json(read_file(path), fs::absolute(path).parent_path());
}

void write_matrix_blob(const fs::path& path, const Eigen::MatrixXd& M) {
  std::string bytes;
  bytes.resize(static_cast<std::size_t>(M.size()) * sizeof(double));
  std::size_t offset = 0;
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      auto bits = std::bit_cast<std::uint64_t>(M(i, j));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      std::memcpy(bytes.data() + offset, &bits, sizeof(bits));
      offset += sizeof(bits);
    }
  }
  write_file_atomic(path, bytes);
}

Eigen::MatrixXd read_matrix_blob(const fs::path& path, Index rows, Index cols) {
  const std::string bytes = read_file(path);
  const auto expected = static_cast<std::size_t>(rows * cols) * sizeof(double);
  if (bytes.size() != expected) {
    throw ConfigError("A.blob holds " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(expected));
  }
  Eigen::MatrixXd M(rows, cols);
  std::size_t offset = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      std::uint64_t bits;
      std::memcpy(&bits, bytes.data() + offset, sizeof(bits));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      M(i, j) = std::bit_cast<double>(bits);
      offset += sizeof(bits);
    }
  }
  return M;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("error while writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace bpiree
