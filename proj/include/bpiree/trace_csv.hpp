#pragma once

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bpiree/solver.hpp"

namespace bpiree {

/// Shortest decimal string that parses back to the same double
/// ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double value);

/// `k,F,step_rel,residual,beta,block,retried,wall_ns`, followed by
/// `eps_min,eps_max,support_size,sign_fixed` when `lp` and `algo` when
/// `with_algo`.
std::string trace_csv_header(bool lp, bool with_algo);

/// One row per record. The lp columns are written iff some record carries
/// them; they are left empty on records without.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

/// Traces of several solvers in one table, tagged by an `algo` column.
void write_merged_trace_csv(
    std::ostream& out, const std::vector<std::pair<std::string, std::vector<TraceRecord>>>& traces);

}  // namespace bpiree
