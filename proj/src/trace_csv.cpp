#include "bpiree/trace_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace bpiree {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string trace_csv_header(bool lp, bool with_algo) {
  std::string h = "k,F,step_rel,residual,beta,block,retried,wall_ns";
  if (lp) h += ",eps_min,eps_max,support_size,sign_fixed";
  if (with_algo) h += ",algo";
  return h;
}

namespace {

bool has_lp(std::span<const TraceRecord> trace) {
  return std::any_of(trace.begin(), trace.end(),
                     [](const TraceRecord& r) { return r.lp.has_value(); });
}

void write_row(std::ostream& out, const TraceRecord& r, bool lp, const std::string* algo) {
  out << r.k << ',' << format_double(r.F) << ',' << format_double(r.step_rel) << ','
      << format_double(r.residual) << ',' << format_double(r.beta) << ',' << r.block << ','
      << (r.retried ? 1 : 0) << ',' << r.wall_ns;
  if (lp) {
    if (r.lp) {
      out << ',' << format_double(r.lp->eps_min) << ',' << format_double(r.lp->eps_max) << ','
          << r.lp->support_size << ',' << (r.lp->sign_fixed ? 1 : 0);
    } else {
      out << ",,,,";
    }
  }
  if (algo) out << ',' << *algo;
  out << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  const bool lp = has_lp(trace);
  out << trace_csv_header(lp, false) << '\n';
  for (const auto& r : trace) write_row(out, r, lp, nullptr);
}

void write_merged_trace_csv(
    std::ostream& out, const std::vector<std::pair<std::string, std::vector<TraceRecord>>>& traces) {
  bool lp = false;
  for (const auto& [algo, trace] : traces) lp = lp || has_lp(trace);
  out << trace_csv_header(lp, true) << '\n';
  for (const auto& [algo, trace] : traces) {
    for (const auto& r : trace) write_row(out, r, lp, &algo);
  }
}

}  // namespace bpiree
