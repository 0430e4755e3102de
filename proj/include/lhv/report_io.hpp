#pragma once

#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lhv/cartan.hpp"
#include "lhv/matrix_io.hpp"
#include "lhv/theorem.hpp"

namespace lhv {

/// CSV rows of a theorem report: one row per step plus a closing `final` row.
inline std::string theorem_report_csv(const TheoremReport& report) {
  std::string out = "j,theta,lhs_mean,lhs_stderr,rhs,verdict\n";
  for (const auto& s : report.steps)
    out += std::to_string(s.j) + "," + format_float(s.theta) + "," +
           format_float(s.lhs.mean) + "," + format_float(s.lhs.std_error) + "," +
           format_float(s.rhs) + "," + to_string(s.verdict) + "\n";
  out += "final,," + format_float(report.final_lhs.mean) + "," +
         format_float(report.final_lhs.std_error) + "," +
         format_float(report.final_rhs) + "," +
         (report.violated ? "violated" : to_string(report.final_verdict)) + "\n";
  return out;
}

inline std::string theorem_report_text(const TheoremReport& report) {
  std::ostringstream out;
  for (const auto& s : report.steps)
    out << "step j=" << s.j << " theta=" << format_float(s.theta)
        << " lhs=" << format_float(s.lhs.mean) << " +- "
        << format_float(s.lhs.std_error) << " rhs=" << format_float(s.rhs) << " "
        << to_string(s.verdict) << "\n";
  out << "final integral |f|: " << format_float(report.final_lhs.mean) << " +- "
      << format_float(report.final_lhs.std_error)
      << " bound=" << format_float(report.final_rhs) << " -> "
      << (report.violated ? "VIOLATED (model excluded)" : "consistent") << "\n";
  return out.str();
}

/// CSV of a curve partition: theta plus all coefficient slots per row.
inline std::string partition_csv(const std::vector<CoefficientVector>& points) {
  const int slots = points.empty() ? 0 : points.front().size();
  std::string out = "j,theta";
  for (int k = 0; k < slots; ++k) out += ",c" + std::to_string(k);
  out += "\n";
  const auto segments = static_cast<int>(points.size()) - 1;
  for (std::size_t j = 0; j < points.size(); ++j) {
    out += std::to_string(j) + "," +
           format_float(double(j) * std::numbers::pi / segments);
    for (int k = 0; k < slots; ++k) out += "," + format_float(points[j][k]);
    out += "\n";
  }
  return out;
}

/// Structured-text rendering of a Cartan decomposition: the trace coefficient,
/// then each term's coefficient with its component in the matrix format.
inline std::string decomposition_text(const CartanDecomposition& dec) {
  std::string out = "alpha0 " + format_float(dec.alpha0) + "\n";
  for (std::size_t j = 0; j < dec.terms.size(); ++j) {
    out += "term " + std::to_string(j + 1) + " alpha " +
           format_float(dec.terms[j].alpha) + "\n";
    out += matrix_to_json(dec.terms[j].component) + "\n";
  }
  return out;
}

inline std::string decomposition_json(const CartanDecomposition& dec) {
  std::string out = "{\"alpha0\": " + format_float(dec.alpha0) + ", \"terms\": [";
  for (std::size_t j = 0; j < dec.terms.size(); ++j) {
    if (j) out += ", ";
    out += "{\"alpha\": " + format_float(dec.terms[j].alpha) +
           ", \"component\": " + matrix_to_json(dec.terms[j].component) + "}";
  }
  out += "]}\n";
  return out;
}

struct ScanRow {
  int n = 0;
  EstimateResult lhs;
  double rhs = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  bool violated = false;
};

inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "n,lhs_mean,lhs_stderr,rhs\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + format_float(r.lhs.mean) + "," +
           format_float(r.lhs.std_error) + "," + format_float(r.rhs) + "\n";
  return out;
}

inline std::string scan_text(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  int minimal = -1;
  for (const auto& r : rows) {
    out << "n=" << r.n << " lhs=" << format_float(r.lhs.mean) << " +- "
        << format_float(r.lhs.std_error) << " rhs=" << format_float(r.rhs) << " "
        << (r.violated ? "violated" : to_string(r.verdict)) << "\n";
    if (r.violated && minimal < 0) minimal = r.n;
  }
  if (minimal > 0)
    out << "minimal violating n = " << minimal << "\n";
  else
    out << "no violation found in the scanned n values\n";
  return out.str();
}

}  // namespace lhv
