#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "lhv/hermitian.hpp"

namespace lhv {

/// Malformed input document (bad syntax or shape).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed document whose content violates an operator invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Round-trip-safe decimal rendering (17 significant digits).
inline std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Matrix document: an object with integer `dim` and `entries`, a row-major
/// list of dim^2 [re, im] pairs.
inline std::string matrix_to_json(const HermitianOperator& op) {
  std::string out = "{\"dim\": " + std::to_string(op.dim()) + ", \"entries\": [";
  for (int i = 0; i < op.dim(); ++i)
    for (int j = 0; j < op.dim(); ++j) {
      if (i != 0 || j != 0) out += ", ";
      out += "[" + format_float(op(i, j).real()) + ", " + format_float(op(i, j).imag()) +
             "]";
    }
  out += "]}";
  return out;
}

inline HermitianOperator parse_matrix_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries"))
    throw ParseError("matrix document: expected an object with 'dim' and 'entries'");
  if (!doc["dim"].is_number_integer())
    throw ParseError("matrix document: 'dim' must be an integer");
  const auto dim = doc["dim"].get<long long>();
  if (dim < 2) throw ValidationError("matrix document: dim must be >= 2");
  const auto& entries = doc["entries"];
  if (!entries.is_array() || entries.size() != std::size_t(dim) * std::size_t(dim))
    throw ParseError("matrix document: 'entries' must hold dim^2 [re, im] pairs");

  Matrix m(dim, dim);
  std::size_t k = 0;
  for (const auto& pair : entries) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number())
      throw ParseError("matrix document: entry " + std::to_string(k) +
                       " is not an [re, im] pair");
    m(k / dim, k % dim) = Complex(pair[0].get<double>(), pair[1].get<double>());
    ++k;
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::hermitian)
    throw ValidationError("matrix document: not Hermitian, max asymmetry " +
                          format_float(dev));
  return HermitianOperator(std::move(m));
}

}  // namespace lhv
