#pragma once

#include <Eigen/Core>

#include <charconv>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prevision {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy. Everything user-facing derives from Error so the CLI can
// catch one type; the finer classes exist because callers (and tests) need
// to tell a schema problem from a numerical one.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};
struct StructureError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct LookupError : Error {
  using Error::Error;
};
struct ContractError : Error {
  using Error::Error;
};
struct SingularityError : Error {
  using Error::Error;
};
struct InsufficientDataError : Error {
  using Error::Error;
};
struct DegenerateModelError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Presentation-layer rounding: `digits` significant figures.
inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::string(buf);
}

/// Strict full-string double parse. Accepts "inf"/"-inf"; rejects anything
/// with trailing junk. Throws ParseError.
inline double parse_double(std::string_view text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    throw ParseError("empty numeric field");
  }
  std::string_view body = text.substr(begin, end - begin + 1);
  double value = 0.0;
  auto res = std::from_chars(body.data(), body.data() + body.size(), value);
  if (res.ec != std::errc{} || res.ptr != body.data() + body.size()) {
    throw ParseError("not a number: '" + std::string(body) + "'");
  }
  return value;
}

}  // namespace prevision
