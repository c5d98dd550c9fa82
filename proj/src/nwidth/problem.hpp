#ifndef NWIDTH_PROBLEM_HPP
#define NWIDTH_PROBLEM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nwidth {

// Absolute tolerance used for comparisons on reciprocal exponents unless a
// caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

enum class ErrorCode {
  DimensionMismatch,
  RangeError,
  IndexError,
  ParseError,
  CapacityError,
  RetryExhausted,
  InternalError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

// A positive quantity kept as its natural logarithm.  Products of powers
// accumulate as sums of e*log(b); the linear value is derived on demand.
struct LogValue {
  double log_value = 0.0;

  double value() const { return std::exp(log_value); }
};

// A point x in [0,1]^d with x_i = 1/p_i; x_i = 0 encodes p_i = infinity and
// x_i = 1 encodes p_i = 1.  All exponent geometry happens in these
// coordinates.
class ReciprocalVector {
 public:
  ReciprocalVector() = default;
  explicit ReciprocalVector(std::vector<double> x);

  // Converts user-facing exponents p_i in [1, inf] (inf allowed) to
  // reciprocals.  Throws RangeError for p_i < 1 or NaN.
  static ReciprocalVector from_p(const std::vector<double>& p);

  std::size_t dim() const { return x_.size(); }
  double operator[](std::size_t i) const { return x_[i]; }
  const std::vector<double>& coords() const { return x_; }

  // Inverse of from_p: 0 maps back to infinity.
  std::vector<double> p_values() const;

  bool operator==(const ReciprocalVector& other) const { return x_ == other.x_; }

 private:
  std::vector<double> x_;
};

struct BallSpec {
  double nu = 1.0;         // radius weight, > 0
  ReciprocalVector x;      // 1/p per coordinate

  bool operator==(const BallSpec& other) const { return nu == other.nu && x == other.x; }
};

struct ProblemSpec {
  std::vector<long long> k;    // grid sides, each >= 1
  std::vector<double> q;       // target exponents, each in [2, inf)
  long long n = 1;             // width index
  std::vector<BallSpec> balls; // the finite family A

  std::size_t dim() const { return k.size(); }
};

// Largest admissible width index, floor(prod k_i / 2), saturating on overflow.
long long max_width_index(const std::vector<long long>& k);

// Checks every invariant and returns the canonical problem: duplicate balls
// with identical (nu, x) are dropped, first occurrence kept.  Dominated balls
// are retained.  Idempotent.
ProblemSpec validate(const ProblemSpec& problem);

// Problem file format: JSON object with fields
//   k: array of positive integers
//   q: array of numbers (each >= 2, finite)
//   n: positive integer
//   balls: array of { nu: positive number, p: array of numbers or "inf" }
// "inf" is the only non-numeric token.  parse also validates.
ProblemSpec parse_problem_json(const std::string& text);
std::string problem_to_json(const ProblemSpec& problem);

}  // namespace nwidth

#endif
