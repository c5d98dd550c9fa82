#include "nwidth/problem.hpp"

#include <algorithm>

#include "json.hpp"

namespace nwidth {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CapacityError: return "CapacityError";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "UnknownError";
}

ReciprocalVector::ReciprocalVector(std::vector<double> x) : x_(std::move(x)) {
  if (x_.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "reciprocal vector must have dimension >= 1");
  }
  for (double v : x_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::RangeError,
                  "reciprocal coordinate " + std::to_string(v) + " outside [0, 1]");
    }
  }
}

ReciprocalVector ReciprocalVector::from_p(const std::vector<double>& p) {
  std::vector<double> x;
  x.reserve(p.size());
  for (double v : p) {
    if (std::isnan(v) || v < 1.0) {
      throw Error(ErrorCode::RangeError, "exponent p = " + std::to_string(v) + " outside [1, inf]");
    }
    x.push_back(std::isinf(v) ? 0.0 : 1.0 / v);
  }
  return ReciprocalVector(std::move(x));
}

std::vector<double> ReciprocalVector::p_values() const {
  std::vector<double> p;
  p.reserve(x_.size());
  for (double v : x_) {
    p.push_back(v == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / v);
  }
  return p;
}

long long max_width_index(const std::vector<long long>& k) {
  unsigned __int128 prod = 1;
  const unsigned __int128 cap = (unsigned __int128)std::numeric_limits<long long>::max() * 2;
  for (long long ki : k) {
    prod *= (unsigned __int128)ki;
    if (prod > cap) {
      prod = cap;  // saturate; any representable n passes the bound
      break;
    }
  }
  unsigned __int128 half = prod / 2;
  if (half > (unsigned __int128)std::numeric_limits<long long>::max()) {
    return std::numeric_limits<long long>::max();
  }
  return (long long)half;
}

ProblemSpec validate(const ProblemSpec& problem) {
  const std::size_t d = problem.k.size();
  if (d == 0) {
    throw Error(ErrorCode::DimensionMismatch, "problem dimension must be >= 1");
  }
  if (problem.q.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "k and q have different lengths");
  }
  for (long long ki : problem.k) {
    if (ki < 1) {
      throw Error(ErrorCode::RangeError, "k entries must be >= 1");
    }
  }
  for (double qi : problem.q) {
    if (!(qi >= 2.0) || !std::isfinite(qi)) {
      throw Error(ErrorCode::RangeError, "q entries must be finite and >= 2");
    }
  }
  if (problem.balls.empty()) {
    throw Error(ErrorCode::RangeError, "ball family must be nonempty");
  }
  for (const BallSpec& ball : problem.balls) {
    if (ball.x.dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "ball exponent vector has wrong dimension");
    }
    if (!(ball.nu > 0.0) || !std::isfinite(ball.nu)) {
      throw Error(ErrorCode::RangeError, "nu must be positive and finite");
    }
  }
  const long long n_max = max_width_index(problem.k);
  if (problem.n < 1 || problem.n > n_max) {
    throw Error(ErrorCode::IndexError, "width index n = " + std::to_string(problem.n) +
                                           " outside [1, " + std::to_string(n_max) + "]");
  }

  ProblemSpec out = problem;
  out.balls.clear();
  for (const BallSpec& ball : problem.balls) {
    if (std::find(out.balls.begin(), out.balls.end(), ball) == out.balls.end()) {
      out.balls.push_back(ball);
    }
  }
  return out;
}

ProblemSpec parse_problem_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid problem file: ") + e.what());
  }
  try {
    ProblemSpec problem;
    if (!j.is_object() || !j.contains("k") || !j.contains("q") || !j.contains("n") ||
        !j.contains("balls")) {
      throw Error(ErrorCode::ParseError, "problem file must define k, q, n and balls");
    }
    for (const auto& v : j.at("k")) {
      if (!v.is_number_integer()) {
        throw Error(ErrorCode::ParseError, "k entries must be integers");
      }
      problem.k.push_back(v.get<long long>());
    }
    for (const auto& v : j.at("q")) {
      if (!v.is_number()) {
        throw Error(ErrorCode::ParseError, "q entries must be numbers");
      }
      problem.q.push_back(v.get<double>());
    }
    if (!j.at("n").is_number_integer()) {
      throw Error(ErrorCode::ParseError, "n must be an integer");
    }
    problem.n = j.at("n").get<long long>();
    for (const auto& ball_json : j.at("balls")) {
      if (!ball_json.contains("nu") || !ball_json.contains("p")) {
        throw Error(ErrorCode::ParseError, "each ball must define nu and p");
      }
      BallSpec ball;
      ball.nu = ball_json.at("nu").get<double>();
      std::vector<double> p;
      for (const auto& v : ball_json.at("p")) {
        if (v.is_string()) {
          if (v.get<std::string>() != "inf") {
            throw Error(ErrorCode::ParseError, "\"inf\" is the only non-numeric p token");
          }
          p.push_back(std::numeric_limits<double>::infinity());
        } else if (v.is_number()) {
          p.push_back(v.get<double>());
        } else {
          throw Error(ErrorCode::ParseError, "p entries must be numbers or \"inf\"");
        }
      }
      ball.x = ReciprocalVector::from_p(p);
      problem.balls.push_back(std::move(ball));
    }
    return validate(problem);
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid problem file: ") + e.what());
  }
}

std::string problem_to_json(const ProblemSpec& problem) {
  nlohmann::json j;
  j["k"] = problem.k;
  j["q"] = problem.q;
  j["n"] = problem.n;
  nlohmann::json balls = nlohmann::json::array();
  for (const BallSpec& ball : problem.balls) {
    nlohmann::json b;
    b["nu"] = ball.nu;
    nlohmann::json p = nlohmann::json::array();
    for (double v : ball.x.p_values()) {
      if (std::isinf(v)) {
        p.push_back("inf");
      } else {
        p.push_back(v);
      }
    }
    b["p"] = p;
    balls.push_back(std::move(b));
  }
  j["balls"] = std::move(balls);
  return j.dump(2) + "\n";
}

}  // namespace nwidth
