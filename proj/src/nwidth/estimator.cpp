#include "nwidth/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "nwidth/numerics.hpp"
#include "nwidth/phi.hpp"

namespace nwidth {

namespace {

// Weighted value shared by candidate_value and upper_bound_value so the two
// agree bit for bit on identical inputs.
LogValue combo_value(const ProblemSpec& problem, const std::vector<std::size_t>& ball_indices,
                     const std::vector<double>& lambda, const ReciprocalVector& theta_hat) {
  double log_nu = 0.0;
  for (std::size_t j = 0; j < ball_indices.size(); ++j) {
    log_nu += lambda[j] * std::log(problem.balls[ball_indices[j]].nu);
  }
  return LogValue{log_nu + phi_log(theta_hat, problem.q, problem.k, problem.n).log_value};
}

void check_indices(const ProblemSpec& problem, const std::vector<std::size_t>& ball_indices) {
  std::vector<std::size_t> sorted = ball_indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::RangeError, "ball indices must be distinct");
  }
  for (std::size_t idx : ball_indices) {
    if (idx >= problem.balls.size()) {
      throw Error(ErrorCode::IndexError, "ball index out of range");
    }
  }
}

struct CandidateRef {
  std::vector<std::size_t> balls;
  CandidateZ Z;
};

std::vector<CandidateRef> enumerate_candidates(const ProblemSpec& problem, double tol) {
  const std::size_t d = problem.dim();
  const std::size_t ball_count = problem.balls.size();
  const std::size_t m_max = std::min(ball_count, d + 1);
  std::vector<CandidateRef> refs;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const std::vector<CandidateZ> planes = enumerate_Z(m, problem.q, tol);
    std::vector<std::size_t> subset(m);
    for (std::size_t i = 0; i < m; ++i) subset[i] = i;
    while (true) {
      for (const CandidateZ& Z : planes) refs.push_back(CandidateRef{subset, Z});
      std::size_t i = m;
      while (i > 0 && subset[i - 1] == ball_count - m + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < m; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return refs;
}

}  // namespace

std::variant<Certificate, Rejection> candidate_value(const ProblemSpec& problem,
                                                     const std::vector<std::size_t>& ball_indices,
                                                     const CandidateZ& Z, double tol) {
  check_indices(problem, ball_indices);
  std::vector<ReciprocalVector> points;
  points.reserve(ball_indices.size());
  for (std::size_t idx : ball_indices) points.push_back(problem.balls[idx].x);

  SolveOutcome outcome = solve_weights(points, Z, problem.q, tol);
  if (std::holds_alternative<Rejection>(outcome)) {
    return std::get<Rejection>(std::move(outcome));
  }
  Certificate cert;
  cert.m = Z.m;
  cert.ball_indices = ball_indices;
  cert.Z = Z;
  cert.weights = std::get<WeightSolution>(std::move(outcome));
  cert.log_value = combo_value(problem, ball_indices, cert.weights.lambda, cert.weights.theta_hat);
  return cert;
}

LogValue upper_bound_value(const ProblemSpec& problem,
                           const std::vector<std::size_t>& ball_indices,
                           const std::vector<double>& lambda) {
  check_indices(problem, ball_indices);
  if (lambda.size() != ball_indices.size()) {
    throw Error(ErrorCode::DimensionMismatch, "lambda length must match the ball count");
  }
  double sum = 0.0;
  for (double l : lambda) {
    if (!(l >= 0.0)) {
      throw Error(ErrorCode::RangeError, "lambda entries must be nonnegative");
    }
    sum += l;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::RangeError, "lambda must sum to 1");
  }
  const std::size_t d = problem.dim();
  std::vector<double> hat(d, 0.0);
  for (std::size_t j = 0; j < ball_indices.size(); ++j) {
    const ReciprocalVector& x = problem.balls[ball_indices[j]].x;
    for (std::size_t i = 0; i < d; ++i) hat[i] += lambda[j] * x[i];
  }
  for (double& v : hat) v = std::clamp(v, 0.0, 1.0);
  return combo_value(problem, ball_indices, lambda, ReciprocalVector(std::move(hat)));
}

EstimateResult estimate(const ProblemSpec& problem, const EstimateOptions& options) {
  const ProblemSpec canon = validate(problem);
  const std::vector<CandidateRef> refs = enumerate_candidates(canon, options.tol);

  std::vector<std::variant<Certificate, Rejection>> evaluated(refs.size(),
                                                              Rejection{RejectReason::Singular, ""});
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      evaluated[i] = candidate_value(canon, refs[i].balls, refs[i].Z, options.tol);
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1 || refs.size() < 64) {
    worker(0, refs.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (refs.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(refs.size(), (std::size_t)t * chunk);
      const std::size_t end = std::min(refs.size(), begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  EstimateResult result;
  std::size_t best = refs.size();
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (std::holds_alternative<Rejection>(evaluated[i])) {
      if (options.collect_rejections) {
        result.rejected.push_back(RejectedCandidate{refs[i].balls, refs[i].Z,
                                                    std::get<Rejection>(evaluated[i]).reason});
      }
      continue;
    }
    ++result.candidate_count;
    const Certificate& cert = std::get<Certificate>(evaluated[i]);
    if (best == refs.size() ||
        cert.log_value.log_value < std::get<Certificate>(evaluated[best]).log_value.log_value) {
      best = i;
    }
  }
  if (best == refs.size()) {
    throw Error(ErrorCode::InternalError, "no admissible candidate (m = 1 should always exist)");
  }
  result.winner = std::get<Certificate>(evaluated[best]);
  result.log_value = result.winner.log_value;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i == best || std::holds_alternative<Rejection>(evaluated[i])) continue;
    const Certificate& cert = std::get<Certificate>(evaluated[i]);
    if (cert.log_value.log_value <= result.log_value.log_value + options.runner_slack) {
      result.runners_up.push_back(cert);
    }
  }
  return result;
}

std::vector<SweepEntry> sweep_n(const ProblemSpec& problem, const std::vector<long long>& n_values,
                                const EstimateOptions& options) {
  std::vector<SweepEntry> out;
  out.reserve(n_values.size());
  for (long long n : n_values) {
    SweepEntry entry;
    entry.n = n;
    ProblemSpec variant = problem;
    variant.n = n;
    try {
      entry.result = estimate(variant, options);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

namespace {

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    if (std::isinf(values[i])) {
      out += "inf";
    } else {
      out += format_double(values[i], 12);
    }
  }
  return out;
}

std::string join_indices_one_based(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(values[i] + 1);
  }
  return out;
}

nlohmann::json certificate_json(const Certificate& cert) {
  nlohmann::json j;
  j["m"] = cert.m;
  nlohmann::json balls = nlohmann::json::array();
  for (std::size_t b : cert.ball_indices) balls.push_back(b + 1);
  j["balls"] = std::move(balls);
  j["z"]["kind"] = z_kind_name(cert.Z.kind);
  nlohmann::json I = nlohmann::json::array();
  for (std::size_t i : cert.Z.I) I.push_back(i + 1);
  j["z"]["I"] = std::move(I);
  j["lambda"] = cert.weights.lambda;
  nlohmann::json theta = nlohmann::json::array();
  for (double t : cert.weights.theta()) {
    if (std::isinf(t)) {
      theta.push_back("inf");
    } else {
      theta.push_back(t);
    }
  }
  j["theta"] = std::move(theta);
  j["theta_reciprocal"] = cert.weights.theta_hat.coords();
  if (cert.weights.omega_common) j["omega_common"] = *cert.weights.omega_common;
  j["log_value"] = cert.log_value.log_value;
  j["value"] = cert.log_value.value();
  return j;
}

}  // namespace

std::string sweep_to_csv(const std::vector<SweepEntry>& entries) {
  std::string csv = "n,log_value,value,m,Z_kind,I,lambda,theta\n";
  for (const SweepEntry& entry : entries) {
    csv += std::to_string(entry.n);
    if (entry.result) {
      const Certificate& cert = entry.result->winner;
      csv += ',';
      csv += format_double(entry.result->log_value.log_value, 12);
      csv += ',';
      csv += format_double(entry.result->log_value.value(), 12);
      csv += ',';
      csv += std::to_string(cert.m);
      csv += ',';
      csv += z_kind_name(cert.Z.kind);
      csv += ',';
      csv += join_indices_one_based(cert.Z.I);
      csv += ',';
      csv += join_doubles(cert.weights.lambda);
      csv += ',';
      csv += join_doubles(cert.weights.theta());
    } else {
      csv += ",,,,,,,";
    }
    csv += '\n';
  }
  return csv;
}

std::string certificate_to_json(const Certificate& cert) { return certificate_json(cert).dump(2); }

std::string estimate_result_to_json(const EstimateResult& result) {
  nlohmann::json j;
  j["log_value"] = result.log_value.log_value;
  j["value"] = result.log_value.value();
  j["certificate"] = certificate_json(result.winner);
  j["candidate_count"] = result.candidate_count;
  nlohmann::json runners = nlohmann::json::array();
  for (const Certificate& cert : result.runners_up) runners.push_back(certificate_json(cert));
  j["runners_up"] = std::move(runners);
  nlohmann::json rejected = nlohmann::json::array();
  for (const RejectedCandidate& r : result.rejected) {
    nlohmann::json rj;
    nlohmann::json balls = nlohmann::json::array();
    for (std::size_t b : r.ball_indices) balls.push_back(b + 1);
    rj["balls"] = std::move(balls);
    rj["z"]["kind"] = z_kind_name(r.Z.kind);
    nlohmann::json I = nlohmann::json::array();
    for (std::size_t i : r.Z.I) I.push_back(i + 1);
    rj["z"]["I"] = std::move(I);
    rj["reason"] = reject_reason_name(r.reason);
    rejected.push_back(std::move(rj));
  }
  j["rejected"] = std::move(rejected);
  return j.dump(2);
}

}  // namespace nwidth
