#ifndef NWIDTH_ESTIMATOR_HPP
#define NWIDTH_ESTIMATOR_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nwidth/geometry.hpp"
#include "nwidth/problem.hpp"

namespace nwidth {

// One admissible (ball subset, plane) pair with its solved weights and the
// weighted order-estimate value log(prod nu^lambda * Phi(theta)).
struct Certificate {
  std::size_t m = 1;
  std::vector<std::size_t> ball_indices;  // sorted, 0-based into the canonical problem
  CandidateZ Z;
  WeightSolution weights;
  LogValue log_value;
};

struct RejectedCandidate {
  std::vector<std::size_t> ball_indices;
  CandidateZ Z;
  RejectReason reason;
};

struct EstimateResult {
  LogValue log_value;                     // the attained minimum
  Certificate winner;
  std::vector<Certificate> runners_up;    // accepted candidates within runner_slack of the winner
  std::size_t candidate_count = 0;        // accepted candidates enumerated
  std::vector<RejectedCandidate> rejected;
};

struct EstimateOptions {
  double tol = kDefaultTol;
  int threads = 1;
  double runner_slack = kDefaultTol;
  bool collect_rejections = true;
};

// Evaluates the right-hand side of the main order estimate: minimum over
// m = 1..min(#A, d+1), unordered m-subsets of balls, and candidate planes,
// of the weighted value.  Ties break lexicographically on
// (m, ball_indices, Z canonical order); results are identical regardless of
// the thread count.  The input is canonicalized first.
EstimateResult estimate(const ProblemSpec& problem, const EstimateOptions& options = {});

// Value of one candidate, or the solver's rejection.
std::variant<Certificate, Rejection> candidate_value(const ProblemSpec& problem,
                                                     const std::vector<std::size_t>& ball_indices,
                                                     const CandidateZ& Z,
                                                     double tol = kDefaultTol);

// Upper-bound value prod nu_j^{lambda_j} * Phi(theta(lambda)) for arbitrary
// simplex weights over the given balls, structured or not.
LogValue upper_bound_value(const ProblemSpec& problem,
                           const std::vector<std::size_t>& ball_indices,
                           const std::vector<double>& lambda);

struct SweepEntry {
  long long n = 0;
  std::optional<EstimateResult> result;  // empty when this n failed validation
  std::string error;
};

// Independent estimates per n; per-entry validation errors are collected,
// not fatal.  Output order matches the input order.
std::vector<SweepEntry> sweep_n(const ProblemSpec& problem, const std::vector<long long>& n_values,
                                const EstimateOptions& options = {});

// CSV rendering with header n,log_value,value,m,Z_kind,I,lambda,theta.
// Vector cells use ';' separators, indices are 1-based, decimal separator is
// always '.', lines end with '\n'.  Failed entries keep only the n cell.
std::string sweep_to_csv(const std::vector<SweepEntry>& entries);

std::string certificate_to_json(const Certificate& cert);
std::string estimate_result_to_json(const EstimateResult& result);

}  // namespace nwidth

#endif
