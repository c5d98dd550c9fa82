#ifndef NWIDTH_ORACLE_HPP
#define NWIDTH_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nwidth/problem.hpp"

namespace nwidth {

struct GridSpec {
  int r = 400;                     // step = 1/r, r >= 2
  long long max_points = 20000000; // enumeration cap
};

// Brute-force reference: the weighted objective minimized over all simplex
// grid points lambda in {0, 1/r, ..., 1}^{#A} with sum 1.  Boundary points
// are included on purpose; they correspond to smaller-support candidates.
struct GridMinResult {
  LogValue log_min;                // raw minimum over the grid
  std::vector<double> weights;     // its lambda
  double error_bound = 0.0;        // Lipschitz constant times the step
  long long points = 0;            // grid points evaluated

  // Certified lower bound on the continuous minimum over the whole simplex.
  double certified_lower_bound() const { return log_min.log_value - error_bound; }
};

GridMinResult grid_min(const ProblemSpec& problem, const GridSpec& grid = {});

// Randomized consistency check of the two order-estimate evaluators.  Every
// instance must satisfy |log phi - log phi_piecewise| <= 1e-9; failures are
// report content, not errors, and carry full reproduction data.
struct PhiCheckFailure {
  std::vector<long long> k;
  std::vector<double> q;
  std::vector<double> x;  // reciprocal exponents
  long long n = 0;
  double phi_log = 0.0;
  double piecewise_log = 0.0;
};

struct PhiCheckReport {
  std::uint64_t seed = 0;
  int samples = 0;
  int max_dim = 0;
  double max_abs_diff = 0.0;
  std::vector<PhiCheckFailure> failures;
};

PhiCheckReport exhaustive_phi_check(int sample_count, int max_dim, std::uint64_t seed);

std::string phi_check_report_to_json(const PhiCheckReport& report);

}  // namespace nwidth

#endif
