#ifndef NWIDTH_WITNESS_HPP
#define NWIDTH_WITNESS_HPP

#include <string>
#include <vector>

#include "nwidth/problem.hpp"

namespace nwidth {

// Single-ball lower-bound witness: the side lengths s (one possibly
// fractional coordinate), their rounding u, and the scaled lower-bound value
// of the averaged-octahedron set nu * prod u^{-1/p} * V^k_u.
struct WitnessSet {
  std::size_t alpha = 0;           // ball index
  std::vector<double> s;           // 1 <= s_i <= k_i
  std::vector<long long> u;        // ceil on the fractional coordinate, s elsewhere
  double scale_log = 0.0;          // log(nu * prod u_i^{-1/p_i})
  double octahedron_bound_log = 0.0; // lower-bound order value at u

  double witness_log_value() const { return scale_log + octahedron_bound_log; }
};

// Builds the witness for one ball: orders the coordinates, locates the
// regime of n among the breakpoints prod_{i<=t} k prod_{i>t} k^{2/q}, and
// fills s with k on the saturated block, 1 on the tail, and the single
// fractional solve in between.
WitnessSet build_witness_m1(const ProblemSpec& problem, std::size_t alpha);

// Two-branch lower-bound value for the averaged octahedron, log domain:
//   min( sum (1/q) log s,  -log(n)/2 + sum (1/q) log k + sum (1/2) log s ).
// The two branches agree at the breakpoint n = prod k^{2/q} s^{1-2/q}.
double octahedron_width_bound_log(const std::vector<double>& q, const std::vector<long long>& k,
                    const std::vector<double>& s, double n);

// The two branches individually, for breakpoint studies.
double octahedron_bound_small_n_log(const std::vector<double>& q, const std::vector<long long>& k,
                                   const std::vector<double>& s);
double octahedron_bound_large_n_log(const std::vector<double>& q, const std::vector<long long>& k,
                                   const std::vector<double>& s, double n);
double octahedron_bound_breakpoint_log(const std::vector<double>& q, const std::vector<long long>& k,
                               const std::vector<double>& s);

// Containment certificate: nu_alpha * prod s_i^{1/p_beta - 1/p_alpha} must
// not exceed nu_beta for any ball beta.  Evaluated in the log domain.
struct InclusionRow {
  std::size_t beta = 0;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  bool pass = true;

  double margin() const { return rhs_log - lhs_log; }
};

struct InclusionReport {
  std::size_t alpha = 0;
  double slack = 0.0;
  std::vector<InclusionRow> rows;
  bool all_pass = true;
};

InclusionReport inclusion_check(const ProblemSpec& problem, const WitnessSet& witness,
                                double slack = kDefaultTol);

std::string witness_to_json(const WitnessSet& witness, const InclusionReport& inclusion);

}  // namespace nwidth

#endif
