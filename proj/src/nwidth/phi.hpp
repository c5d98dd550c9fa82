#ifndef NWIDTH_PHI_HPP
#define NWIDTH_PHI_HPP

#include <cstddef>
#include <vector>

#include "nwidth/problem.hpp"

namespace nwidth {

// Tolerance for deciding omega == 0 / omega == 1 membership counts.
inline constexpr double kOmegaMembershipTol = 1e-12;

// Interpolation exponent in reciprocal coordinates (x = 1/p, y = 1/q):
// 0 for x < y, 1 for x >= 1/2, (x - y) / (1/2 - y) in between.  Requires
// 0 < y <= 1/2; at y = 1/2 the value is the 0/1 step at x = 1/2.
double omega_clamped(double x, double y);

// Unclamped variant (x - y) / (1/2 - y); defined only for y < 1/2 strictly.
double omega_prime(double x, double y);

// Ordering permutation, block counts and truncated exponents for one ball.
struct PhiContext {
  std::vector<std::size_t> sigma;  // sigma[j] = coordinate with j-th smallest omega
  std::vector<double> omega;       // omega per original coordinate
  std::size_t mu = 0;              // #{ omega == 0 } within tolerance
  std::size_t nu_count = 0;        // #{ omega < 1 } within tolerance
  std::vector<double> p_star;      // min(x_i, 1/2), i.e. 1/max(p_i, 2)
};

PhiContext build_context(const ReciprocalVector& x, const std::vector<double>& q,
                         double tol = kOmegaMembershipTol);

// The order-estimate function: log of
//   prod_{j<=mu} k_{s(j)}^{1/q-1/p} *
//   min{ 1, min_{mu<t<=d} prod_{j=mu+1}^{t-1} k_{s(j)}^{1/q-1/p*} *
//        (n^{-1/2} prod_{j<t} k_{s(j)}^{1/2} prod_{j>=t} k_{s(j)}^{1/q})^{omega_{s(t)}} }
// with the empty inner min read as +infinity.  All arithmetic stays in the
// log domain.
LogValue phi_log(const ReciprocalVector& x, const std::vector<double>& q,
                 const std::vector<long long>& k, long long n);

// Same value evaluated under a caller-supplied ordering permutation, which
// must sort omega non-decreasingly (ties may be ordered arbitrarily).
LogValue phi_log_with_sigma(const ReciprocalVector& x, const std::vector<double>& q,
                            const std::vector<long long>& k, long long n,
                            const std::vector<std::size_t>& sigma);

// Closed-form evaluation that first locates the regime of n among the
// breakpoints prod_{i<=t} k_{s(i)} prod_{i>t} k_{s(i)}^{2/q}.  Serves as an
// independent cross-check of phi_log.
LogValue phi_piecewise_log(const ReciprocalVector& x, const std::vector<double>& q,
                           const std::vector<long long>& k, long long n);

}  // namespace nwidth

#endif
