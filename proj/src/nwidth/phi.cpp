#include "nwidth/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nwidth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const ReciprocalVector& x, const std::vector<double>& q,
                const std::vector<long long>& k) {
  if (x.dim() != q.size() || x.dim() != k.size()) {
    throw Error(ErrorCode::DimensionMismatch, "p, q and k must have equal dimension");
  }
}

}  // namespace

double omega_clamped(double x, double y) {
  if (!(y > 0.0) || y > 0.5) {
    throw Error(ErrorCode::RangeError, "reciprocal target 1/q must lie in (0, 1/2]");
  }
  if (x >= 0.5) return 1.0;
  if (x < y) return 0.0;
  return (x - y) / (0.5 - y);
}

double omega_prime(double x, double y) {
  if (!(y > 0.0) || y >= 0.5) {
    throw Error(ErrorCode::RangeError, "omega' needs 1/q strictly below 1/2");
  }
  return (x - y) / (0.5 - y);
}

PhiContext build_context(const ReciprocalVector& x, const std::vector<double>& q, double tol) {
  const std::size_t d = x.dim();
  if (q.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "p and q must have equal dimension");
  }
  PhiContext ctx;
  ctx.omega.resize(d);
  ctx.p_star.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    ctx.omega[i] = omega_clamped(x[i], 1.0 / q[i]);
    ctx.p_star[i] = std::min(x[i], 0.5);
  }
  ctx.sigma.resize(d);
  std::iota(ctx.sigma.begin(), ctx.sigma.end(), std::size_t{0});
  std::stable_sort(ctx.sigma.begin(), ctx.sigma.end(),
                   [&](std::size_t a, std::size_t b) { return ctx.omega[a] < ctx.omega[b]; });
  ctx.mu = 0;
  ctx.nu_count = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const double w = ctx.omega[ctx.sigma[j]];
    if (w <= tol) ctx.mu = j + 1;
    if (w < 1.0 - tol) ctx.nu_count = j + 1;
  }
  return ctx;
}

LogValue phi_log_with_sigma(const ReciprocalVector& x, const std::vector<double>& q,
                            const std::vector<long long>& k, long long n,
                            const std::vector<std::size_t>& sigma) {
  check_dims(x, q, k);
  const std::size_t d = x.dim();
  if (n < 1) {
    throw Error(ErrorCode::IndexError, "width index n must be >= 1");
  }
  if (sigma.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "sigma must be a permutation of the coordinates");
  }

  PhiContext ctx = build_context(x, q);
  {
    std::vector<bool> seen(d, false);
    for (std::size_t j = 0; j < d; ++j) {
      if (sigma[j] >= d || seen[sigma[j]]) {
        throw Error(ErrorCode::RangeError, "sigma is not a permutation");
      }
      seen[sigma[j]] = true;
      if (j > 0 && ctx.omega[sigma[j]] < ctx.omega[sigma[j - 1]] - kDefaultTol) {
        throw Error(ErrorCode::RangeError, "sigma does not sort omega non-decreasingly");
      }
    }
  }
  // mu / nu counts are order-independent; only the ordering itself varies.
  const std::size_t mu = ctx.mu;

  const double log_n = std::log((double)n);
  std::vector<double> log_k(d);
  for (std::size_t i = 0; i < d; ++i) log_k[i] = std::log((double)k[i]);

  double mu_block = 0.0;
  for (std::size_t j = 0; j < mu; ++j) {
    const std::size_t i = sigma[j];
    mu_block += (1.0 / q[i] - x[i]) * log_k[i];
  }

  // suffix_q[t] = sum_{j>=t} (1/q) log k over sorted positions
  std::vector<double> suffix_q(d + 1, 0.0);
  for (std::size_t j = d; j-- > 0;) {
    const std::size_t i = sigma[j];
    suffix_q[j] = suffix_q[j + 1] + (1.0 / q[i]) * log_k[i];
  }

  double inner = kInf;
  double prefix_half = 0.0;    // sum_{j<t} (1/2) log k
  double middle = 0.0;         // sum_{j=mu..t-1} (1/q - 1/p*) log k
  for (std::size_t j = 0; j < mu; ++j) prefix_half += 0.5 * log_k[sigma[j]];
  for (std::size_t t = mu; t < d; ++t) {
    const std::size_t i = sigma[t];
    const double term = middle + ctx.omega[i] * (-0.5 * log_n + prefix_half + suffix_q[t]);
    inner = std::min(inner, term);
    prefix_half += 0.5 * log_k[i];
    middle += (1.0 / q[i] - ctx.p_star[i]) * log_k[i];
  }

  return LogValue{mu_block + std::min(0.0, inner)};
}

LogValue phi_log(const ReciprocalVector& x, const std::vector<double>& q,
                 const std::vector<long long>& k, long long n) {
  check_dims(x, q, k);
  PhiContext ctx = build_context(x, q);
  // Ties in omega may be ordered arbitrarily; breaking them on coordinate
  // data instead of position keeps the value bit-identical under
  // simultaneous relabeling of (p, q, k).
  std::vector<std::size_t> sigma = ctx.sigma;
  std::sort(sigma.begin(), sigma.end(), [&](std::size_t a, std::size_t b) {
    if (ctx.omega[a] != ctx.omega[b]) return ctx.omega[a] < ctx.omega[b];
    if (x[a] != x[b]) return x[a] < x[b];
    if (q[a] != q[b]) return q[a] < q[b];
    return k[a] < k[b];
  });
  return phi_log_with_sigma(x, q, k, n, sigma);
}

LogValue phi_piecewise_log(const ReciprocalVector& x, const std::vector<double>& q,
                           const std::vector<long long>& k, long long n) {
  check_dims(x, q, k);
  const std::size_t d = x.dim();
  if (n < 1) {
    throw Error(ErrorCode::IndexError, "width index n must be >= 1");
  }

  PhiContext ctx = build_context(x, q);
  const std::vector<std::size_t>& sigma = ctx.sigma;
  const std::size_t mu = ctx.mu;
  const std::size_t nu = ctx.nu_count;

  const double log_n = std::log((double)n);
  std::vector<double> log_k(d);
  for (std::size_t i = 0; i < d; ++i) log_k[i] = std::log((double)k[i]);

  // log of the breakpoint prod_{i<=t} k prod_{i>t} k^{2/q}, t = 0..d
  std::vector<double> log_breakpoint(d + 1, 0.0);
  double full = 0.0;
  for (std::size_t j = 0; j < d; ++j) full += (2.0 / q[sigma[j]]) * log_k[sigma[j]];
  log_breakpoint[0] = full;
  for (std::size_t t = 1; t <= d; ++t) {
    const std::size_t i = sigma[t - 1];
    log_breakpoint[t] = log_breakpoint[t - 1] + (1.0 - 2.0 / q[i]) * log_k[i];
  }

  auto head_product = [&](std::size_t count) {
    double s = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t i = sigma[j];
      s += (1.0 / q[i] - x[i]) * log_k[i];
    }
    return s;
  };

  if (log_n <= log_breakpoint[mu]) {
    return LogValue{head_product(mu)};
  }
  for (std::size_t t = mu + 1; t <= nu; ++t) {
    if (log_n <= log_breakpoint[t]) {
      const std::size_t i = sigma[t - 1];
      double bracket = -0.5 * log_n;
      for (std::size_t j = 0; j + 1 < t; ++j) bracket += 0.5 * log_k[sigma[j]];
      for (std::size_t j = t - 1; j < d; ++j) bracket += (1.0 / q[sigma[j]]) * log_k[sigma[j]];
      const double expo = (x[i] - 1.0 / q[i]) / (0.5 - 1.0 / q[i]);
      return LogValue{head_product(t - 1) + expo * bracket};
    }
  }
  double tail = head_product(nu) - 0.5 * log_n;
  for (std::size_t j = 0; j < nu; ++j) tail += 0.5 * log_k[sigma[j]];
  for (std::size_t j = nu; j < d; ++j) tail += (1.0 / q[sigma[j]]) * log_k[sigma[j]];
  return LogValue{tail};
}

}  // namespace nwidth
