#ifndef NWIDTH_TESTS_SUPPORT_HPP
#define NWIDTH_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "nwidth/problem.hpp"

namespace nwtest {

struct InstanceConfig {
  int min_dim = 1;
  int max_dim = 3;
  int min_balls = 1;
  int max_balls = 3;
  long long max_k = 1024;
  long long min_k = 1;
  double q_lo = 2.0;
  double q_hi = 16.0;
  double q_two_probability = 0.0;     // chance of q exactly 2
  double boundary_p_probability = 0.0; // chance of p in {1, 2, q, inf}
  bool interior_exponents = false;     // keep x away from 0/1 for perturbation room
};

inline nwidth::ProblemSpec random_problem(std::mt19937_64& rng, const InstanceConfig& cfg = {}) {
  std::uniform_int_distribution<int> dim_dist(cfg.min_dim, cfg.max_dim);
  std::uniform_int_distribution<int> ball_dist(cfg.min_balls, cfg.max_balls);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  while (true) {
    const int d = dim_dist(rng);
    nwidth::ProblemSpec problem;
    problem.k.resize(d);
    problem.q.resize(d);
    std::uniform_int_distribution<long long> k_dist(cfg.min_k, cfg.max_k);
    for (int i = 0; i < d; ++i) {
      problem.k[i] = k_dist(rng);
      problem.q[i] = unit(rng) < cfg.q_two_probability
                         ? 2.0
                         : cfg.q_lo + (cfg.q_hi - cfg.q_lo) * unit(rng);
    }
    const long long n_max = nwidth::max_width_index(problem.k);
    if (n_max < 1) continue;

    const int balls = ball_dist(rng);
    for (int b = 0; b < balls; ++b) {
      nwidth::BallSpec ball;
      ball.nu = std::exp(4.0 * (unit(rng) - 0.5));  // nu in about [e^-2, e^2]
      std::vector<double> x(d);
      for (int i = 0; i < d; ++i) {
        if (cfg.interior_exponents) {
          x[i] = 0.1 + 0.8 * unit(rng);
        } else if (unit(rng) < cfg.boundary_p_probability) {
          switch ((int)(unit(rng) * 4.0)) {
            case 0: x[i] = 1.0; break;             // p = 1
            case 1: x[i] = 0.5; break;             // p = 2
            case 2: x[i] = 1.0 / problem.q[i]; break;  // p = q
            default: x[i] = 0.0; break;            // p = inf
          }
        } else {
          x[i] = unit(rng);
        }
      }
      ball.x = nwidth::ReciprocalVector(std::move(x));
      problem.balls.push_back(std::move(ball));
    }

    const double log_n = unit(rng) * std::log((double)n_max);
    const double val = std::exp(log_n);
    problem.n = n_max;
    if (val < (double)n_max) {
      problem.n = std::max(1LL, (long long)std::llround(val));
    }
    try {
      return nwidth::validate(problem);
    } catch (const nwidth::Error&) {
      continue;  // duplicate balls collapsed below min, etc.
    }
  }
}

// Every permutation that sorts omega non-decreasingly: the stable order with
// tied blocks permuted in all ways.  Instances are expected to keep this
// small.
inline std::vector<std::vector<std::size_t>> all_valid_orderings(const std::vector<double>& omega,
                                                                 double tie_tol = 1e-12) {
  const std::size_t d = omega.size();
  std::vector<std::size_t> base(d);
  std::iota(base.begin(), base.end(), std::size_t{0});
  std::stable_sort(base.begin(), base.end(),
                   [&](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

  std::vector<std::vector<std::size_t>> orderings{{}};
  std::size_t start = 0;
  while (start < d) {
    std::size_t end = start + 1;
    while (end < d && std::fabs(omega[base[end]] - omega[base[start]]) <= tie_tol) ++end;
    std::vector<std::size_t> block(base.begin() + start, base.begin() + end);
    std::sort(block.begin(), block.end());
    std::vector<std::vector<std::size_t>> grown;
    do {
      for (const auto& prefix : orderings) {
        std::vector<std::size_t> next = prefix;
        next.insert(next.end(), block.begin(), block.end());
        grown.push_back(std::move(next));
      }
    } while (std::next_permutation(block.begin(), block.end()));
    orderings = std::move(grown);
    start = end;
  }
  return orderings;
}

}  // namespace nwtest

#endif
