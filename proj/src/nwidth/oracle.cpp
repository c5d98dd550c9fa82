#include "nwidth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "nwidth/phi.hpp"

namespace nwidth {

namespace {

long long simplex_grid_size(int r, std::size_t parts) {
  // C(r + parts - 1, parts - 1), saturating
  unsigned __int128 num = 1;
  for (std::size_t i = 1; i < parts; ++i) {
    num = num * (unsigned __int128)(r + i) / i;
    if (num > (unsigned __int128)1 << 62) return (long long)1 << 62;
  }
  return (long long)num;
}

}  // namespace

GridMinResult grid_min(const ProblemSpec& problem, const GridSpec& grid) {
  const ProblemSpec canon = validate(problem);
  if (grid.r < 2) {
    throw Error(ErrorCode::RangeError, "grid resolution r must be >= 2");
  }
  const std::size_t ball_count = canon.balls.size();
  const std::size_t d = canon.dim();
  const long long points = simplex_grid_size(grid.r, ball_count);
  if (points > grid.max_points) {
    throw Error(ErrorCode::CapacityError,
                "simplex grid holds " + std::to_string(points) + " points, cap is " +
                    std::to_string(grid.max_points));
  }

  std::vector<double> log_nu(ball_count);
  for (std::size_t j = 0; j < ball_count; ++j) log_nu[j] = std::log(canon.balls[j].nu);

  const double step = 1.0 / grid.r;
  GridMinResult result;
  result.points = points;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> counts(ball_count, 0);
  std::vector<double> hat(d, 0.0);
  counts[0] = grid.r;

  // lexicographic enumeration of compositions of r into #A parts
  while (true) {
    double log_nu_part = 0.0;
    std::fill(hat.begin(), hat.end(), 0.0);
    for (std::size_t j = 0; j < ball_count; ++j) {
      if (counts[j] == 0) continue;
      const double lj = counts[j] * step;
      log_nu_part += lj * log_nu[j];
      const ReciprocalVector& x = canon.balls[j].x;
      for (std::size_t i = 0; i < d; ++i) hat[i] += lj * x[i];
    }
    for (double& v : hat) v = std::clamp(v, 0.0, 1.0);
    const double value =
        log_nu_part + phi_log(ReciprocalVector(hat), canon.q, canon.k, canon.n).log_value;
    if (value < best) {
      best = value;
      result.weights.assign(ball_count, 0.0);
      for (std::size_t j = 0; j < ball_count; ++j) result.weights[j] = counts[j] * step;
    }

    // next composition: move one unit from the first nonzero prefix slot
    std::size_t idx = 0;
    while (idx + 1 < ball_count && counts[idx] == 0) ++idx;
    if (idx + 1 >= ball_count) break;
    const int head = counts[idx];
    counts[idx] = 0;
    counts[0] = head - 1;
    ++counts[idx + 1];
  }
  result.log_min = LogValue{best};

  double max_log_nu = 0.0;
  for (double l : log_nu) max_log_nu = std::max(max_log_nu, std::fabs(l));
  double sum_log_k = 0.0;
  for (long long ki : canon.k) sum_log_k += std::log((double)std::max<long long>(ki, 2));
  const double lipschitz =
      (double)ball_count * (max_log_nu + sum_log_k + 0.5 * std::log((double)std::max<long long>(canon.n, 2)));
  result.error_bound = lipschitz * step;
  return result;
}

PhiCheckReport exhaustive_phi_check(int sample_count, int max_dim, std::uint64_t seed) {
  PhiCheckReport report;
  report.seed = seed;
  report.samples = sample_count;
  report.max_dim = max_dim;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(1, std::max(1, max_dim));
  std::uniform_int_distribution<long long> k_dist(1, 1 << 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int s = 0; s < sample_count; ++s) {
    const int d = dim_dist(rng);
    std::vector<long long> k(d);
    std::vector<double> q(d);
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) {
      k[i] = k_dist(rng);
      const double uq = unit(rng);
      q[i] = uq < 0.1 ? 2.0 : 2.0 + 14.0 * unit(rng);
      const double ux = unit(rng);
      if (ux < 0.1) {
        x[i] = 1.0;            // p = 1
      } else if (ux < 0.2) {
        x[i] = 0.5;            // p = 2
      } else if (ux < 0.3) {
        x[i] = 1.0 / q[i];     // p = q
      } else if (ux < 0.4) {
        x[i] = 0.0;            // p = inf
      } else {
        x[i] = unit(rng);
      }
    }
    const long long n_max = max_width_index(k);
    if (n_max < 1) {
      --s;  // all k_i = 1, no admissible n
      continue;
    }
    // log-uniform n covers every breakpoint regime
    const double log_n = unit(rng) * std::log((double)n_max);
    const double val = std::exp(log_n);
    long long n = n_max;
    if (val < (double)n_max) n = std::max(1LL, (long long)std::llround(val));

    const ReciprocalVector p(x);
    const double a = phi_log(p, q, k, n).log_value;
    const double b = phi_piecewise_log(p, q, k, n).log_value;
    const double diff = std::fabs(a - b);
    report.max_abs_diff = std::max(report.max_abs_diff, diff);
    if (diff > 1e-9) {
      report.failures.push_back(PhiCheckFailure{k, q, x, n, a, b});
    }
  }
  return report;
}

std::string phi_check_report_to_json(const PhiCheckReport& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["max_dim"] = report.max_dim;
  j["max_abs_diff"] = report.max_abs_diff;
  j["failure_count"] = report.failures.size();
  nlohmann::json failures = nlohmann::json::array();
  for (const PhiCheckFailure& f : report.failures) {
    nlohmann::json fj;
    fj["k"] = f.k;
    fj["q"] = f.q;
    fj["reciprocal_p"] = f.x;
    fj["n"] = f.n;
    fj["phi_log"] = f.phi_log;
    fj["piecewise_log"] = f.piecewise_log;
    failures.push_back(std::move(fj));
  }
  j["failures"] = std::move(failures);
  return j.dump(2);
}

}  // namespace nwidth
