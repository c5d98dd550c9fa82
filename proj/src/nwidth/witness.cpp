#include "nwidth/witness.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "nwidth/phi.hpp"

namespace nwidth {

namespace {

void check_skn(const std::vector<double>& q, const std::vector<long long>& k,
               const std::vector<double>& s, double n) {
  if (q.size() != k.size() || q.size() != s.size()) {
    throw Error(ErrorCode::DimensionMismatch, "q, k and s must have equal dimension");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 1.0 - 1e-12) || s[i] > (double)k[i] * (1.0 + 1e-12)) {
      throw Error(ErrorCode::RangeError, "s_" + std::to_string(i + 1) + " outside [1, k]");
    }
  }
  if (!(n >= 1.0)) {
    throw Error(ErrorCode::IndexError, "n must be >= 1");
  }
}

}  // namespace

double octahedron_bound_small_n_log(const std::vector<double>& q, const std::vector<long long>& k,
                                   const std::vector<double>& s) {
  (void)k;
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) v += (1.0 / q[i]) * std::log(s[i]);
  return v;
}

double octahedron_bound_large_n_log(const std::vector<double>& q, const std::vector<long long>& k,
                                   const std::vector<double>& s, double n) {
  double v = -0.5 * std::log(n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    v += (1.0 / q[i]) * std::log((double)k[i]) + 0.5 * std::log(s[i]);
  }
  return v;
}

double octahedron_bound_breakpoint_log(const std::vector<double>& q, const std::vector<long long>& k,
                               const std::vector<double>& s) {
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    v += (2.0 / q[i]) * std::log((double)k[i]) + (1.0 - 2.0 / q[i]) * std::log(s[i]);
  }
  return v;
}

double octahedron_width_bound_log(const std::vector<double>& q, const std::vector<long long>& k,
                    const std::vector<double>& s, double n) {
  check_skn(q, k, s, n);
  return std::min(octahedron_bound_small_n_log(q, k, s),
                  octahedron_bound_large_n_log(q, k, s, n));
}

WitnessSet build_witness_m1(const ProblemSpec& problem, std::size_t alpha) {
  const ProblemSpec canon = validate(problem);
  if (alpha >= canon.balls.size()) {
    throw Error(ErrorCode::IndexError, "ball index out of range");
  }
  const std::size_t d = canon.dim();
  const ReciprocalVector& x = canon.balls[alpha].x;
  const PhiContext ctx = build_context(x, canon.q);
  const std::vector<std::size_t>& sigma = ctx.sigma;
  const std::size_t mu = ctx.mu;
  const std::size_t nu = ctx.nu_count;

  std::vector<double> log_k(d);
  for (std::size_t i = 0; i < d; ++i) log_k[i] = std::log((double)canon.k[i]);
  const double log_n = std::log((double)canon.n);

  std::vector<double> log_breakpoint(d + 1, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    log_breakpoint[0] += (2.0 / canon.q[sigma[j]]) * log_k[sigma[j]];
  for (std::size_t t = 1; t <= d; ++t) {
    const std::size_t i = sigma[t - 1];
    log_breakpoint[t] = log_breakpoint[t - 1] + (1.0 - 2.0 / canon.q[i]) * log_k[i];
  }

  WitnessSet w;
  w.alpha = alpha;
  w.s.assign(d, 1.0);
  w.u.assign(d, 1);
  std::size_t fractional = d;  // sorted position of the fractional coordinate, d = none

  if (log_n <= log_breakpoint[mu]) {
    for (std::size_t j = 0; j < mu; ++j) w.s[sigma[j]] = (double)canon.k[sigma[j]];
  } else {
    std::size_t t = nu + 1;  // off the middle range means the saturated tail case
    for (std::size_t cand = mu + 1; cand <= nu; ++cand) {
      if (log_n <= log_breakpoint[cand]) {
        t = cand;
        break;
      }
    }
    if (t <= nu) {
      for (std::size_t j = 0; j + 1 < t; ++j) w.s[sigma[j]] = (double)canon.k[sigma[j]];
      const std::size_t i = sigma[t - 1];
      double bracket = 0.5 * log_n;
      for (std::size_t j = 0; j + 1 < t; ++j) bracket -= 0.5 * log_k[sigma[j]];
      for (std::size_t j = t - 1; j < d; ++j) bracket -= (1.0 / canon.q[sigma[j]]) * log_k[sigma[j]];
      const double log_s = bracket / (0.5 - 1.0 / canon.q[i]);
      w.s[i] = std::clamp(std::exp(log_s), 1.0, (double)canon.k[i]);
      fractional = t - 1;
    } else {
      for (std::size_t j = 0; j < nu; ++j) w.s[sigma[j]] = (double)canon.k[sigma[j]];
    }
  }

  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t i = sigma[j];
    if (j == fractional) {
      w.u[i] = std::min((long long)std::ceil(w.s[i] - 1e-12), canon.k[i]);
    } else {
      w.u[i] = (long long)std::llround(w.s[i]);
    }
    w.u[i] = std::clamp(w.u[i], 1LL, canon.k[i]);
  }

  w.scale_log = std::log(canon.balls[alpha].nu);
  for (std::size_t i = 0; i < d; ++i) w.scale_log -= x[i] * std::log((double)w.u[i]);
  std::vector<double> u_real(d);
  for (std::size_t i = 0; i < d; ++i) u_real[i] = (double)w.u[i];
  w.octahedron_bound_log = octahedron_width_bound_log(canon.q, canon.k, u_real, (double)canon.n);
  return w;
}

InclusionReport inclusion_check(const ProblemSpec& problem, const WitnessSet& witness,
                                double slack) {
  const ProblemSpec canon = validate(problem);
  if (witness.alpha >= canon.balls.size() || witness.s.size() != canon.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "witness does not match the problem");
  }
  const ReciprocalVector& xa = canon.balls[witness.alpha].x;
  const double log_nu_alpha = std::log(canon.balls[witness.alpha].nu);

  InclusionReport report;
  report.alpha = witness.alpha;
  report.slack = slack;
  for (std::size_t beta = 0; beta < canon.balls.size(); ++beta) {
    const ReciprocalVector& xb = canon.balls[beta].x;
    InclusionRow row;
    row.beta = beta;
    row.lhs_log = log_nu_alpha;
    for (std::size_t i = 0; i < canon.dim(); ++i) {
      row.lhs_log += (xb[i] - xa[i]) * std::log(witness.s[i]);
    }
    row.rhs_log = std::log(canon.balls[beta].nu);
    row.pass = row.lhs_log <= row.rhs_log + slack;
    if (!row.pass) report.all_pass = false;
    report.rows.push_back(row);
  }
  return report;
}

std::string witness_to_json(const WitnessSet& witness, const InclusionReport& inclusion) {
  nlohmann::json j;
  j["ball"] = witness.alpha + 1;
  j["s"] = witness.s;
  j["u"] = witness.u;
  j["scale_log"] = witness.scale_log;
  j["octahedron_bound_log"] = witness.octahedron_bound_log;
  j["witness_log_value"] = witness.witness_log_value();
  nlohmann::json rows = nlohmann::json::array();
  for (const InclusionRow& row : inclusion.rows) {
    nlohmann::json rj;
    rj["ball"] = row.beta + 1;
    rj["lhs_log"] = row.lhs_log;
    rj["rhs_log"] = row.rhs_log;
    rj["margin"] = row.margin();
    rj["pass"] = row.pass;
    rows.push_back(std::move(rj));
  }
  j["inclusion"]["slack"] = inclusion.slack;
  j["inclusion"]["rows"] = std::move(rows);
  j["inclusion"]["pass"] = inclusion.all_pass;
  return j.dump(2);
}

}  // namespace nwidth
