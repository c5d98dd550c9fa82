#include "nwidth/genpos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "json.hpp"
#include "nwidth/estimator.hpp"
#include "nwidth/geometry.hpp"
#include "nwidth/numerics.hpp"

namespace nwidth {

namespace {

bool q_is_two(double q, double tol) { return std::fabs(1.0 / q - 0.5) <= tol; }

void for_each_subset(std::size_t universe, std::size_t size,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (size > universe) return;
  std::vector<std::size_t> subset(size);
  for (std::size_t i = 0; i < size; ++i) subset[i] = i;
  while (true) {
    fn(subset);
    std::size_t i = size;
    while (i > 0 && subset[i - 1] == universe - size + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
  }
}

// One mixed constraint system: pins at 1/q, pins at 1/2, and chains of equal
// omega' over disjoint groups.  Constraint count is m - 1.
struct ConstraintSystem {
  std::vector<std::size_t> q_pins;
  std::vector<std::size_t> half_pins;
  std::vector<std::vector<std::size_t>> omega_groups;  // each of size >= 2, q > 2 members only

  std::size_t constraint_count() const {
    std::size_t c = q_pins.size() + half_pins.size();
    for (const auto& g : omega_groups) c += g.size() - 1;
    return c;
  }
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out = q_pins;
    out.insert(out.end(), half_pins.begin(), half_pins.end());
    for (const auto& g : omega_groups) out.insert(out.end(), g.begin(), g.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  std::string describe() const {
    std::string s;
    for (std::size_t i : q_pins) s += "x" + std::to_string(i + 1) + "=1/q; ";
    for (std::size_t i : half_pins) s += "x" + std::to_string(i + 1) + "=1/2; ";
    for (const auto& g : omega_groups) {
      s += "omega'{";
      for (std::size_t t = 0; t < g.size(); ++t) s += (t ? "," : "") + std::to_string(g[t] + 1);
      s += "}; ";
    }
    if (!s.empty()) s.resize(s.size() - 2);
    return s;
  }
};

std::vector<AffineRow> system_rows(const ConstraintSystem& sys, const std::vector<double>& q) {
  const std::size_t d = q.size();
  std::vector<AffineRow> rows;
  auto pin = [&](std::size_t i, double rhs) {
    AffineRow row;
    row.c.assign(d, 0.0);
    row.c[i] = 1.0;
    row.rhs = rhs;
    rows.push_back(std::move(row));
  };
  for (std::size_t i : sys.q_pins) pin(i, 1.0 / q[i]);
  for (std::size_t i : sys.half_pins) pin(i, 0.5);
  for (const auto& g : sys.omega_groups) {
    for (std::size_t t = 0; t + 1 < g.size(); ++t) {
      const std::size_t a = g[t];
      const std::size_t b = g[t + 1];
      const double ca = 1.0 / (0.5 - 1.0 / q[a]);
      const double cb = 1.0 / (0.5 - 1.0 / q[b]);
      AffineRow row;
      row.c.assign(d, 0.0);
      row.c[a] = ca;
      row.c[b] = -cb;
      row.rhs = ca / q[a] - cb / q[b];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Enumerates every mixed system once: label each coordinate free / Q-pin /
// half-pin / member of an omega group, groups in restricted-growth order.
// For q == 2 coordinates the Q-pin coincides with the half-pin and omega
// membership is undefined, so only the half-pin label is offered.
void enumerate_systems(const std::vector<double>& q, double tol,
                       const std::function<void(const ConstraintSystem&)>& fn) {
  const std::size_t d = q.size();
  ConstraintSystem sys;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      for (const auto& g : sys.omega_groups) {
        if (g.size() < 2) return;
      }
      const std::size_t c = sys.constraint_count();
      if (c >= 1 && c <= d) fn(sys);
      return;
    }
    rec(i + 1);  // free
    if (q_is_two(q[i], tol)) {
      sys.half_pins.push_back(i);
      rec(i + 1);
      sys.half_pins.pop_back();
    } else {
      sys.q_pins.push_back(i);
      rec(i + 1);
      sys.q_pins.pop_back();
      sys.half_pins.push_back(i);
      rec(i + 1);
      sys.half_pins.pop_back();
      for (std::size_t g = 0; g <= sys.omega_groups.size(); ++g) {
        if (g == sys.omega_groups.size()) sys.omega_groups.emplace_back();
        sys.omega_groups[g].push_back(i);
        rec(i + 1);
        sys.omega_groups[g].pop_back();
        if (sys.omega_groups[g].empty()) sys.omega_groups.pop_back();
      }
    }
  };
  rec(0);
}

// Does the plane given by the rows meet the closed simplex spanned by the
// points?  Overdetermined and generically infeasible for fewer points than
// rows + 1; rank-deficient consistent systems are reported as intersecting.
bool plane_meets_simplex(const std::vector<AffineRow>& rows,
                         const std::vector<ReciprocalVector>& points, double tol) {
  const std::size_t k = points.size();
  SmallMatrix A(rows.size() + 1, k);
  std::vector<double> b(rows.size() + 1, 0.0);
  for (std::size_t j = 0; j < k; ++j) A.at(0, j) = 1.0;
  b[0] = 1.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows[r].c.size(); ++i) s += rows[r].c[i] * points[j][i];
      A.at(r + 1, j) = s;
    }
    b[r + 1] = rows[r].rhs;
  }
  const LinearSystemAnalysis analysis = analyze_system(std::move(A), std::move(b), tol);
  if (!analysis.consistent) return false;
  if (!analysis.unique) return true;  // degenerate solution set, treat as meeting
  for (double l : analysis.particular) {
    if (l < -tol) return false;
  }
  return true;
}

bool complementary(const std::vector<AffineRow>& rows,
                   const std::vector<ReciprocalVector>& points, double cutoff) {
  const std::size_t m = points.size();
  SmallMatrix A(m, m);
  std::vector<double> b(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) A.at(0, j) = 1.0;
  b[0] = 1.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows[r].c.size(); ++i) s += rows[r].c[i] * points[j][i];
      A.at(r + 1, j) = s;
    }
    b[r + 1] = rows[r].rhs;
  }
  return solve_linear(std::move(A), std::move(b), cutoff).has_value();
}

std::string tuple_string(const std::vector<std::size_t>& balls) {
  std::string s = "balls {";
  for (std::size_t t = 0; t < balls.size(); ++t) s += (t ? "," : "") + std::to_string(balls[t] + 1);
  return s + "}";
}

// ----- predicate 3 machinery ---------------------------------------------

// One row choice: the special index within I plus the halving set T1 over
// all coordinates except it.  Encoded positionally for enumeration.
struct RowChoice {
  std::size_t special;            // index into I
  std::uint64_t t1_mask;          // bit b set: coordinate b (skipping special) in T1
};

std::vector<double> row_log_values(const ProblemSpec& problem, const std::vector<std::size_t>& I,
                                   std::size_t special_coord, std::uint64_t t1_mask) {
  const std::size_t d = problem.dim();
  double special_log = 0.5 * std::log((double)problem.n);
  std::uint64_t bit = 1;
  std::vector<bool> in_t1(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    if (i == special_coord) continue;
    in_t1[i] = (t1_mask & bit) != 0;
    bit <<= 1;
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (i == special_coord) {
      special_log -= (1.0 / problem.q[i]) * std::log((double)problem.k[i]);
    } else if (in_t1[i]) {
      special_log -= 0.5 * std::log((double)problem.k[i]);
    } else {
      special_log -= (1.0 / problem.q[i]) * std::log((double)problem.k[i]);
    }
  }
  special_log /= 0.5 - 1.0 / problem.q[special_coord];

  std::vector<double> log_a(I.size(), 0.0);
  for (std::size_t t = 0; t < I.size(); ++t) {
    const std::size_t i = I[t];
    if (i == special_coord) {
      log_a[t] = special_log;
    } else if (in_t1[i]) {
      log_a[t] = std::log((double)problem.k[i]);
    } else {
      log_a[t] = 0.0;
    }
  }
  return log_a;
}

std::size_t matrix_rank(SmallMatrix M, double tol) {
  std::vector<double> b(M.rows, 0.0);
  return analyze_system(std::move(M), std::move(b), tol).rank;
}

}  // namespace

GenPosReport check_general_position(const ProblemSpec& problem, const GenPosOptions& options) {
  const ProblemSpec canon = validate(problem);
  const std::size_t d = canon.dim();
  const std::size_t ball_count = canon.balls.size();
  const double tol = options.tol;
  GenPosReport report;

  // predicate 1: affine independence of every projected tuple
  for (std::size_t m = 2; m <= std::min(d + 1, ball_count); ++m) {
    for_each_subset(d, m - 1, [&](const std::vector<std::size_t>& I) {
      for_each_subset(ball_count, m, [&](const std::vector<std::size_t>& balls) {
        std::vector<ReciprocalVector> projected;
        projected.reserve(m);
        for (std::size_t b : balls) {
          std::vector<double> coords;
          coords.reserve(I.size());
          for (std::size_t i : I) coords.push_back(canon.balls[b].x[i]);
          projected.emplace_back(std::move(coords));
        }
        if (!affinely_independent(projected, tol)) {
          GenPosViolation v;
          v.detail = "affinely dependent projection of " + tuple_string(balls);
          v.balls = balls;
          v.coords = I;
          report.predicate1_violations.push_back(std::move(v));
        }
      });
    });
  }

  // predicate 2: complementarity with every mixed plane; small tuples must
  // miss the plane entirely
  enumerate_systems(canon.q, tol, [&](const ConstraintSystem& sys) {
    const std::size_t m = sys.constraint_count() + 1;
    const std::vector<AffineRow> rows = system_rows(sys, canon.q);
    const std::vector<std::size_t> support = sys.support();
    if (m <= ball_count) {
      for_each_subset(ball_count, m, [&](const std::vector<std::size_t>& balls) {
        std::vector<ReciprocalVector> points;
        points.reserve(m);
        for (std::size_t b : balls) points.push_back(canon.balls[b].x);
        if (!complementary(rows, points, tol)) {
          GenPosViolation v;
          v.detail = "plane {" + sys.describe() + "} not complementary to " + tuple_string(balls);
          v.balls = balls;
          v.coords = support;
          report.predicate2_violations.push_back(std::move(v));
        }
      });
    }
    for (std::size_t k = 1; k < m && k <= ball_count; ++k) {
      for_each_subset(ball_count, k, [&](const std::vector<std::size_t>& balls) {
        std::vector<ReciprocalVector> points;
        points.reserve(k);
        for (std::size_t b : balls) points.push_back(canon.balls[b].x);
        if (plane_meets_simplex(rows, points, tol)) {
          GenPosViolation v;
          v.detail = "plane {" + sys.describe() + "} meets the hull of " + tuple_string(balls);
          v.balls = balls;
          v.coords = support;
          report.predicate2_violations.push_back(std::move(v));
        }
      });
    }
  });

  // predicate 3: nondegeneracy of the log-coupling matrices
  report.predicate3_checked = true;
  report.predicate3_exhaustive = options.scope == GenPosScope::Full;
  std::mt19937_64 rng(options.seed);
  for (std::size_t m = 2; m <= std::min(d, ball_count); ++m) {
    for_each_subset(d, m, [&](const std::vector<std::size_t>& I) {
      std::vector<std::size_t> specials;
      for (std::size_t i : I) {
        if (!q_is_two(canon.q[i], tol)) specials.push_back(i);
      }
      if (specials.empty()) return;
      const std::uint64_t masks = (std::uint64_t)1 << (d - 1);
      const double per_row = (double)specials.size() * (double)masks;
      const double total = std::pow(per_row, (double)m);

      std::vector<std::vector<double>> row_logs(m);
      auto test_choice = [&](const std::vector<RowChoice>& choice) {
        ++report.predicate3_matrices;
        for (std::size_t j = 0; j < m; ++j) {
          row_logs[j] = row_log_values(canon, I, choice[j].special, choice[j].t1_mask);
        }
        SmallMatrix B(m - 1, m);
        for (std::size_t j = 1; j < m; ++j) {
          for (std::size_t t = 0; t < m; ++t) B.at(j - 1, t) = row_logs[j][t] - row_logs[0][t];
        }
        if (matrix_rank(B, tol) != m - 1) return;  // outside the family

        for_each_subset(ball_count, m, [&](const std::vector<std::size_t>& balls) {
          SmallMatrix C(m - 1, m - 1);
          for (std::size_t kk = 1; kk < m; ++kk) {
            for (std::size_t j = 1; j < m; ++j) {
              double s = 0.0;
              for (std::size_t t = 0; t < m; ++t) {
                const std::size_t i = I[t];
                s += (canon.balls[balls[kk]].x[i] - canon.balls[balls[0]].x[i]) *
                     (row_logs[j][t] - row_logs[0][t]);
              }
              C.at(kk - 1, j - 1) = s;
            }
          }
          if (matrix_rank(C, tol) != m - 1) {
            GenPosViolation v;
            v.detail = "degenerate coupling matrix on I for " + tuple_string(balls);
            v.balls = balls;
            v.coords = I;
            report.predicate3_violations.push_back(std::move(v));
          }
        });
      };

      if (options.scope == GenPosScope::Full) {
        if (total > (double)options.full_budget) {
          throw Error(ErrorCode::CapacityError,
                      "predicate 3 family holds about " + format_double(total) +
                          " matrices; rerun with scope=sampled");
        }
        std::vector<RowChoice> choice(m);
        std::function<void(std::size_t)> rec = [&](std::size_t j) {
          if (j == m) {
            test_choice(choice);
            return;
          }
          for (std::size_t sp : specials) {
            for (std::uint64_t mask = 0; mask < masks; ++mask) {
              choice[j] = RowChoice{sp, mask};
              rec(j + 1);
            }
          }
        };
        rec(0);
      } else {
        std::uniform_int_distribution<std::size_t> sp_dist(0, specials.size() - 1);
        std::uniform_int_distribution<std::uint64_t> mask_dist(0, masks - 1);
        for (int s = 0; s < options.sample_count; ++s) {
          std::vector<RowChoice> choice(m);
          for (std::size_t j = 0; j < m; ++j) {
            choice[j] = RowChoice{specials[sp_dist(rng)], mask_dist(rng)};
          }
          test_choice(choice);
        }
      }
    });
  }

  return report;
}

ProblemSpec perturb(const ProblemSpec& problem, const PerturbOptions& options) {
  if (!(options.epsilon > 0.0)) {
    throw Error(ErrorCode::RangeError, "epsilon must be positive");
  }
  const ProblemSpec original = validate(problem);
  ProblemSpec current = original;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> nudge(-options.epsilon, options.epsilon);

  for (int round = 0; round < options.max_rounds; ++round) {
    const GenPosReport report = check_general_position(current, options.check);
    if (report.is_general_position()) return current;

    const GenPosViolation* violation = nullptr;
    if (!report.predicate1_violations.empty()) {
      violation = &report.predicate1_violations.front();
    } else if (!report.predicate2_violations.empty()) {
      violation = &report.predicate2_violations.front();
    } else {
      violation = &report.predicate3_violations.front();
    }

    const std::size_t ball = *std::max_element(violation->balls.begin(), violation->balls.end());
    std::vector<std::size_t> coords = violation->coords;
    if (coords.empty()) {
      coords.resize(current.dim());
      for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    }
    std::vector<double> x = current.balls[ball].x.coords();
    for (std::size_t i : coords) {
      const double lo = std::max(0.0, original.balls[ball].x[i] - options.epsilon);
      const double hi = std::min(1.0, original.balls[ball].x[i] + options.epsilon);
      x[i] = std::clamp(x[i] + nudge(rng), lo, hi);
    }
    current.balls[ball].x = ReciprocalVector(std::move(x));
  }

  const GenPosReport last = check_general_position(current, options.check);
  if (last.is_general_position()) return current;
  std::string detail = "perturbation budget exhausted";
  if (!last.predicate1_violations.empty()) {
    detail += "; last violation: " + last.predicate1_violations.front().detail;
  } else if (!last.predicate2_violations.empty()) {
    detail += "; last violation: " + last.predicate2_violations.front().detail;
  } else if (!last.predicate3_violations.empty()) {
    detail += "; last violation: " + last.predicate3_violations.front().detail;
  }
  throw Error(ErrorCode::RetryExhausted, detail);
}

std::vector<StabilityRow> stability_probe(const ProblemSpec& problem,
                                          const std::vector<double>& epsilons,
                                          std::uint64_t seed) {
  const ProblemSpec canon = validate(problem);
  const EstimateResult base = estimate(canon);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<double>> direction(canon.balls.size(),
                                             std::vector<double>(canon.dim(), 0.0));
  for (auto& per_ball : direction) {
    for (double& v : per_ball) v = unit(rng);
  }

  std::vector<StabilityRow> rows;
  for (double eps : epsilons) {
    if (eps < 0.0) {
      throw Error(ErrorCode::RangeError, "epsilon must be nonnegative");
    }
    ProblemSpec moved = canon;
    for (std::size_t b = 0; b < moved.balls.size(); ++b) {
      std::vector<double> x = moved.balls[b].x.coords();
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i] + eps * direction[b][i], 0.0, 1.0);
      }
      moved.balls[b].x = ReciprocalVector(std::move(x));
    }
    const EstimateResult shifted = estimate(moved);
    rows.push_back(StabilityRow{
        eps, std::fabs(shifted.log_value.log_value - base.log_value.log_value)});
  }
  return rows;
}

std::string genpos_report_to_json(const GenPosReport& report) {
  nlohmann::json j;
  auto dump = [](const std::vector<GenPosViolation>& violations) {
    nlohmann::json out = nlohmann::json::array();
    for (const GenPosViolation& v : violations) {
      nlohmann::json vj;
      vj["detail"] = v.detail;
      nlohmann::json balls = nlohmann::json::array();
      for (std::size_t b : v.balls) balls.push_back(b + 1);
      vj["balls"] = std::move(balls);
      nlohmann::json coords = nlohmann::json::array();
      for (std::size_t c : v.coords) coords.push_back(c + 1);
      vj["coords"] = std::move(coords);
      out.push_back(std::move(vj));
    }
    return out;
  };
  j["predicate1_violations"] = dump(report.predicate1_violations);
  j["predicate2_violations"] = dump(report.predicate2_violations);
  j["predicate3_violations"] = dump(report.predicate3_violations);
  j["predicate3_checked"] = report.predicate3_checked;
  j["predicate3_exhaustive"] = report.predicate3_exhaustive;
  j["predicate3_matrices"] = report.predicate3_matrices;
  j["is_general_position"] = report.is_general_position();
  return j.dump(2);
}

}  // namespace nwidth
