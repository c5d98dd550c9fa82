#include <cmath>

#include "doctest.h"
#include "nwidth/estimator.hpp"
#include "nwidth/genpos.hpp"
#include "nwidth/phi.hpp"
#include "nwidth/witness.hpp"
#include "support.hpp"

using namespace nwidth;

namespace {

ProblemSpec single_ball(double nu, double x, double q, long long k, long long n) {
  ProblemSpec problem;
  problem.k = {k};
  problem.q = {q};
  problem.n = n;
  problem.balls = {BallSpec{nu, ReciprocalVector({x})}};
  return problem;
}

}  // namespace

TEST_CASE("build_witness_m1 selects the regime of n") {
  SUBCASE("fractional middle coordinate") {
    // omega in (0,1): breakpoints 16^(1/2) = 4 < n = 8 <= 16, so
    // s = (8^(1/2) * 16^(-1/4))^4 = 4
    const WitnessSet w = build_witness_m1(single_ball(1.0, 1.0 / 3.0, 4.0, 16, 8), 0);
    CHECK(w.s[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(w.u[0] == 4);
  }
  SUBCASE("saturated block") {
    const WitnessSet w = build_witness_m1(single_ball(1.0, 0.0, 2.0, 16, 8), 0);
    CHECK(w.s[0] == 16.0);
    CHECK(w.u[0] == 16);
  }
  SUBCASE("below every breakpoint") {
    const WitnessSet w = build_witness_m1(single_ball(1.0, 1.0, 4.0, 16, 2), 0);
    CHECK(w.s[0] == 1.0);
    CHECK(w.u[0] == 1);
  }
  SUBCASE("above every breakpoint") {
    // p = 1 keeps omega = 1, so the middle range is empty and n = 8 > 4
    // lands in the saturated-tail case with an empty saturated block
    const WitnessSet w = build_witness_m1(single_ball(1.0, 1.0, 4.0, 16, 8), 0);
    CHECK(w.s[0] == 1.0);
    CHECK(w.u[0] == 1);
    // the witness value then reproduces nu * Phi exactly
    CHECK(w.witness_log_value() ==
          doctest::Approx(phi_log(ReciprocalVector({1.0}), {4.0}, {16}, 8).log_value)
              .epsilon(1e-12));
  }
}

TEST_CASE("octahedron_width_bound_log matches its hand evaluations") {
  SUBCASE("s = k is continuous at n = prod k") {
    const std::vector<double> q{4.0, 3.0};
    const std::vector<long long> k{16, 9};
    const std::vector<double> s{16.0, 9.0};
    const double bp = std::exp(octahedron_bound_breakpoint_log(q, k, s));
    CHECK(bp == doctest::Approx(144.0).epsilon(1e-12));
    CHECK(std::fabs(octahedron_bound_small_n_log(q, k, s) -
                    octahedron_bound_large_n_log(q, k, s, bp)) <= 1e-9);
  }
  SUBCASE("d=1 q=4 k=16 s=4: breakpoint at n=8 gives sqrt(2)") {
    const std::vector<double> q{4.0};
    const std::vector<long long> k{16};
    const std::vector<double> s{4.0};
    CHECK(std::exp(octahedron_bound_breakpoint_log(q, k, s)) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(octahedron_width_bound_log(q, k, s, 8.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(octahedron_bound_small_n_log(q, k, s) ==
          doctest::Approx(octahedron_bound_large_n_log(q, k, s, 8.0)).epsilon(1e-12));
  }
  SUBCASE("all-ones witness is trivial") {
    CHECK(octahedron_width_bound_log({4.0, 5.0}, {7, 3}, {1.0, 1.0}, 1.0) == 0.0);
  }
  SUBCASE("range errors") {
    CHECK_THROWS_AS(octahedron_width_bound_log({4.0}, {16}, {0.5}, 4.0), Error);
    CHECK_THROWS_AS(octahedron_width_bound_log({4.0}, {16}, {17.0}, 4.0), Error);
  }
}

TEST_CASE("octahedron bound breakpoint continuity on random parameters") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + (std::size_t)(unit(rng) * 4.0);
    std::vector<double> q(d), s(d);
    std::vector<long long> k(d);
    for (std::size_t j = 0; j < d; ++j) {
      q[j] = 2.0 + 14.0 * unit(rng);
      k[j] = 1 + (long long)(unit(rng) * 4095.0);
      s[j] = 1.0 + ((double)k[j] - 1.0) * unit(rng);
    }
    const double bp = std::exp(octahedron_bound_breakpoint_log(q, k, s));
    const double diff = std::fabs(octahedron_bound_small_n_log(q, k, s) -
                                  octahedron_bound_large_n_log(q, k, s, bp));
    worst = std::max(worst, diff);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("inclusion_check certifies containment") {
  SUBCASE("a single ball passes vacuously") {
    const ProblemSpec problem = single_ball(2.0, 0.4, 4.0, 64, 10);
    const WitnessSet w = build_witness_m1(problem, 0);
    const InclusionReport report = inclusion_check(problem, w);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].margin() == doctest::Approx(0.0));  // beta = alpha is an equality
    CHECK(report.all_pass);
  }
  SUBCASE("the huge-radius companion never obstructs") {
    ProblemSpec problem;
    problem.k = {16};
    problem.q = {4.0};
    problem.n = 4;
    problem.balls = {BallSpec{1.0, ReciprocalVector({1.0})},
                     BallSpec{1e9, ReciprocalVector({0.0})}};
    const EstimateResult res = estimate(problem);
    REQUIRE(res.winner.m == 1);
    const WitnessSet w = build_witness_m1(problem, res.winner.ball_indices[0]);
    CHECK(inclusion_check(problem, w, 1e-9).all_pass);
  }
}

TEST_CASE("witness value tracks nu * phi within the rounding factor") {
  std::mt19937_64 rng(59);
  nwtest::InstanceConfig cfg;
  cfg.max_dim = 3;
  cfg.max_balls = 1;
  cfg.max_k = 512;
  for (int i = 0; i < 200; ++i) {
    const ProblemSpec problem = nwtest::random_problem(rng, cfg);
    const WitnessSet w = build_witness_m1(problem, 0);
    for (std::size_t j = 0; j < problem.dim(); ++j) {
      CHECK(w.s[j] >= 1.0);
      CHECK(w.s[j] <= (double)problem.k[j]);
      CHECK(w.u[j] >= 1);
      CHECK(w.u[j] <= problem.k[j]);
    }
    const double target = std::log(problem.balls[0].nu) +
                          phi_log(problem.balls[0].x, problem.q, problem.k, problem.n).log_value;
    const double gap = std::fabs(w.witness_log_value() - target);
    CHECK(gap <= (double)problem.dim() * std::log(2.0) + 1e-9);
  }
}

TEST_CASE("inclusion passes whenever an m=1 certificate wins") {
  std::mt19937_64 rng(61);
  nwtest::InstanceConfig cfg;
  cfg.max_dim = 2;
  cfg.min_balls = 2;
  cfg.max_balls = 3;
  cfg.q_lo = 2.05;
  int found = 0;
  for (int i = 0; i < 400 && found < 40; ++i) {
    const ProblemSpec problem = nwtest::random_problem(rng, cfg);
    const EstimateResult res = estimate(problem);
    if (res.winner.m != 1) continue;
    GenPosOptions gp;
    gp.scope = GenPosScope::Full;
    if (!check_general_position(problem, gp).is_general_position()) continue;
    ++found;
    const WitnessSet w = build_witness_m1(problem, res.winner.ball_indices[0]);
    const InclusionReport report = inclusion_check(problem, w, 1e-9);
    CHECK(report.all_pass);
  }
  CHECK(found > 0);
}
