#include <cmath>

#include "doctest.h"
#include "nwidth/geometry.hpp"
#include "support.hpp"

using namespace nwidth;

TEST_CASE("enumerate_Z yields the single full space for m=1") {
  const auto planes = enumerate_Z(1, {4.0, 4.0});
  REQUIRE(planes.size() == 1);
  CHECK(planes[0].I.empty());
  CHECK(planes[0].m == 1);
}

TEST_CASE("enumerate_Z counts candidates for d=2") {
  SUBCASE("q=(4,4): 2 q-faces, 2 half-faces, 1 equalizer") {
    const auto planes = enumerate_Z(2, {4.0, 4.0});
    CHECK(planes.size() == 5);
    int q_faces = 0, half_faces = 0, equalizers = 0;
    for (const auto& z : planes) {
      if (z.kind == ZKind::QFace) ++q_faces;
      if (z.kind == ZKind::HalfFace) ++half_faces;
      if (z.kind == ZKind::OmegaEqualizer) ++equalizers;
    }
    CHECK(q_faces == 2);
    CHECK(half_faces == 2);
    CHECK(equalizers == 1);
  }
  SUBCASE("q=(2,2): faces collapse, no equalizer") {
    const auto planes = enumerate_Z(2, {2.0, 2.0});
    CHECK(planes.size() == 2);
    for (const auto& z : planes) CHECK(z.kind == ZKind::QFace);
  }
}

TEST_CASE("enumerate_Z matches the combinatorial count for d<=4") {
  auto binom = [](std::size_t n, std::size_t k) -> std::size_t {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + (std::size_t)(unit(rng) * 4.0);
    std::vector<double> q(d);
    std::size_t twos = 0;
    for (double& v : q) {
      v = unit(rng) < 0.4 ? 2.0 : 2.5 + 8.0 * unit(rng);
      if (v == 2.0) ++twos;
    }
    for (std::size_t m = 1; m <= d + 1; ++m) {
      // q-faces and half-faces coincide exactly on subsets of the q=2 coords
      std::size_t expected = 2 * binom(d, m - 1) - binom(twos, m - 1);
      if (m >= 2 && m <= d) {
        // equalizer subsets need at least two q>2 members
        for (std::size_t j = 0; j + 2 <= m && j <= twos; ++j) {
          expected += binom(twos, j) * binom(d - twos, m - j) * (m - j >= 2 ? 1 : 0);
        }
      }
      CHECK(enumerate_Z(m, q).size() == expected);
    }
  }
}

TEST_CASE("solve_weights lands the combination on the q-face") {
  const std::vector<ReciprocalVector> points{ReciprocalVector({1.0, 1.0}),
                                             ReciprocalVector({0.0, 0.0})};
  const CandidateZ z{ZKind::QFace, {0}, 2};
  const SolveOutcome outcome = solve_weights(points, z, {4.0, 4.0});
  REQUIRE(std::holds_alternative<WeightSolution>(outcome));
  const WeightSolution& sol = std::get<WeightSolution>(outcome);
  CHECK(sol.lambda[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.lambda[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(sol.theta_hat[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.theta_hat[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.theta()[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("solve_weights rejects a segment inside the equalizer plane") {
  const std::vector<ReciprocalVector> points{ReciprocalVector({1.0, 1.0}),
                                             ReciprocalVector({0.0, 0.0})};
  const CandidateZ z{ZKind::OmegaEqualizer, {0, 1}, 2};
  const SolveOutcome outcome = solve_weights(points, z, {4.0, 4.0});
  REQUIRE(std::holds_alternative<Rejection>(outcome));
  CHECK(std::get<Rejection>(outcome).reason == RejectReason::Singular);
}

TEST_CASE("solve_weights in one dimension") {
  const std::vector<ReciprocalVector> points{ReciprocalVector({1.0}), ReciprocalVector({0.0})};
  const CandidateZ z{ZKind::QFace, {0}, 2};
  const SolveOutcome outcome = solve_weights(points, z, {4.0});
  REQUIRE(std::holds_alternative<WeightSolution>(outcome));
  const WeightSolution& sol = std::get<WeightSolution>(outcome);
  CHECK(sol.lambda[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.theta()[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("solve_weights rejects boundary weights and omega out of range") {
  SUBCASE("weight would be zero") {
    // the q-face passes through the first point itself
    const std::vector<ReciprocalVector> points{ReciprocalVector({0.25}), ReciprocalVector({0.0})};
    const CandidateZ z{ZKind::QFace, {0}, 2};
    const SolveOutcome outcome = solve_weights(points, z, {4.0});
    REQUIRE(std::holds_alternative<Rejection>(outcome));
    CHECK(std::get<Rejection>(outcome).reason == RejectReason::NonPositiveWeight);
  }
  SUBCASE("common omega' outside (0,1)") {
    // both points sit above 1/2 in both coordinates: the landing point has
    // omega' > 1
    const std::vector<ReciprocalVector> points{ReciprocalVector({0.9, 0.6}),
                                               ReciprocalVector({0.6, 0.9})};
    const CandidateZ z{ZKind::OmegaEqualizer, {0, 1}, 2};
    const SolveOutcome outcome = solve_weights(points, z, {4.0, 4.0});
    REQUIRE(std::holds_alternative<Rejection>(outcome));
    CHECK(std::get<Rejection>(outcome).reason == RejectReason::OmegaOutOfRange);
  }
}

TEST_CASE("affinely_independent on the standard cases") {
  CHECK(affinely_independent({ReciprocalVector({0.0, 0.0}), ReciprocalVector({1.0, 0.0}),
                              ReciprocalVector({0.0, 1.0})}));
  CHECK_FALSE(affinely_independent({ReciprocalVector({0.0, 0.0}), ReciprocalVector({1.0, 1.0}),
                                    ReciprocalVector({0.5, 0.5})}));
  CHECK(affinely_independent({ReciprocalVector({0.3})}));
}

TEST_CASE("accepted solutions satisfy the plane and permutation properties") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int accepted = 0;
  for (int trial = 0; trial < 400 && accepted < 120; ++trial) {
    const std::size_t d = 1 + (std::size_t)(unit(rng) * 3.0);
    std::vector<double> q(d);
    for (double& v : q) v = unit(rng) < 0.2 ? 2.0 : 2.2 + 10.0 * unit(rng);
    const std::size_t m = 1 + (std::size_t)(unit(rng) * std::min<std::size_t>(d + 1, 3));
    std::vector<ReciprocalVector> points;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> x(d);
      for (double& v : x) v = unit(rng);
      points.emplace_back(std::move(x));
    }
    for (const CandidateZ& z : enumerate_Z(m, q)) {
      const SolveOutcome outcome = solve_weights(points, z, q);
      if (!std::holds_alternative<WeightSolution>(outcome)) continue;
      ++accepted;
      const WeightSolution& sol = std::get<WeightSolution>(outcome);

      double sum = 0.0;
      for (double l : sol.lambda) sum += l;
      CHECK(std::fabs(sum - 1.0) <= 1e-12);

      for (const AffineRow& row : plane_rows(z, q, kDefaultTol)) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < d; ++i) lhs += row.c[i] * sol.theta_hat[i];
        CHECK(std::fabs(lhs - row.rhs) <= 1e-9);
      }

      CHECK(affinely_independent(points));

      // permuted points permute lambda identically and keep the landing point
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<ReciprocalVector> shuffled;
      for (std::size_t j : perm) shuffled.push_back(points[j]);
      const SolveOutcome redo = solve_weights(shuffled, z, q);
      REQUIRE(std::holds_alternative<WeightSolution>(redo));
      const WeightSolution& sol2 = std::get<WeightSolution>(redo);
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(std::fabs(sol2.lambda[j] - sol.lambda[perm[j]]) <= 1e-12);
      }
      for (std::size_t i = 0; i < d; ++i) {
        CHECK(std::fabs(sol2.theta_hat[i] - sol.theta_hat[i]) <= 1e-12);
      }
    }
  }
  CHECK(accepted > 0);
}
