#ifndef NWIDTH_GENPOS_HPP
#define NWIDTH_GENPOS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nwidth/problem.hpp"

namespace nwidth {

enum class GenPosScope { Sampled, Full };

struct GenPosOptions {
  double tol = kDefaultTol;
  GenPosScope scope = GenPosScope::Sampled;
  std::uint64_t seed = 1;
  int sample_count = 128;          // matrices sampled per (m, I) at Sampled scope
  long long full_budget = 1 << 22; // matrix enumeration cap at Full scope
};

struct GenPosViolation {
  std::string detail;                  // human-readable description
  std::vector<std::size_t> balls;      // implicated ball tuple, 0-based
  std::vector<std::size_t> coords;     // implicated coordinate set, 0-based
};

struct GenPosReport {
  std::vector<GenPosViolation> predicate1_violations;  // affinely dependent projections
  std::vector<GenPosViolation> predicate2_violations;  // complementarity / simplex intersections
  std::vector<GenPosViolation> predicate3_violations;  // degenerate coupling matrices
  bool predicate3_checked = false;
  bool predicate3_exhaustive = false;   // true when the full matrix family was enumerated
  long long predicate3_matrices = 0;

  bool is_general_position() const {
    return predicate1_violations.empty() && predicate2_violations.empty() &&
           predicate3_violations.empty();
  }
};

// Tests the nondegeneracy predicates: (1) affine independence of every
// projected ball tuple, (2) complementarity with every admissible mixed
// plane plus emptiness of the small-tuple intersections, (3) nondegeneracy
// of the log-coupling matrices.  Predicate 3's family is exponential, so its
// coverage is gated by scope.  The unique-minimizer predicate is not checked
// here; the estimator reports it through runners_up.
GenPosReport check_general_position(const ProblemSpec& problem, const GenPosOptions& options = {});

// Moves ball exponents by at most epsilon per coordinate (clamped to [0,1])
// until the report at the same scope is clean: one random nudge of one
// implicated point per round, recheck, retry budget.  Deterministic for a
// fixed seed.  Throws RetryExhausted when the budget runs out.
struct PerturbOptions {
  double epsilon = 1e-3;
  std::uint64_t seed = 1;
  GenPosOptions check;
  int max_rounds = 200;
};
ProblemSpec perturb(const ProblemSpec& problem, const PerturbOptions& options);

// Displaces every ball by a fixed seeded unit direction scaled to each
// epsilon, re-estimates, and reports |delta log Psi|.  Deviations shrink
// with epsilon when the estimate is continuous in the exponents.
struct StabilityRow {
  double epsilon = 0.0;
  double abs_delta_log = 0.0;
};
std::vector<StabilityRow> stability_probe(const ProblemSpec& problem,
                                          const std::vector<double>& epsilons,
                                          std::uint64_t seed);

std::string genpos_report_to_json(const GenPosReport& report);

}  // namespace nwidth

#endif
