#ifndef NWIDTH_GEOMETRY_HPP
#define NWIDTH_GEOMETRY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nwidth/problem.hpp"

namespace nwidth {

enum class ZKind { QFace, HalfFace, OmegaEqualizer };

const char* z_kind_name(ZKind kind);

// One admissible plane of codimension m-1 in reciprocal exponent space:
// coordinates pinned at 1/q_i (QFace), pinned at 1/2 (HalfFace), or a chain
// of equal omega' values over the q>2 members of I plus 1/2-pins on its q=2
// members (OmegaEqualizer).
struct CandidateZ {
  ZKind kind = ZKind::QFace;
  std::vector<std::size_t> I;  // sorted coordinate subset, 0-based
  std::size_t m = 1;

  bool operator==(const CandidateZ& other) const {
    return kind == other.kind && I == other.I && m == other.m;
  }
};

// All candidates for the given m in canonical order (QFace subsets, then
// HalfFace subsets, then OmegaEqualizer subsets, subsets lexicographic).
// Candidates made identical by q_i = 2 (where the 1/q pin and the 1/2 pin
// coincide) are deduplicated, first kind kept.  m = 1 yields the single
// full-space candidate with I empty.
std::vector<CandidateZ> enumerate_Z(std::size_t m, const std::vector<double>& q,
                                    double tol = kDefaultTol);

enum class RejectReason { Singular, NonPositiveWeight, OmegaOutOfRange };

const char* reject_reason_name(RejectReason reason);

struct Rejection {
  RejectReason reason;
  std::string detail;
};

// The simplex weights placing the convex combination of the given points on
// the plane, together with the landing point.
struct WeightSolution {
  std::vector<double> lambda;          // all > 0, summing to 1
  ReciprocalVector theta_hat;          // sum lambda_j x_j
  std::optional<double> omega_common;  // shared omega' value (OmegaEqualizer only)

  std::vector<double> theta() const { return theta_hat.p_values(); }
};

using SolveOutcome = std::variant<WeightSolution, Rejection>;

// Assembles the m x m system { sum lambda = 1 } + the plane's m-1 affine
// rows applied to sum lambda_j x_j, and solves it.  A singular system is the
// failure of complementarity (or affine dependence of the points) and
// rejects the candidate; so do weights <= tol and, for OmegaEqualizer, a
// common omega' outside (tol, 1-tol).
SolveOutcome solve_weights(const std::vector<ReciprocalVector>& points, const CandidateZ& Z,
                           const std::vector<double>& q, double tol = kDefaultTol);

// Full affine rank of the point set, judged against the singular value
// spread: smallest > tol * max(largest, 1).
bool affinely_independent(const std::vector<ReciprocalVector>& points,
                          double tol = kDefaultTol);

// Rows of the plane's defining equations, as <c, x> = rhs pairs.  Shared by
// solve_weights and the general-position checks.
struct AffineRow {
  std::vector<double> c;
  double rhs = 0.0;
};
std::vector<AffineRow> plane_rows(const CandidateZ& Z, const std::vector<double>& q, double tol);

}  // namespace nwidth

#endif
