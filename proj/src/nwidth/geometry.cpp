#include "nwidth/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nwidth/numerics.hpp"

namespace nwidth {

namespace {

// tol-aware test for "the 1/q pin coincides with the 1/2 pin"
bool q_is_two(double q, double tol) { return std::fabs(1.0 / q - 0.5) <= tol; }

void for_each_subset(std::size_t d, std::size_t size,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> subset(size);
  if (size > d) return;
  // lexicographically ordered combinations
  for (std::size_t i = 0; i < size; ++i) subset[i] = i;
  while (true) {
    fn(subset);
    std::size_t i = size;
    while (i > 0 && subset[i - 1] == d - size + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
  }
}

// canonical key of the pinned-coordinate planes, q=2 pins folded onto 1/2
std::string face_key(const std::vector<std::size_t>& I, ZKind kind, const std::vector<double>& q,
                     double tol) {
  std::string key;
  for (std::size_t i : I) {
    const bool half = kind == ZKind::HalfFace || q_is_two(q[i], tol);
    key += std::to_string(i) + (half ? "h" : "q") + ";";
  }
  return key;
}

}  // namespace

const char* z_kind_name(ZKind kind) {
  switch (kind) {
    case ZKind::QFace: return "q_face";
    case ZKind::HalfFace: return "half_face";
    case ZKind::OmegaEqualizer: return "omega_equalizer";
  }
  return "unknown";
}

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::Singular: return "singular";
    case RejectReason::NonPositiveWeight: return "non_positive_weight";
    case RejectReason::OmegaOutOfRange: return "omega_out_of_range";
  }
  return "unknown";
}

std::vector<CandidateZ> enumerate_Z(std::size_t m, const std::vector<double>& q, double tol) {
  const std::size_t d = q.size();
  if (m < 1 || m > d + 1) {
    throw Error(ErrorCode::RangeError, "m must lie in [1, d+1]");
  }
  std::vector<CandidateZ> out;
  std::vector<std::string> seen;

  auto push_face = [&](ZKind kind, const std::vector<std::size_t>& I) {
    const std::string key = face_key(I, kind, q, tol);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    seen.push_back(key);
    out.push_back(CandidateZ{kind, I, m});
  };

  for_each_subset(d, m - 1, [&](const std::vector<std::size_t>& I) { push_face(ZKind::QFace, I); });
  for_each_subset(d, m - 1,
                  [&](const std::vector<std::size_t>& I) { push_face(ZKind::HalfFace, I); });
  if (m >= 2 && m <= d) {
    for_each_subset(d, m, [&](const std::vector<std::size_t>& I) {
      std::size_t above_two = 0;
      for (std::size_t i : I) {
        if (!q_is_two(q[i], tol)) ++above_two;
      }
      if (above_two >= 2) {
        out.push_back(CandidateZ{ZKind::OmegaEqualizer, I, m});
      }
    });
  }
  return out;
}

std::vector<AffineRow> plane_rows(const CandidateZ& Z, const std::vector<double>& q, double tol) {
  const std::size_t d = q.size();
  std::vector<AffineRow> rows;
  switch (Z.kind) {
    case ZKind::QFace:
      for (std::size_t i : Z.I) {
        AffineRow row;
        row.c.assign(d, 0.0);
        row.c[i] = 1.0;
        row.rhs = 1.0 / q[i];
        rows.push_back(std::move(row));
      }
      break;
    case ZKind::HalfFace:
      for (std::size_t i : Z.I) {
        AffineRow row;
        row.c.assign(d, 0.0);
        row.c[i] = 1.0;
        row.rhs = 0.5;
        rows.push_back(std::move(row));
      }
      break;
    case ZKind::OmegaEqualizer: {
      std::vector<std::size_t> chain;
      for (std::size_t i : Z.I) {
        if (q_is_two(q[i], tol)) {
          AffineRow row;
          row.c.assign(d, 0.0);
          row.c[i] = 1.0;
          row.rhs = 0.5;
          rows.push_back(std::move(row));
        } else {
          chain.push_back(i);
        }
      }
      for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
        const std::size_t a = chain[t];
        const std::size_t b = chain[t + 1];
        const double ca = 1.0 / (0.5 - 1.0 / q[a]);
        const double cb = 1.0 / (0.5 - 1.0 / q[b]);
        AffineRow row;
        row.c.assign(d, 0.0);
        row.c[a] = ca;
        row.c[b] = -cb;
        row.rhs = ca / q[a] - cb / q[b];
        rows.push_back(std::move(row));
      }
      break;
    }
  }
  return rows;
}

SolveOutcome solve_weights(const std::vector<ReciprocalVector>& points, const CandidateZ& Z,
                           const std::vector<double>& q, double tol) {
  const std::size_t m = points.size();
  const std::size_t d = q.size();
  if (m != Z.m) {
    throw Error(ErrorCode::DimensionMismatch, "point count must equal the candidate's m");
  }
  for (const ReciprocalVector& p : points) {
    if (p.dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "point dimension differs from q");
    }
  }
  const std::vector<AffineRow> rows = plane_rows(Z, q, tol);
  if (rows.size() + 1 != m) {
    throw Error(ErrorCode::InternalError, "plane row count does not match m - 1");
  }

  SmallMatrix A(m, m);
  std::vector<double> b(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) A.at(0, j) = 1.0;
  b[0] = 1.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += rows[r].c[i] * points[j][i];
      A.at(r + 1, j) = s;
    }
    b[r + 1] = rows[r].rhs;
  }

  auto solved = solve_linear(std::move(A), std::move(b), 1e-9);
  if (!solved) {
    return Rejection{RejectReason::Singular, "lambda system is singular"};
  }
  WeightSolution sol;
  sol.lambda = std::move(*solved);
  for (std::size_t j = 0; j < m; ++j) {
    if (!(sol.lambda[j] > tol)) {
      return Rejection{RejectReason::NonPositiveWeight,
                       "lambda_" + std::to_string(j + 1) + " = " + format_double(sol.lambda[j])};
    }
  }

  std::vector<double> hat(d, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < d; ++i) hat[i] += sol.lambda[j] * points[j][i];
  }
  for (double& v : hat) v = std::clamp(v, 0.0, 1.0);
  sol.theta_hat = ReciprocalVector(std::move(hat));

  if (Z.kind == ZKind::OmegaEqualizer) {
    for (std::size_t i : Z.I) {
      if (!q_is_two(q[i], tol)) {
        const double y = 1.0 / q[i];
        const double w = (sol.theta_hat[i] - y) / (0.5 - y);
        if (!(w > tol && w < 1.0 - tol)) {
          return Rejection{RejectReason::OmegaOutOfRange,
                           "common omega' = " + format_double(w)};
        }
        sol.omega_common = w;
        break;
      }
    }
  }
  return sol;
}

bool affinely_independent(const std::vector<ReciprocalVector>& points, double tol) {
  if (points.empty()) {
    throw Error(ErrorCode::RangeError, "need at least one point");
  }
  const std::size_t m = points.size();
  if (m == 1) return true;
  const std::size_t d = points[0].dim();
  SmallMatrix D(d, m - 1);
  for (std::size_t j = 1; j < m; ++j) {
    if (points[j].dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
    }
    for (std::size_t i = 0; i < d; ++i) D.at(i, j - 1) = points[j][i] - points[0][i];
  }
  if (m - 1 > d) return false;
  const SingularValueRange sv = singular_value_range(D);
  return sv.smallest > tol * std::max(sv.largest, 1.0);
}

}  // namespace nwidth
