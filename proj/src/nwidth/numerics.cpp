#include "nwidth/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace nwidth {

std::optional<std::vector<double>> solve_linear(SmallMatrix A, std::vector<double> b,
                                                double singular_cutoff) {
  const std::size_t n = A.rows;
  assert(A.cols == n && b.size() == n);

  for (std::size_t i = 0; i < n; ++i) {
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::fabs(A.at(i, j)));
    if (scale == 0.0) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) A.at(i, j) /= scale;
    b[i] /= scale;
  }

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::fabs(A.at(perm[col], col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::fabs(A.at(perm[r], col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < singular_cutoff) return std::nullopt;
    std::swap(perm[col], perm[pivot]);
    const std::size_t p = perm[col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::size_t ri = perm[r];
      const double f = A.at(ri, col) / A.at(p, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) A.at(ri, j) -= f * A.at(p, j);
      b[ri] -= f * b[p];
    }
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t ri = perm[i];
    double s = b[ri];
    for (std::size_t j = i + 1; j < n; ++j) s -= A.at(ri, j) * x[j];
    x[i] = s / A.at(ri, i);
  }
  return x;
}

std::vector<double> symmetric_eigenvalues(SmallMatrix S) {
  const std::size_t n = S.rows;
  assert(S.cols == n);
  if (n == 0) return {};

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += S.at(i, j) * S.at(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = S.at(p, q);
        if (apq == 0.0) continue;
        const double app = S.at(p, p);
        const double aqq = S.at(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = S.at(i, p);
          const double aiq = S.at(i, q);
          S.at(i, p) = c * aip - s * aiq;
          S.at(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = S.at(p, j);
          const double aqj = S.at(q, j);
          S.at(p, j) = c * apj - s * aqj;
          S.at(q, j) = s * apj + c * aqj;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = S.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

SingularValueRange singular_value_range(const SmallMatrix& M) {
  const std::size_t r = M.rows, c = M.cols;
  SingularValueRange out;
  if (r == 0 || c == 0) return out;
  const std::size_t n = std::min(r, c);
  SmallMatrix G(n, n);
  if (c <= r) {
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < r; ++t) s += M.at(t, i) * M.at(t, j);
        G.at(i, j) = s;
      }
  } else {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < c; ++t) s += M.at(i, t) * M.at(j, t);
        G.at(i, j) = s;
      }
  }
  std::vector<double> eig = symmetric_eigenvalues(std::move(G));
  out.smallest = std::sqrt(std::max(eig.front(), 0.0));
  out.largest = std::sqrt(std::max(eig.back(), 0.0));
  return out;
}

LinearSystemAnalysis analyze_system(SmallMatrix A, std::vector<double> b, double tol) {
  const std::size_t rows = A.rows, cols = A.cols;
  assert(b.size() == rows);
  LinearSystemAnalysis out;

  for (std::size_t i = 0; i < rows; ++i) {
    double scale = std::fabs(b[i]);
    for (std::size_t j = 0; j < cols; ++j) scale = std::max(scale, std::fabs(A.at(i, j)));
    if (scale == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) A.at(i, j) /= scale;
    b[i] /= scale;
  }

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pr = row;
    double best = std::fabs(A.at(row, col));
    for (std::size_t r = row + 1; r < rows; ++r) {
      const double v = std::fabs(A.at(r, col));
      if (v > best) {
        best = v;
        pr = r;
      }
    }
    if (best <= tol) continue;
    if (pr != row) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(A.at(pr, j), A.at(row, j));
      std::swap(b[pr], b[row]);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row) continue;
      const double f = A.at(r, col) / A.at(row, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < cols; ++j) A.at(r, j) -= f * A.at(row, j);
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }

  out.rank = pivot_col.size();
  out.consistent = true;
  for (std::size_t r = out.rank; r < rows; ++r) {
    if (std::fabs(b[r]) > tol) {
      out.consistent = false;
      break;
    }
  }
  out.unique = out.rank == cols;
  if (out.consistent && out.unique) {
    out.particular.assign(cols, 0.0);
    for (std::size_t i = 0; i < out.rank; ++i) {
      out.particular[pivot_col[i]] = b[i] / A.at(i, pivot_col[i]);
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_double(double v, int significant_digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                           significant_digits);
  return std::string(buf, res.ptr);
}

}  // namespace nwidth
