#ifndef NWIDTH_NUMERICS_HPP
#define NWIDTH_NUMERICS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nwidth {

// Dense row-major matrix small enough that Gaussian elimination is the right
// tool (all systems here are at most (d+1) x (d+1)).
struct SmallMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  SmallMatrix() = default;
  SmallMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Solves A x = b for square A by Gaussian elimination with partial pivoting.
// Rows are scaled by their max magnitude first; a pivot below
// singular_cutoff (relative) reports failure instead of a garbage solution.
std::optional<std::vector<double>> solve_linear(SmallMatrix A, std::vector<double> b,
                                                double singular_cutoff);

// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(SmallMatrix S);

// Smallest and largest singular values of an arbitrary matrix, from the Gram
// matrix of the thinner side.
struct SingularValueRange {
  double smallest = 0.0;
  double largest = 0.0;
};
SingularValueRange singular_value_range(const SmallMatrix& M);

// Rank/consistency analysis of a possibly non-square linear system, used for
// plane-simplex intersection tests.  Tolerance is relative to row scales.
struct LinearSystemAnalysis {
  bool consistent = false;
  std::size_t rank = 0;
  bool unique = false;                  // rank == number of unknowns
  std::vector<double> particular;      // valid when unique && consistent
};
LinearSystemAnalysis analyze_system(SmallMatrix A, std::vector<double> b, double tol);

// Locale-independent shortest decimal form (round-trips the double).
std::string format_double(double v);
// Locale-independent general form with the given significant digits.
std::string format_double(double v, int significant_digits);

}  // namespace nwidth

#endif
