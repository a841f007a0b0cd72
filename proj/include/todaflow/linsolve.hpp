#ifndef TODAFLOW_LINSOLVE_HPP
#define TODAFLOW_LINSOLVE_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

// Sparse symmetric positive-(semi)definite solves for the assembled
// Laplacian-plus-Jacobian systems: Jacobi-preconditioned CG and a Thomas
// solve for 1D tridiagonal systems.

namespace todaflow {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed-row symmetric matrix. Assembly merges duplicates, sorts the
// columns of every row, and asserts value symmetry to 1e-14.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  static SparseMatrix from_triplets(int n, std::vector<Triplet> entries);

  int size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  double diagonal(int i) const;
  // Row access (sorted columns), for tests and diagnostics.
  std::span<const int> row_cols(int i) const;
  std::span<const double> row_values(int i) const;

 private:
  int n_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> cols_;
  std::vector<double> values_;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // |r_k| / |b|, one entry per iteration
};

struct CgOptions {
  double tol = 1e-12;
  int max_iterations = 0;      // 0 -> 10 * n
  // Number of interleaved components per unknown block; when > 0 the
  // right-hand side and iterates are projected onto the orthogonal
  // complement of per-component constants (singular torus systems).
  int kernel_components = 0;
  double tikhonov_shift = 0.0; // diagonal shift for nearly singular systems
};

// Jacobi-preconditioned conjugate gradients. Non-convergence is reported,
// not thrown; the caller decides.
std::pair<std::vector<double>, SolveReport> cg_solve(const SparseMatrix& a,
                                                     std::span<const double> b,
                                                     const CgOptions& options = {});

// Thomas algorithm; sub/super have size n-1. Throws on zero pivot.
std::vector<double> tridiag_solve(std::span<const double> sub, std::span<const double> diag,
                                  std::span<const double> super, std::span<const double> b);

}  // namespace todaflow

#endif
