#include "todaflow/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace todaflow {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  if (n <= 0) throw std::invalid_argument("SparseMatrix: dimension must be positive");
  for (const Triplet& t : entries)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("SparseMatrix: triplet index out of range");

  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.cols_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::size_t i = 0;
  for (int row = 0; row < n; ++row) {
    m.row_offsets_[static_cast<std::size_t>(row)] = static_cast<int>(m.cols_.size());
    while (i < entries.size() && entries[i].row == row) {
      int col = entries[i].col;
      double v = 0.0;
      while (i < entries.size() && entries[i].row == row && entries[i].col == col) {
        v += entries[i].value;
        ++i;
      }
      m.cols_.push_back(col);
      m.values_.push_back(v);
    }
  }
  m.row_offsets_[static_cast<std::size_t>(n)] = static_cast<int>(m.cols_.size());

  // Symmetry assertion: every (i,j) has a matching (j,i) with equal value.
  double scale = 0.0;
  for (double v : m.values_) scale = std::max(scale, std::abs(v));
  for (int row = 0; row < n; ++row) {
    auto cols = m.row_cols(row);
    auto vals = m.row_values(row);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      int col = cols[static_cast<std::size_t>(k)];
      if (col < row) continue;  // lower triangle checked from the upper side
      auto tcols = m.row_cols(col);
      auto it = std::lower_bound(tcols.begin(), tcols.end(), row);
      double mirrored = 0.0;
      if (it != tcols.end() && *it == row)
        mirrored = m.row_values(col)[static_cast<std::size_t>(it - tcols.begin())];
      if (std::abs(mirrored - vals[k]) > 1e-14 * std::max(1.0, scale))
        throw std::invalid_argument("SparseMatrix: assembly is not symmetric");
    }
  }
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
    throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  for (int row = 0; row < n_; ++row) {
    double s = 0.0;
    int begin = row_offsets_[static_cast<std::size_t>(row)];
    int end = row_offsets_[static_cast<std::size_t>(row) + 1];
    for (int k = begin; k < end; ++k)
      s += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(cols_[static_cast<std::size_t>(k)])];
    y[static_cast<std::size_t>(row)] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
  multiply(x, y);
  return y;
}

double SparseMatrix::diagonal(int i) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), i);
  if (it == cols.end() || *it != i) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

std::span<const int> SparseMatrix::row_cols(int i) const {
  int begin = row_offsets_[static_cast<std::size_t>(i)];
  int end = row_offsets_[static_cast<std::size_t>(i) + 1];
  return {cols_.data() + begin, static_cast<std::size_t>(end - begin)};
}

std::span<const double> SparseMatrix::row_values(int i) const {
  int begin = row_offsets_[static_cast<std::size_t>(i)];
  int end = row_offsets_[static_cast<std::size_t>(i) + 1];
  return {values_.data() + begin, static_cast<std::size_t>(end - begin)};
}

namespace {

// Remove per-component constants: x_i[k] -= mean over blocks of x[k].
void project_out_component_constants(std::span<double> x, int components) {
  if (components <= 0) return;
  int n = static_cast<int>(x.size());
  int blocks = n / components;
  for (int k = 0; k < components; ++k) {
    double mean = 0.0;
    for (int b = 0; b < blocks; ++b) mean += x[static_cast<std::size_t>(b * components + k)];
    mean /= blocks;
    for (int b = 0; b < blocks; ++b) x[static_cast<std::size_t>(b * components + k)] -= mean;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace

std::pair<std::vector<double>, SolveReport> cg_solve(const SparseMatrix& a,
                                                     std::span<const double> b,
                                                     const CgOptions& options) {
  const int n = a.size();
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cg_solve: right-hand side size mismatch");
  if (options.kernel_components > 0 && n % options.kernel_components != 0)
    throw std::invalid_argument("cg_solve: kernel component count does not divide dimension");

  const int maxit = options.max_iterations > 0 ? options.max_iterations : 10 * n;

  std::vector<double> rhs(b.begin(), b.end());
  project_out_component_constants(rhs, options.kernel_components);

  std::vector<double> inv_diag(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < n; ++i) {
    double d = a.diagonal(i) + options.tikhonov_shift;
    inv_diag[static_cast<std::size_t>(i)] = d > 0.0 ? 1.0 / d : 1.0;
  }

  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  std::vector<double> r(rhs);
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  std::vector<double> ap(static_cast<std::size_t>(n), 0.0);

  SolveReport report;
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    report.converged = true;
    return {std::move(x), report};
  }

  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = inv_diag[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
  project_out_component_constants(z, options.kernel_components);
  p = z;
  double rz = dot(r, z);

  double rel = norm2(r) / bnorm;
  for (int it = 0; it < maxit; ++it) {
    if (rel <= options.tol) {
      report.converged = true;
      break;
    }
    a.multiply(p, ap);
    if (options.tikhonov_shift != 0.0)
      for (int i = 0; i < n; ++i) ap[static_cast<std::size_t>(i)] += options.tikhonov_shift * p[static_cast<std::size_t>(i)];
    project_out_component_constants(ap, options.kernel_components);
    double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      // Not positive definite along p (or roundoff); stop with what we have.
      break;
    }
    double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] -= alpha * ap[static_cast<std::size_t>(i)];
    }
    project_out_component_constants(r, options.kernel_components);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = inv_diag[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
    project_out_component_constants(z, options.kernel_components);
    double rz_next = dot(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    rel = norm2(r) / bnorm;
    report.residual_history.push_back(rel);
    ++report.iterations;
  }
  if (rel <= options.tol) report.converged = true;
  report.relative_residual = rel;
  project_out_component_constants(x, options.kernel_components);
  return {std::move(x), report};
}

std::vector<double> tridiag_solve(std::span<const double> sub, std::span<const double> diag,
                                  std::span<const double> super, std::span<const double> b) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("tridiag_solve: empty system");
  if (sub.size() != n - 1 || super.size() != n - 1 || b.size() != n)
    throw std::invalid_argument("tridiag_solve: band size mismatch");

  std::vector<double> c(n - 1, 0.0), d(n, 0.0), x(n, 0.0);
  double pivot = diag[0];
  if (pivot == 0.0) throw std::runtime_error("tridiag_solve: zero pivot");
  if (n > 1) c[0] = super[0] / pivot;
  d[0] = b[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i - 1] * c[i - 1];
    if (pivot == 0.0) throw std::runtime_error("tridiag_solve: zero pivot");
    if (i < n - 1) c[i] = super[i] / pivot;
    d[i] = (b[i] - sub[i - 1] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace todaflow
