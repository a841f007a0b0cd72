#include "todaflow/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace todaflow {

double pairing(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pairing: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

bool is_traceless(std::span<const double> x) {
  double sum = 0.0, amax = 0.0;
  for (double v : x) {
    sum += v;
    amax = std::max(amax, std::abs(v));
  }
  return std::abs(sum) <= kTraceTol * std::max(1.0, amax);
}

TracelessVector::TracelessVector(std::vector<double> components) : comps_(std::move(components)) {
  if (!is_traceless(comps_))
    throw std::invalid_argument("TracelessVector: component sum exceeds tolerance");
}

TracelessVector TracelessVector::zero(std::size_t rank) {
  return TracelessVector(unchecked{}, std::vector<double>(rank, 0.0));
}

TracelessVector TracelessVector::project(std::span<const double> components) {
  std::vector<double> c(components.begin(), components.end());
  double mean = 0.0;
  for (double v : c) mean += v;
  mean /= static_cast<double>(c.size());
  for (double& v : c) v -= mean;
  return TracelessVector(unchecked{}, std::move(c));
}

TracelessVector& TracelessVector::operator+=(const TracelessVector& o) {
  if (o.rank() != rank()) throw std::invalid_argument("TracelessVector: rank mismatch");
  for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] += o.comps_[k];
  return *this;
}

TracelessVector& TracelessVector::operator-=(const TracelessVector& o) {
  if (o.rank() != rank()) throw std::invalid_argument("TracelessVector: rank mismatch");
  for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] -= o.comps_[k];
  return *this;
}

TracelessVector& TracelessVector::operator*=(double s) {
  for (double& v : comps_) v *= s;
  return *this;
}

double TracelessVector::norm() const {
  double s = 0.0;
  for (double v : comps_) s += v * v;
  return std::sqrt(s);
}

double TracelessVector::sup() const {
  double s = 0.0;
  for (double v : comps_) s = std::max(s, std::abs(v));
  return s;
}

CyclicFrame::CyclicFrame(int rank) : rank_(rank) {
  if (rank < 2) throw std::invalid_argument("CyclicFrame: rank must be >= 2");
}

TracelessVector CyclicFrame::root(int j) const {
  if (j < 1 || j > rank_) throw std::out_of_range("CyclicFrame::root: index out of range");
  std::vector<double> v(static_cast<std::size_t>(rank_), 0.0);
  int lo = j - 1;
  int hi = j % rank_;
  v[static_cast<std::size_t>(hi)] += 1.0;
  v[static_cast<std::size_t>(lo)] -= 1.0;
  return TracelessVector(TracelessVector::unchecked{}, std::move(v));
}

double CyclicFrame::root_pairing(int j, std::span<const double> xi) const {
  if (j < 1 || j > rank_) throw std::out_of_range("CyclicFrame::root_pairing: index out of range");
  if (static_cast<int>(xi.size()) != rank_)
    throw std::invalid_argument("CyclicFrame::root_pairing: dimension mismatch");
  int lo = j - 1;
  int hi = j % rank_;
  return xi[static_cast<std::size_t>(hi)] - xi[static_cast<std::size_t>(lo)];
}

namespace {

void check_exponent(double p) {
  if (!(std::abs(p) <= kExpPairingLimit))
    throw std::range_error("cyclic nonlinearity: exponent pairing magnitude exceeds " +
                           std::to_string(kExpPairingLimit));
}

}  // namespace

void nonlinearity_into(const CyclicFrame& frame, std::span<const double> a,
                       std::span<const double> xi, std::span<double> out) {
  const int r = frame.rank();
  if (static_cast<int>(a.size()) != r || static_cast<int>(xi.size()) != r ||
      static_cast<int>(out.size()) != r)
    throw std::invalid_argument("nonlinearity: dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (int j = 0; j < r; ++j) {
    int hi = (j + 1) % r;
    double p = xi[static_cast<std::size_t>(hi)] - xi[static_cast<std::size_t>(j)];
    check_exponent(p);
    double c = a[static_cast<std::size_t>(j)] * std::exp(p);
    out[static_cast<std::size_t>(hi)] += c;
    out[static_cast<std::size_t>(j)] -= c;
  }
}

TracelessVector nonlinearity(const CyclicFrame& frame, std::span<const double> a,
                             const TracelessVector& xi) {
  std::vector<double> out(xi.rank(), 0.0);
  nonlinearity_into(frame, a, xi.span(), out);
  return TracelessVector(std::move(out));
}

void nonlinearity_jacobian_into(const CyclicFrame& frame, std::span<const double> a,
                                std::span<const double> xi, std::span<double> out) {
  const int r = frame.rank();
  if (static_cast<int>(a.size()) != r || static_cast<int>(xi.size()) != r ||
      static_cast<int>(out.size()) != r * r)
    throw std::invalid_argument("nonlinearity_jacobian: dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  auto at = [&](int i, int k) -> double& { return out[static_cast<std::size_t>(i * r + k)]; };
  for (int j = 0; j < r; ++j) {
    int hi = (j + 1) % r;
    double p = xi[static_cast<std::size_t>(hi)] - xi[static_cast<std::size_t>(j)];
    check_exponent(p);
    double c = a[static_cast<std::size_t>(j)] * std::exp(p);
    // v_j v_j^T has +1 at (j,j),(hi,hi) and -1 at (j,hi),(hi,j).
    at(j, j) += c;
    at(hi, hi) += c;
    at(j, hi) -= c;
    at(hi, j) -= c;
  }
}

std::vector<double> nonlinearity_jacobian(const CyclicFrame& frame, std::span<const double> a,
                                          const TracelessVector& xi) {
  std::vector<double> out(static_cast<std::size_t>(frame.rank()) * frame.rank(), 0.0);
  nonlinearity_jacobian_into(frame, a, xi.span(), out);
  return out;
}

double sigma_distance(std::span<const double> xi, std::span<const double> xi_prime) {
  if (xi.size() != xi_prime.size())
    throw std::invalid_argument("sigma_distance: rank mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    double d = xi[k] - xi_prime[k];
    check_exponent(d);
    s += std::exp(d) + std::exp(-d) - 2.0;
  }
  return s;
}

double sigma_distance(const TracelessVector& xi, const TracelessVector& xi_prime) {
  return sigma_distance(xi.span(), xi_prime.span());
}

namespace {

// In-place Cholesky solve for a small dense SPD system, row-major.
bool cholesky_solve(int n, std::vector<double>& m, std::vector<double>& b) {
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) {
      double s = m[static_cast<std::size_t>(i * n + k)];
      for (int l = 0; l < k; ++l)
        s -= m[static_cast<std::size_t>(i * n + l)] * m[static_cast<std::size_t>(k * n + l)];
      m[static_cast<std::size_t>(i * n + k)] = s / m[static_cast<std::size_t>(k * n + k)];
    }
    double d = m[static_cast<std::size_t>(i * n + i)];
    for (int l = 0; l < i; ++l) {
      double v = m[static_cast<std::size_t>(i * n + l)];
      d -= v * v;
    }
    if (!(d > 0.0)) return false;
    m[static_cast<std::size_t>(i * n + i)] = std::sqrt(d);
  }
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int l = 0; l < i; ++l)
      s -= m[static_cast<std::size_t>(i * n + l)] * b[static_cast<std::size_t>(l)];
    b[static_cast<std::size_t>(i)] = s / m[static_cast<std::size_t>(i * n + i)];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int l = i + 1; l < n; ++l)
      s -= m[static_cast<std::size_t>(l * n + i)] * b[static_cast<std::size_t>(l)];
    b[static_cast<std::size_t>(i)] = s / m[static_cast<std::size_t>(i * n + i)];
  }
  return true;
}

// Potential whose gradient on V is N(xi) - w; +inf outside the exp guard.
double constant_potential(const CyclicFrame& frame, std::span<const double> a,
                          std::span<const double> xi, std::span<const double> w) {
  const int r = frame.rank();
  double s = 0.0;
  for (int j = 1; j <= r; ++j) {
    double p = frame.root_pairing(j, xi);
    if (!(std::abs(p) <= kExpPairingLimit)) return std::numeric_limits<double>::infinity();
    s += a[static_cast<std::size_t>(j - 1)] * std::exp(p);
  }
  for (int k = 0; k < r; ++k) s -= w[static_cast<std::size_t>(k)] * xi[static_cast<std::size_t>(k)];
  return s;
}

}  // namespace

TracelessVector constant_solve(const CyclicFrame& frame, std::span<const double> a,
                               const TracelessVector& w) {
  const int r = frame.rank();
  if (static_cast<int>(a.size()) != r || static_cast<int>(w.rank()) != r)
    throw std::invalid_argument("constant_solve: dimension mismatch");
  for (double aj : a)
    if (!(aj > 0.0)) throw std::invalid_argument("constant_solve: coefficients must be > 0");

  const double wsup = w.sup();
  const double tol = 1e-12 * std::max(1.0, wsup);
  const int max_iterations = 100;

  std::vector<double> xi(static_cast<std::size_t>(r), 0.0);
  std::vector<double> res(static_cast<std::size_t>(r), 0.0);
  double phi = constant_potential(frame, a, xi, w.span());

  for (int it = 0; it < max_iterations; ++it) {
    nonlinearity_into(frame, a, xi, res);
    double rsup = 0.0;
    for (int k = 0; k < r; ++k) {
      res[static_cast<std::size_t>(k)] -= w[static_cast<std::size_t>(k)];
      rsup = std::max(rsup, std::abs(res[static_cast<std::size_t>(k)]));
    }
    if (rsup <= tol) return TracelessVector::project(xi);

    std::vector<double> jac(static_cast<std::size_t>(r) * r, 0.0);
    nonlinearity_jacobian_into(frame, a, xi, jac);
    // Rank-one completion along (1,...,1) makes the system SPD on R^r;
    // the residual is traceless, so the solution stays in V.
    double trace = 0.0;
    for (int k = 0; k < r; ++k) trace += jac[static_cast<std::size_t>(k * r + k)];
    double rho = std::max(trace / r, 1e-8);
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) jac[static_cast<std::size_t>(i * r + k)] += rho / r;

    std::vector<double> delta(res);
    for (double& v : delta) v = -v;
    if (!cholesky_solve(r, jac, delta))
      throw std::runtime_error("constant_solve: Newton system not positive definite");

    double slope = 0.0;
    for (int k = 0; k < r; ++k) slope += res[static_cast<std::size_t>(k)] * delta[static_cast<std::size_t>(k)];
    double t = 1.0;
    std::vector<double> trial(static_cast<std::size_t>(r), 0.0);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (int k = 0; k < r; ++k)
        trial[static_cast<std::size_t>(k)] =
            xi[static_cast<std::size_t>(k)] + t * delta[static_cast<std::size_t>(k)];
      double phi_t = constant_potential(frame, a, trial, w.span());
      if (phi_t <= phi + 1e-4 * t * slope) {
        xi = trial;
        phi = phi_t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) throw std::runtime_error("constant_solve: line search stalled");
  }
  throw std::runtime_error("constant_solve: no convergence after max iterations (ill-scaled input?)");
}

}  // namespace todaflow
