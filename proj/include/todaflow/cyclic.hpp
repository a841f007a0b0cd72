#ifndef TODAFLOW_CYCLIC_HPP
#define TODAFLOW_CYCLIC_HPP

#include <cstddef>
#include <span>
#include <vector>

// Exact algebra on the trace-zero subspace V = {x in R^r : sum x_k = 0},
// the cyclic roots v_j = u_{j+1} - u_j, the exponential nonlinearity
// N(xi) = sum_j a_j e^{(v_j,xi)} v_j, its Jacobian, the sigma distance,
// and the constant-coefficient algebraic solve.

namespace todaflow {

// Pairings beyond this magnitude would overflow exp(); rejected loudly.
inline constexpr double kExpPairingLimit = 700.0;

// Tolerance scale for the trace-zero invariant.
inline constexpr double kTraceTol = 1e-12;

double pairing(std::span<const double> x, std::span<const double> y);

bool is_traceless(std::span<const double> x);

// A point of V. Construction enforces |sum| <= 1e-12 * max(1, max|x_k|).
class TracelessVector {
 public:
  TracelessVector() = default;
  explicit TracelessVector(std::vector<double> components);

  static TracelessVector zero(std::size_t rank);
  // Subtracts the component mean; identity on V, idempotent.
  static TracelessVector project(std::span<const double> components);

  std::size_t rank() const { return comps_.size(); }
  double operator[](std::size_t k) const { return comps_[k]; }
  const std::vector<double>& components() const { return comps_; }
  std::span<const double> span() const { return comps_; }

  TracelessVector& operator+=(const TracelessVector& o);
  TracelessVector& operator-=(const TracelessVector& o);
  TracelessVector& operator*=(double s);
  friend TracelessVector operator+(TracelessVector a, const TracelessVector& b) { return a += b; }
  friend TracelessVector operator-(TracelessVector a, const TracelessVector& b) { return a -= b; }
  friend TracelessVector operator*(double s, TracelessVector a) { return a *= s; }

  double norm() const;      // Euclidean
  double sup() const;       // max |component|

 private:
  struct unchecked {};
  TracelessVector(unchecked, std::vector<double> c) : comps_(std::move(c)) {}
  std::vector<double> comps_;
  friend class CyclicFrame;
};

// Rank r >= 2 and the cyclic roots v_j = u_{j+1} - u_j (indices mod r),
// j = 1..r. The roots sum to zero and span V.
class CyclicFrame {
 public:
  explicit CyclicFrame(int rank);

  int rank() const { return rank_; }

  // v_j for j in 1..r.
  TracelessVector root(int j) const;

  // (v_j, xi) = xi_{j+1 mod r} - xi_j, without materializing v_j.
  double root_pairing(int j, std::span<const double> xi) const;

 private:
  int rank_ = 0;
};

// N(xi) = sum_j a_j e^{(v_j,xi)} v_j, written into `out` (size r).
// Throws std::range_error if any |(v_j,xi)| exceeds kExpPairingLimit.
void nonlinearity_into(const CyclicFrame& frame, std::span<const double> a,
                       std::span<const double> xi, std::span<double> out);

TracelessVector nonlinearity(const CyclicFrame& frame, std::span<const double> a,
                             const TracelessVector& xi);

// DN(xi) = sum_j a_j e^{(v_j,xi)} v_j v_j^T, row-major r x r.
// Symmetric positive semidefinite; kernel contains (1,...,1).
void nonlinearity_jacobian_into(const CyclicFrame& frame, std::span<const double> a,
                                std::span<const double> xi, std::span<double> out);

std::vector<double> nonlinearity_jacobian(const CyclicFrame& frame, std::span<const double> a,
                                          const TracelessVector& xi);

// sigma(xi, xi') = sum_j (e^{(xi-xi',u_j)} + e^{(xi'-xi,u_j)}) - 2r.
// Nonnegative, zero iff xi == xi'.
double sigma_distance(const TracelessVector& xi, const TracelessVector& xi_prime);
double sigma_distance(std::span<const double> xi, std::span<const double> xi_prime);

// Unique xi in V with N(xi) = w, for strictly positive a. Newton on the
// strictly convex potential sum_j a_j e^{(v_j,xi)} - (w,xi) with halving
// line search from xi = 0. Residual |N(xi)-w|_inf <= 1e-12 * max(1,|w|_inf).
TracelessVector constant_solve(const CyclicFrame& frame, std::span<const double> a,
                               const TracelessVector& w);

}  // namespace todaflow

#endif
