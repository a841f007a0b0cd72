#ifndef TODAFLOW_COEFFICIENTS_HPP
#define TODAFLOW_COEFFICIENTS_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "todaflow/cyclic.hpp"
#include "todaflow/grid.hpp"

// Coefficient fields a_j >= 0 and source w for the problem families:
// spatially constant data, cyclic-Higgs data a_j = 4 k_j, the subharmonic
// generalization a_r = 4 e^eta, manufactured sources, and the hypothesis
// checker for the log-coefficient inequality.

namespace todaflow {

struct ProblemData {
  CyclicFrame frame{2};
  Domain domain;
  std::vector<ScalarField> a;  // r nonnegative fields
  VectorField w;
  // Some a_j vanishes on a nonempty node set no larger than the
  // measure-zero proxy fraction.
  bool degenerate_zeros = false;
};

// F(xi) = Delta_g xi + N(xi) - w on interior nodes, zero on the boundary.
VectorField residual_field(const ProblemData& problem, const VectorField& xi);

ProblemData constant_coefficients(const Domain& domain, const CyclicFrame& frame,
                                  std::span<const double> values, const TracelessVector& w_value);

// Complex polynomial, coefficient form (constant term first) or root form.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<std::complex<double>> coefficients);
  static Polynomial from_roots(std::span<const std::complex<double>> roots,
                               std::complex<double> scale = 1.0);
  std::complex<double> eval(std::complex<double> z) const;
  const std::vector<std::complex<double>>& coefficients() const { return coeffs_; }

 private:
  std::vector<std::complex<double>> coeffs_;
};

// a_j = 4 for j < r, a_r = 4 |q(z)|^2, w = 0, on a flat 2D domain viewed
// as a subset of C via z = x + iy.
ProblemData higgs_coefficients(const Domain& domain, const CyclicFrame& frame,
                               const Polynomial& q);

struct LogPole {
  double alpha = 1.0;  // must be > 0
  std::complex<double> z0;
};

struct SmoothTerm {
  enum class Kind { none, re_z, gaussian, quadratic };
  Kind kind = Kind::none;
  double amplitude = 1.0;   // gaussian amplitude or quadratic coefficient
  double sigma = 1.0;       // gaussian width
  std::complex<double> center;
};

// a_r = 4 e^eta with eta = sum_i alpha_i log|z - z_i|^2 + smooth term;
// a_j = 4 for j < r; w = 0. Nodes on a pole get a_r = 0.
ProblemData subharmonic_coefficients(const Domain& domain, const CyclicFrame& frame,
                                     std::span<const LogPole> poles,
                                     const SmoothTerm& smooth = {});

// w := Delta_g xi_star + N(xi_star) on interior nodes (zero on boundary),
// making xi_star the exact discrete solution.
VectorField manufactured_rhs(const Domain& domain, const CyclicFrame& frame,
                             std::span<const ScalarField> a, const VectorField& xi_star);

struct HypothesisCheck {
  // margin_j = -(v_j, w) - Delta_g log a_j at evaluated interior nodes.
  std::vector<ScalarField> margins;
  // Nodewise discretization allowance from a wide-stencil fourth-difference
  // estimate of the truncation error of Delta_g log a_j.
  std::vector<ScalarField> slack;
  std::vector<std::vector<std::uint8_t>> evaluated;
  bool holds = true;
  double worst_excess = 0.0;  // min over evaluated nodes of margin + tol + slack
  int worst_node = -1;
  int worst_j = 0;  // 1-based
};

struct HypothesisOptions {
  double zero_threshold = 1e-10;
  double tol = 1e-7;
  double slack_factor = 10.0;
};

HypothesisCheck theorem4_hypothesis_check(const ProblemData& problem,
                                          const HypothesisOptions& options = {});

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<double> zero_fraction;  // per j
  std::vector<double> log_integral;   // discrete integral of |log a_j| over a_j > 0
  std::vector<double> w_mean;          // componentwise mean of w (torus balance)
};

// Hypothesis screening: every a_j must be somewhere positive; large zero
// sets and torus sources with nonzero mean are warned about.
ValidationReport validate(const ProblemData& problem);

}  // namespace todaflow

#endif
