#ifndef TODAFLOW_GRID_HPP
#define TODAFLOW_GRID_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "todaflow/cyclic.hpp"
#include "todaflow/linsolve.hpp"

// Discretized domains (1D interval, 2D rectangle with Dirichlet boundary,
// 2D flat torus) with the nonnegative geometric Laplacian
// Delta_g = -(1/lambda) * (flat second differences), node quadrature for
// dvol = lambda dx dy, and field containers.

namespace todaflow {

enum class DomainKind { interval, rectangle, torus2d };

struct Extents {
  double x = 1.0;
  double y = 1.0;
};

struct NodeCounts {
  int x = 0;
  int y = 1;
};

struct GridOrigin {
  double x = 0.0;
  double y = 0.0;
};

// Conformal factor spec: evaluated at node coordinates; null means 1.
using LambdaSpec = std::function<double(double, double)>;

// Value-type handle over shared immutable grid data; cheap to copy.
class Domain {
 public:
  Domain() = default;

  DomainKind kind() const;
  int nx() const;
  int ny() const;          // 1 for interval
  double hx() const;
  double hy() const;       // 0 for interval
  double extent_x() const;
  double extent_y() const;
  double origin_x() const;
  double origin_y() const;
  bool two_dimensional() const;
  bool periodic() const;

  int num_nodes() const;
  int index(int ix, int iy) const;  // row-major: iy * nx + ix
  double node_x(int node) const;
  double node_y(int node) const;

  bool is_boundary(int node) const;
  // Boundary node indices in ascending order; empty for the torus.
  const std::vector<int>& boundary_nodes() const;

  // Unknown numbering: interior nodes for Dirichlet kinds, all nodes for
  // the torus, in ascending node order.
  int num_unknowns() const;
  int unknown_of_node(int node) const;  // -1 on Dirichlet boundary
  const std::vector<int>& unknown_nodes() const;

  double lambda(int node) const;
  // Trapezoidal quadrature weight including h factors, excluding lambda.
  double quad_weight(int node) const;

  bool same_grid(const Domain& other) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
  friend Domain build_domain(DomainKind, Extents, NodeCounts, GridOrigin, LambdaSpec);
};

// Node counts must be >= 3 per used axis; extents positive; lambda > 0
// everywhere (1D supports lambda = 1 only).
Domain build_domain(DomainKind kind, Extents extents, NodeCounts nodes, GridOrigin origin = {},
                    LambdaSpec lambda = {});

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Domain& domain, double fill = 0.0);

  const Domain& domain() const { return domain_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int node) const { return values_[static_cast<std::size_t>(node)]; }
  double& operator[](int node) { return values_[static_cast<std::size_t>(node)]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  Domain domain_;
  std::vector<double> values_;
};

// Node-indexed field of rank-r traceless vectors, stored node-major.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const Domain& domain, int rank);

  const Domain& domain() const { return domain_; }
  int rank() const { return rank_; }
  std::span<const double> at(int node) const;
  std::span<double> at(int node);
  TracelessVector value(int node) const;
  void set(int node, const TracelessVector& v);
  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }

 private:
  Domain domain_;
  int rank_ = 0;
  std::vector<double> values_;
};

// Nonnegative geometric Laplacian; boundary nodes pass through unchanged.
ScalarField laplacian_apply(const ScalarField& u);
VectorField laplacian_apply(const VectorField& u);

// Flat-measure form of the operator over unknown nodes: symmetric, positive
// definite for Dirichlet kinds, positive semidefinite with constant kernel
// on the torus. Its action equals lambda * laplacian_apply nodewise on
// fields vanishing at the boundary (equals laplacian_apply when lambda = 1).
SparseMatrix assemble_laplacian(const Domain& domain);

// Quadrature of f dvol (trapezoid on bounded axes, uniform on periodic).
double integrate(const ScalarField& f);

double sup_norm(const ScalarField& f);               // max |f|
double sup_norm(const VectorField& u);               // max node Euclidean norm
double sup_norm_interior(const VectorField& u);
double l2_norm(const ScalarField& f);                // sqrt(integral of f^2 dvol)
double l2_norm(const VectorField& u);

// Boundary values in ascending boundary-node order (r per node for vector
// fields); empty for the torus.
std::vector<double> boundary_trace(const ScalarField& f);
std::vector<double> boundary_trace(const VectorField& u);
void set_boundary(ScalarField& f, std::span<const double> trace);
void set_boundary(VectorField& u, std::span<const double> trace);

}  // namespace todaflow

#endif
