#include "todaflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace todaflow {

struct Domain::Data {
  DomainKind kind = DomainKind::interval;
  int nx = 0, ny = 1;
  double hx = 0.0, hy = 0.0;
  double lx = 0.0, ly = 0.0;
  double x0 = 0.0, y0 = 0.0;
  std::vector<std::uint8_t> boundary;  // empty for the torus
  std::vector<int> boundary_list;
  std::vector<int> unknown_of_node;
  std::vector<int> unknown_list;
  std::vector<double> lambda;
  std::vector<double> quad;  // trapezoid weight * hx (*hy), lambda excluded
};

DomainKind Domain::kind() const { return data_->kind; }
int Domain::nx() const { return data_->nx; }
int Domain::ny() const { return data_->ny; }
double Domain::hx() const { return data_->hx; }
double Domain::hy() const { return data_->hy; }
double Domain::extent_x() const { return data_->lx; }
double Domain::extent_y() const { return data_->ly; }
double Domain::origin_x() const { return data_->x0; }
double Domain::origin_y() const { return data_->y0; }
bool Domain::two_dimensional() const { return data_->kind != DomainKind::interval; }
bool Domain::periodic() const { return data_->kind == DomainKind::torus2d; }

int Domain::num_nodes() const { return data_->nx * data_->ny; }
int Domain::index(int ix, int iy) const { return iy * data_->nx + ix; }
double Domain::node_x(int node) const { return data_->x0 + data_->hx * (node % data_->nx); }
double Domain::node_y(int node) const {
  return two_dimensional() ? data_->y0 + data_->hy * (node / data_->nx) : 0.0;
}

bool Domain::is_boundary(int node) const {
  if (data_->boundary.empty()) return false;
  return data_->boundary[static_cast<std::size_t>(node)] != 0;
}

const std::vector<int>& Domain::boundary_nodes() const { return data_->boundary_list; }
int Domain::num_unknowns() const { return static_cast<int>(data_->unknown_list.size()); }
int Domain::unknown_of_node(int node) const { return data_->unknown_of_node[static_cast<std::size_t>(node)]; }
const std::vector<int>& Domain::unknown_nodes() const { return data_->unknown_list; }

double Domain::lambda(int node) const { return data_->lambda[static_cast<std::size_t>(node)]; }
double Domain::quad_weight(int node) const { return data_->quad[static_cast<std::size_t>(node)]; }

bool Domain::same_grid(const Domain& other) const {
  if (data_ == other.data_) return true;
  if (!data_ || !other.data_) return false;
  return data_->kind == other.data_->kind && data_->nx == other.data_->nx &&
         data_->ny == other.data_->ny && data_->hx == other.data_->hx &&
         data_->hy == other.data_->hy && data_->x0 == other.data_->x0 &&
         data_->y0 == other.data_->y0;
}

Domain build_domain(DomainKind kind, Extents extents, NodeCounts nodes, GridOrigin origin,
                    LambdaSpec lambda) {
  auto data = std::make_shared<Domain::Data>();
  data->kind = kind;
  data->x0 = origin.x;
  data->y0 = origin.y;

  const bool two_d = kind != DomainKind::interval;
  if (nodes.x < 3 || (two_d && nodes.y < 3))
    throw std::invalid_argument("build_domain: need at least 3 nodes per axis");
  if (!(extents.x > 0.0) || (two_d && !(extents.y > 0.0)))
    throw std::invalid_argument("build_domain: extents must be positive");

  data->nx = nodes.x;
  data->ny = two_d ? nodes.y : 1;
  data->lx = extents.x;
  data->ly = two_d ? extents.y : 0.0;
  const bool periodic = kind == DomainKind::torus2d;
  data->hx = periodic ? extents.x / nodes.x : extents.x / (nodes.x - 1);
  data->hy = two_d ? (periodic ? extents.y / nodes.y : extents.y / (nodes.y - 1)) : 0.0;

  const int n = data->nx * data->ny;

  if (!periodic) {
    data->boundary.assign(static_cast<std::size_t>(n), 0);
    for (int iy = 0; iy < data->ny; ++iy)
      for (int ix = 0; ix < data->nx; ++ix) {
        bool edge = ix == 0 || ix == data->nx - 1;
        if (two_d) edge = edge || iy == 0 || iy == data->ny - 1;
        if (edge) data->boundary[static_cast<std::size_t>(iy * data->nx + ix)] = 1;
      }
    for (int i = 0; i < n; ++i)
      if (data->boundary[static_cast<std::size_t>(i)]) data->boundary_list.push_back(i);
  }

  data->unknown_of_node.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    bool unknown = periodic || !data->boundary[static_cast<std::size_t>(i)];
    if (unknown) {
      data->unknown_of_node[static_cast<std::size_t>(i)] = static_cast<int>(data->unknown_list.size());
      data->unknown_list.push_back(i);
    }
  }

  data->lambda.assign(static_cast<std::size_t>(n), 1.0);
  if (lambda) {
    if (!two_d)
      throw std::invalid_argument("build_domain: interval domains support lambda = 1 only");
    for (int i = 0; i < n; ++i) {
      double x = data->x0 + data->hx * (i % data->nx);
      double y = data->y0 + data->hy * (i / data->nx);
      double v = lambda(x, y);
      if (!(v > 0.0))
        throw std::invalid_argument("build_domain: conformal factor must be positive everywhere");
      data->lambda[static_cast<std::size_t>(i)] = v;
    }
  }

  data->quad.assign(static_cast<std::size_t>(n), 0.0);
  auto axis_weight = [periodic](int i, int count) {
    if (periodic) return 1.0;
    return (i == 0 || i == count - 1) ? 0.5 : 1.0;
  };
  for (int iy = 0; iy < data->ny; ++iy)
    for (int ix = 0; ix < data->nx; ++ix) {
      double w = axis_weight(ix, data->nx) * data->hx;
      if (two_d) w *= axis_weight(iy, data->ny) * data->hy;
      data->quad[static_cast<std::size_t>(iy * data->nx + ix)] = w;
    }

  Domain d;
  d.data_ = std::move(data);
  return d;
}

ScalarField::ScalarField(const Domain& domain, double fill)
    : domain_(domain), values_(static_cast<std::size_t>(domain.num_nodes()), fill) {}

VectorField::VectorField(const Domain& domain, int rank)
    : domain_(domain), rank_(rank),
      values_(static_cast<std::size_t>(domain.num_nodes()) * static_cast<std::size_t>(rank), 0.0) {
  if (rank < 2) throw std::invalid_argument("VectorField: rank must be >= 2");
}

std::span<const double> VectorField::at(int node) const {
  return {values_.data() + static_cast<std::size_t>(node) * static_cast<std::size_t>(rank_),
          static_cast<std::size_t>(rank_)};
}

std::span<double> VectorField::at(int node) {
  return {values_.data() + static_cast<std::size_t>(node) * static_cast<std::size_t>(rank_),
          static_cast<std::size_t>(rank_)};
}

TracelessVector VectorField::value(int node) const {
  auto s = at(node);
  return TracelessVector(std::vector<double>(s.begin(), s.end()));
}

void VectorField::set(int node, const TracelessVector& v) {
  if (static_cast<int>(v.rank()) != rank_)
    throw std::invalid_argument("VectorField::set: rank mismatch");
  auto s = at(node);
  std::copy(v.components().begin(), v.components().end(), s.begin());
}

namespace {

// Second-difference neighbours of a node along one axis, with periodic wrap.
struct Stencil {
  int minus = 0;
  int plus = 0;
};

Stencil x_neighbours(const Domain& d, int ix, int iy) {
  int n = d.nx();
  int im = ix - 1, ip = ix + 1;
  if (d.periodic()) {
    im = (ix + n - 1) % n;
    ip = (ix + 1) % n;
  }
  return {d.index(im, iy), d.index(ip, iy)};
}

Stencil y_neighbours(const Domain& d, int ix, int iy) {
  int n = d.ny();
  int im = iy - 1, ip = iy + 1;
  if (d.periodic()) {
    im = (iy + n - 1) % n;
    ip = (iy + 1) % n;
  }
  return {d.index(ix, im), d.index(ix, ip)};
}

template <typename Get, typename Set>
void apply_laplacian(const Domain& d, int stride, Get get, Set set) {
  const double ax = 1.0 / (d.hx() * d.hx());
  const double ay = d.two_dimensional() ? 1.0 / (d.hy() * d.hy()) : 0.0;
  for (int iy = 0; iy < d.ny(); ++iy)
    for (int ix = 0; ix < d.nx(); ++ix) {
      int node = d.index(ix, iy);
      if (d.is_boundary(node)) {
        for (int k = 0; k < stride; ++k) set(node, k, get(node, k));
        continue;
      }
      Stencil sx = x_neighbours(d, ix, iy);
      Stencil sy = d.two_dimensional() ? y_neighbours(d, ix, iy) : Stencil{};
      double inv_lambda = 1.0 / d.lambda(node);
      for (int k = 0; k < stride; ++k) {
        double c = get(node, k);
        double v = ax * (2.0 * c - get(sx.minus, k) - get(sx.plus, k));
        if (d.two_dimensional()) v += ay * (2.0 * c - get(sy.minus, k) - get(sy.plus, k));
        set(node, k, inv_lambda * v);
      }
    }
}

}  // namespace

ScalarField laplacian_apply(const ScalarField& u) {
  ScalarField out(u.domain());
  apply_laplacian(
      u.domain(), 1, [&](int node, int) { return u[node]; },
      [&](int node, int, double v) { out[node] = v; });
  return out;
}

VectorField laplacian_apply(const VectorField& u) {
  VectorField out(u.domain(), u.rank());
  apply_laplacian(
      u.domain(), u.rank(), [&](int node, int k) { return u.at(node)[static_cast<std::size_t>(k)]; },
      [&](int node, int k, double v) { out.at(node)[static_cast<std::size_t>(k)] = v; });
  return out;
}

SparseMatrix assemble_laplacian(const Domain& d) {
  const double ax = 1.0 / (d.hx() * d.hx());
  const double ay = d.two_dimensional() ? 1.0 / (d.hy() * d.hy()) : 0.0;
  std::vector<Triplet> trips;
  const int m = d.num_unknowns();
  trips.reserve(static_cast<std::size_t>(m) * 5);
  for (int iy = 0; iy < d.ny(); ++iy)
    for (int ix = 0; ix < d.nx(); ++ix) {
      int node = d.index(ix, iy);
      int row = d.unknown_of_node(node);
      if (row < 0) continue;
      double diag = 2.0 * ax + (d.two_dimensional() ? 2.0 * ay : 0.0);
      trips.push_back({row, row, diag});
      Stencil sx = x_neighbours(d, ix, iy);
      for (int nb : {sx.minus, sx.plus}) {
        int col = d.unknown_of_node(nb);
        if (col >= 0) trips.push_back({row, col, -ax});
      }
      if (d.two_dimensional()) {
        Stencil sy = y_neighbours(d, ix, iy);
        for (int nb : {sy.minus, sy.plus}) {
          int col = d.unknown_of_node(nb);
          if (col >= 0) trips.push_back({row, col, -ay});
        }
      }
    }
  return SparseMatrix::from_triplets(m, std::move(trips));
}

double integrate(const ScalarField& f) {
  const Domain& d = f.domain();
  double s = 0.0;
  for (int i = 0; i < d.num_nodes(); ++i) s += d.quad_weight(i) * d.lambda(i) * f[i];
  return s;
}

double sup_norm(const ScalarField& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s = std::max(s, std::abs(f[i]));
  return s;
}

namespace {

double node_norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

double sup_norm(const VectorField& u) {
  double s = 0.0;
  for (int i = 0; i < u.domain().num_nodes(); ++i) s = std::max(s, node_norm(u.at(i)));
  return s;
}

double sup_norm_interior(const VectorField& u) {
  double s = 0.0;
  const Domain& d = u.domain();
  for (int node : d.unknown_nodes()) s = std::max(s, node_norm(u.at(node)));
  return s;
}

double l2_norm(const ScalarField& f) {
  const Domain& d = f.domain();
  double s = 0.0;
  for (int i = 0; i < d.num_nodes(); ++i) s += d.quad_weight(i) * d.lambda(i) * f[i] * f[i];
  return std::sqrt(s);
}

double l2_norm(const VectorField& u) {
  const Domain& d = u.domain();
  double s = 0.0;
  for (int i = 0; i < d.num_nodes(); ++i) {
    double q = d.quad_weight(i) * d.lambda(i);
    for (double c : u.at(i)) s += q * c * c;
  }
  return std::sqrt(s);
}

std::vector<double> boundary_trace(const ScalarField& f) {
  std::vector<double> t;
  for (int node : f.domain().boundary_nodes()) t.push_back(f[node]);
  return t;
}

std::vector<double> boundary_trace(const VectorField& u) {
  std::vector<double> t;
  for (int node : u.domain().boundary_nodes())
    for (double c : u.at(node)) t.push_back(c);
  return t;
}

void set_boundary(ScalarField& f, std::span<const double> trace) {
  const auto& nodes = f.domain().boundary_nodes();
  if (trace.size() != nodes.size())
    throw std::invalid_argument("set_boundary: trace size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) f[nodes[i]] = trace[i];
}

void set_boundary(VectorField& u, std::span<const double> trace) {
  const auto& nodes = u.domain().boundary_nodes();
  const std::size_t r = static_cast<std::size_t>(u.rank());
  if (trace.size() != nodes.size() * r)
    throw std::invalid_argument("set_boundary: trace size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto dst = u.at(nodes[i]);
    for (std::size_t k = 0; k < r; ++k) dst[k] = trace[i * r + k];
  }
}

}  // namespace todaflow
