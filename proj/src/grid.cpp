#include "fbreg/grid.hpp"

#include <cmath>
#include <functional>

namespace fbreg {

Grid::Grid(int n_, std::array<std::int64_t, 3> dims_, Point origin_, double h_)
    : n(n_), dims(dims_), origin(origin_), h(h_) {
  if (n < 1 || n > 3) throw InputError("Grid: n must be 1, 2 or 3");
  if (!(h > 0)) throw InputError("Grid: spacing must be > 0");
  for (int a = 0; a < n; ++a)
    if (dims[static_cast<size_t>(a)] < 3) throw InputError("Grid: need >= 3 nodes per axis");
  for (int a = n; a < 3; ++a) dims[static_cast<size_t>(a)] = 1;
  if (node_count() > (std::int64_t(1) << 31))
    throw InputError("Grid: node count exceeds addressable budget");
}

Grid make_centered_grid(int n, double half, double h) {
  const auto side = static_cast<std::int64_t>(std::llround(2.0 * half / h)) + 1;
  std::array<std::int64_t, 3> dims{side, n > 1 ? side : 1, n > 2 ? side : 1};
  Point origin{-half, n > 1 ? -half : 0.0, n > 2 ? -half : 0.0};
  return Grid(n, dims, origin, h);
}

VectorField::VectorField(const Grid& g, int m_) : grid(g), m(m_) {
  if (m < 1 || m > kMaxCodim) throw InputError("VectorField: m out of range");
  values.assign(static_cast<size_t>(grid.node_count() * m), 0.0);
  mask.assign(static_cast<size_t>(grid.node_count()), 0);
}

void VectorField::mask_hull() {
  const std::int64_t count = grid.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = grid.unindex(k);
    for (int a = 0; a < grid.n; ++a) {
      if (idx[static_cast<size_t>(a)] == 0 ||
          idx[static_cast<size_t>(a)] == grid.dims[static_cast<size_t>(a)] - 1) {
        mask[static_cast<size_t>(k)] = 1;
        break;
      }
    }
  }
}

void VectorField::mask_outside_ball(const Point& center, double radius) {
  const std::int64_t count = grid.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    const Point x = grid.coords(grid.unindex(k));
    double r2 = 0;
    for (int a = 0; a < grid.n; ++a) {
      const double d = x[static_cast<size_t>(a)] - center[static_cast<size_t>(a)];
      r2 += d * d;
    }
    if (r2 >= radius * radius) mask[static_cast<size_t>(k)] = 1;
  }
}

void VectorField::fill_boundary(const std::function<VecM(const Point&)>& g) {
  const std::int64_t count = grid.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    if (!mask[static_cast<size_t>(k)]) continue;
    const VecM v = g(grid.coords(grid.unindex(k)));
    double* p = at(k);
    for (int c = 0; c < m; ++c) p[c] = v[c];
  }
}

void VectorField::fill(const std::function<VecM(const Point&)>& v) {
  const std::int64_t count = grid.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    const VecM val = v(grid.coords(grid.unindex(k)));
    double* p = at(k);
    for (int c = 0; c < m; ++c) p[c] = val[c];
  }
}

void VectorField::check_finite(const char* who) const {
  for (double v : values)
    if (!std::isfinite(v)) throw InputError(std::string(who) + ": non-finite value in field");
}

HalfSpaceSolution::HalfSpaceSolution(int n_, const Point& nu_, const VecM& e_, double f0_)
    : nu(nu_), e(e_), f0(f0_), n(n_) {
  const double nn = norm_n(nu, n);
  const double ne = e.norm();
  if (std::abs(nn - 1.0) > 1e-12 || std::abs(ne - 1.0) > 1e-12)
    throw InputError("HalfSpaceSolution: nu and e must be unit vectors");
  if (!(f0 > 0)) throw InputError("HalfSpaceSolution: f0 must be > 0");
}

VecM HalfSpaceSolution::eval(const Point& x) const {
  const double t = std::max(dotn(x, nu, n), 0.0);
  return (f0 * t * t / 2.0) * e;
}

double HalfSpaceSolution::grad(const Point& x, int c, int a) const {
  const double t = std::max(dotn(x, nu, n), 0.0);
  return f0 * t * nu[static_cast<size_t>(a)] * e[c];
}

VecM half_space_eval(const HalfSpaceSolution& H, const Point& x) { return H.eval(x); }

}  // namespace fbreg
