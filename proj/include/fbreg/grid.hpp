#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbreg/common.hpp"

namespace fbreg {

// Uniform isotropic node grid in R^n, n in {1,2,3}. Node indices are
// lexicographic with the last axis fastest.
struct Grid {
  int n = 2;
  std::array<std::int64_t, 3> dims{3, 3, 1};
  Point origin{0, 0, 0};
  double h = 1.0;

  Grid() = default;
  Grid(int n_, std::array<std::int64_t, 3> dims_, Point origin_, double h_);

  std::int64_t node_count() const {
    std::int64_t c = 1;
    for (int a = 0; a < n; ++a) c *= dims[static_cast<size_t>(a)];
    return c;
  }
  std::int64_t index(std::array<std::int64_t, 3> idx) const {
    std::int64_t k = idx[0];
    for (int a = 1; a < n; ++a) k = k * dims[static_cast<size_t>(a)] + idx[static_cast<size_t>(a)];
    return k;
  }
  std::array<std::int64_t, 3> unindex(std::int64_t k) const {
    std::array<std::int64_t, 3> idx{0, 0, 0};
    for (int a = n - 1; a >= 0; --a) {
      idx[static_cast<size_t>(a)] = k % dims[static_cast<size_t>(a)];
      k /= dims[static_cast<size_t>(a)];
    }
    return idx;
  }
  Point coords(std::array<std::int64_t, 3> idx) const {
    Point x{0, 0, 0};
    for (int a = 0; a < n; ++a)
      x[static_cast<size_t>(a)] =
          origin[static_cast<size_t>(a)] + h * static_cast<double>(idx[static_cast<size_t>(a)]);
    return x;
  }
  double hull_min(int axis) const { return origin[static_cast<size_t>(axis)]; }
  double hull_max(int axis) const {
    return origin[static_cast<size_t>(axis)] +
           h * static_cast<double>(dims[static_cast<size_t>(axis)] - 1);
  }
  bool contains(const Point& x, double slack = 0.0) const {
    for (int a = 0; a < n; ++a)
      if (x[static_cast<size_t>(a)] < hull_min(a) - slack ||
          x[static_cast<size_t>(a)] > hull_max(a) + slack)
        return false;
    return true;
  }
};

// Centered square grid [-half, half]^n with spacing h; used throughout the
// audits. Node coordinates land exactly on multiples of h.
Grid make_centered_grid(int n, double half, double h);

// m-vector field on grid nodes. Masked nodes are Dirichlet: they hold their
// boundary data and are never touched by the solver.
struct VectorField {
  Grid grid;
  int m = 1;
  std::vector<double> values;        // node-major, component innermost
  std::vector<std::uint8_t> mask;    // 1 = boundary/pinned

  VectorField() = default;
  VectorField(const Grid& g, int m_);

  double* at(std::int64_t node) { return values.data() + node * m; }
  const double* at(std::int64_t node) const { return values.data() + node * m; }
  VecM vec_at(std::int64_t node) const {
    VecM v(m);
    const double* p = at(node);
    for (int c = 0; c < m; ++c) v[c] = p[c];
    return v;
  }
  double norm_at(std::int64_t node) const {
    double s = 0;
    const double* p = at(node);
    for (int c = 0; c < m; ++c) s += p[c] * p[c];
    return std::sqrt(s);
  }

  // Marks every node on the hull faces as boundary.
  void mask_hull();
  // Marks every node with |x - center| >= radius (disk embedding).
  void mask_outside_ball(const Point& center, double radius);
  // Writes g(x) into every masked node.
  void fill_boundary(const std::function<VecM(const Point&)>& g);
  // Writes v(x) into every node regardless of mask.
  void fill(const std::function<VecM(const Point&)>& v);

  void check_finite(const char* who) const;
};

// Half space solution f0 * max(x.nu, 0)^2 / 2 * e.
struct HalfSpaceSolution {
  Point nu{0, 1, 0};  // unit vector in R^n
  VecM e{1.0};        // unit vector in R^m
  double f0 = 1.0;
  int n = 2;

  HalfSpaceSolution() = default;
  HalfSpaceSolution(int n_, const Point& nu_, const VecM& e_, double f0_);

  VecM eval(const Point& x) const;
  // Jacobian row c, column a: d u_c / d x_a = f0 * max(x.nu,0) * nu_a * e_c.
  double grad(const Point& x, int c, int a) const;
};

VecM half_space_eval(const HalfSpaceSolution& H, const Point& x);

}  // namespace fbreg
