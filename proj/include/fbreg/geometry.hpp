#pragma once

#include <functional>

#include "fbreg/grid.hpp"

namespace fbreg {

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// Deterministic angular rule on the unit sphere S^{n-1}.
//   n = 1: the two directions -1, +1 with unit weights
//   n = 2: N_theta-point uniform trapezoid on [0, 2pi)
//   n = 3: product Gauss-Legendre in cos(theta) x uniform in phi
struct AngularRule {
  int n = 2;
  std::vector<Point> dirs;
  std::vector<double> w;      // sums to H^{n-1}(dB_1)
  std::vector<double> theta;  // n = 2 only: the node angles

  int size() const { return static_cast<int>(dirs.size()); }
};

AngularRule angular_rule(int n, int N_theta = 256, int N_cos = 32, int N_phi = 64);

// Product quadrature over B_r(x0) and its bounding sphere. Radial part is
// Gauss-Legendre on [0, r] so W(u, x0, r) varies smoothly in r.
struct BallQuadrature {
  int n = 2;
  Point center{0, 0, 0};
  double r = 1.0;
  AngularRule ang;
  std::vector<double> rho, wrho;  // radial nodes/weights on [0, r]

  std::int64_t volume_size() const {
    return static_cast<std::int64_t>(rho.size()) * ang.size();
  }
  Point volume_node(std::int64_t q) const;
  double volume_weight(std::int64_t q) const;  // includes rho^{n-1}
  Point surface_node(int j) const;
  double surface_weight(int j) const;  // includes r^{n-1}
};

// Grid-free rule over B_r(x0); orders below the defaults are raised to them.
BallQuadrature ball_quadrature_free(int n, const Point& x0, double r, int N_r = 0,
                                    int N_theta = 0);

// Grid-aware rule: requires B_{r+2h}(x0) inside the hull, errors with the
// missing margin otherwise. Default orders: N_r = max(32, ceil(4r/h)),
// N_theta = max(128, ceil(2 pi r/h)).
BallQuadrature ball_quadrature(const Grid& g, const Point& x0, double r, int N_r = 0,
                               int N_theta = 0);

// Multilinear interpolation of nodal values. x must lie in the grid hull.
VecM interpolate(const VectorField& u, const Point& x);

// Multilinear interpolation of a nodal scalar array (e.g. |u| magnitudes).
double interpolate_scalar(const Grid& g, const std::vector<double>& s, const Point& x);

// Centered-difference nodal gradients (one-sided second order at the hull),
// multilinearly interpolated at x. Row c, column a = d u_c / d x_a, written
// into grad (m*n doubles, a innermost). Requires dist(x, hull) >= h.
void gradient_at(const VectorField& u, const Point& x, double* grad);

// Cubic (Catmull-Rom) tensor interpolation; reproduces quadratics, which the
// quadrature audits need to keep their bias below the monotonicity tolerance.
VecM interpolate_cubic(const VectorField& u, const Point& x);

// Uniform view of a field for the quadrature-based functionals: analytic
// closures and grid fields both reduce to this.
struct FieldProbe {
  int n = 2, m = 1;
  std::function<VecM(const Point&)> value;
  std::function<void(const Point&, double*)> gradient;  // m*n, axis innermost
};

// cubic = true samples values with interpolate_cubic (audit default);
// gradients always come from gradient_at.
FieldProbe probe_of(const VectorField& u, bool cubic = true);
FieldProbe probe_of(const HalfSpaceSolution& H);

}  // namespace fbreg
