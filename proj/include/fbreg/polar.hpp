#pragma once

#include "fbreg/geometry.hpp"

namespace fbreg {

// Field samples on the standard polar unit-ball grid: radial Gauss ladder in
// (0,1) x an angular rule, plus the rho = 1 trace ring. Values and gradients
// are stored at every node so the H/M functionals and sphere distances reduce
// to weighted sums.
struct PolarField {
  int n = 2, m = 1;
  AngularRule ang;
  std::vector<double> rho, wrho;   // Gauss nodes/weights on (0, 1)
  std::vector<double> values;      // (i*nang + j)*m + c
  std::vector<double> gradients;   // ((i*nang + j)*m + c)*n + a
  std::vector<double> trace;       // j*m + c, samples at rho = 1
  std::vector<double> trace_grad;  // (j*m + c)*n + a

  int nang() const { return ang.size(); }
  int nrad() const { return static_cast<int>(rho.size()); }
  const double* value_at(int i, int j) const {
    return values.data() + (static_cast<std::int64_t>(i) * nang() + j) * m;
  }
  const double* grad_at(int i, int j) const {
    return gradients.data() + ((static_cast<std::int64_t>(i) * nang() + j) * m) * n;
  }
  double norm_at(int i, int j) const {
    const double* p = value_at(i, j);
    double s = 0;
    for (int c = 0; c < m; ++c) s += p[c] * p[c];
    return std::sqrt(s);
  }
  Point node(int i, int j) const {
    Point x{0, 0, 0};
    for (int a = 0; a < n; ++a)
      x[static_cast<size_t>(a)] = rho[static_cast<size_t>(i)] * ang.dirs[static_cast<size_t>(j)][static_cast<size_t>(a)];
    return x;
  }

  // Deterministic integration helpers.
  double volume_integral(const std::function<double(int, int)>& f) const;
  double surface_integral(const std::function<double(int)>& f) const;
};

// Samples a probe on the standard polar grid (N_rad Gauss nodes, angular
// defaults as in ball quadrature). scale maps the unit ball into the probe's
// own coordinates: sampled value = value(x0 + scale*x)/scale^2 when
// blowup_scaling is set, plain value(x) otherwise.
PolarField polar_from_probe(const FieldProbe& probe, int N_rad = 32, int N_theta = 256);

// Polar samples of the rescaled field u_{x0,r}(x) = u(x0 + r x)/r^2.
PolarField polar_blowup(const FieldProbe& probe, const Point& x0, double r, int N_rad = 32,
                        int N_theta = 256);

}  // namespace fbreg
