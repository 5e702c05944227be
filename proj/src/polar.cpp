#include "fbreg/polar.hpp"

#include <cmath>

namespace fbreg {

double PolarField::volume_integral(const std::function<double(int, int)>& f) const {
  double total = 0;
  for (int i = 0; i < nrad(); ++i) {
    double ring = 0;
    for (int j = 0; j < nang(); ++j) ring += ang.w[static_cast<size_t>(j)] * f(i, j);
    total += wrho[static_cast<size_t>(i)] *
             std::pow(rho[static_cast<size_t>(i)], n - 1) * ring;
  }
  return total;
}

double PolarField::surface_integral(const std::function<double(int)>& f) const {
  double total = 0;
  for (int j = 0; j < nang(); ++j) total += ang.w[static_cast<size_t>(j)] * f(j);
  return total;
}

namespace {

PolarField make_shell(int n, int m, int N_rad, int N_theta) {
  PolarField v;
  v.n = n;
  v.m = m;
  if (n == 2)
    v.ang = angular_rule(2, std::max(N_theta, 128));
  else if (n == 3)
    v.ang = angular_rule(3, 0, 32, 64);
  else
    v.ang = angular_rule(n);
  gauss_legendre(std::max(N_rad, 16), 0.0, 1.0, v.rho, v.wrho);
  const auto total = static_cast<size_t>(v.nrad()) * static_cast<size_t>(v.nang());
  v.values.assign(total * static_cast<size_t>(m), 0.0);
  v.gradients.assign(total * static_cast<size_t>(m) * static_cast<size_t>(n), 0.0);
  v.trace.assign(static_cast<size_t>(v.nang()) * static_cast<size_t>(m), 0.0);
  v.trace_grad.assign(static_cast<size_t>(v.nang()) * static_cast<size_t>(m) * static_cast<size_t>(n), 0.0);
  return v;
}

}  // namespace

PolarField polar_from_probe(const FieldProbe& probe, int N_rad, int N_theta) {
  PolarField v = make_shell(probe.n, probe.m, N_rad, N_theta);
  std::vector<double> g(static_cast<size_t>(probe.m * probe.n));
  for (int i = 0; i < v.nrad(); ++i) {
    for (int j = 0; j < v.nang(); ++j) {
      const Point x = v.node(i, j);
      const VecM val = probe.value(x);
      probe.gradient(x, g.data());
      double* pv = v.values.data() + (static_cast<std::int64_t>(i) * v.nang() + j) * v.m;
      double* pg = v.gradients.data() + (static_cast<std::int64_t>(i) * v.nang() + j) * v.m * v.n;
      for (int c = 0; c < v.m; ++c) pv[c] = val[c];
      for (int c = 0; c < v.m * v.n; ++c) pg[c] = g[static_cast<size_t>(c)];
    }
  }
  for (int j = 0; j < v.nang(); ++j) {
    Point x{0, 0, 0};
    for (int a = 0; a < v.n; ++a) x[static_cast<size_t>(a)] = v.ang.dirs[static_cast<size_t>(j)][static_cast<size_t>(a)];
    const VecM val = probe.value(x);
    probe.gradient(x, g.data());
    for (int c = 0; c < v.m; ++c) v.trace[static_cast<size_t>(j * v.m + c)] = val[c];
    for (int c = 0; c < v.m * v.n; ++c)
      v.trace_grad[static_cast<size_t>(j * v.m * v.n + c)] = g[static_cast<size_t>(c)];
  }
  return v;
}

PolarField polar_blowup(const FieldProbe& probe, const Point& x0, double r, int N_rad,
                        int N_theta) {
  if (!(r > 0)) throw InputError("polar_blowup: r > 0");
  FieldProbe rescaled;
  rescaled.n = probe.n;
  rescaled.m = probe.m;
  const double inv_r2 = 1.0 / (r * r);
  rescaled.value = [&probe, x0, r, inv_r2](const Point& x) {
    Point y = x0;
    for (int a = 0; a < 3; ++a) y[static_cast<size_t>(a)] += r * x[static_cast<size_t>(a)];
    return inv_r2 * probe.value(y);
  };
  const double inv_r = 1.0 / r;
  const int mn = probe.m * probe.n;
  rescaled.gradient = [&probe, x0, r, inv_r, mn](const Point& x, double* g) {
    Point y = x0;
    for (int a = 0; a < 3; ++a) y[static_cast<size_t>(a)] += r * x[static_cast<size_t>(a)];
    probe.gradient(y, g);
    for (int c = 0; c < mn; ++c) g[c] *= inv_r;
  };
  return polar_from_probe(rescaled, N_rad, N_theta);
}

}  // namespace fbreg
