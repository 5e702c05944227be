#include "fbreg/oracle.hpp"

#include <cmath>

namespace fbreg {

double Contact1D::eval(double x) const {
  if (!has_contact) return lambda * x * x / 2.0 + par_A * x + par_B;
  const double l = std::max(x1 - x, 0.0);
  const double r = std::max(x - x2, 0.0);
  return lambda * (l * l + r * r) / 2.0;
}

double Contact1D::deriv(double x) const {
  if (!has_contact) return lambda * x + par_A;
  if (x < x1) return -lambda * (x1 - x);
  if (x > x2) return lambda * (x - x2);
  return 0.0;
}

Contact1D exact_linear_1d(double lambda, double a, double b, double p, double q) {
  if (!(lambda > 0)) throw InputError("exact_linear_1d: lambda > 0");
  if (p < 0 || q < 0) throw InputError("exact_linear_1d: boundary data must be >= 0");
  Contact1D sol;
  sol.lambda = lambda;
  sol.a = a;
  sol.b = b;
  sol.p = p;
  sol.q = q;
  sol.x1 = a + std::sqrt(2.0 * p / lambda);
  sol.x2 = b - std::sqrt(2.0 * q / lambda);
  if (sol.x1 <= sol.x2 + 1e-14) {
    sol.has_contact = true;
    if (sol.x1 > sol.x2) sol.x1 = sol.x2 = 0.5 * (sol.x1 + sol.x2);  // grazing
  } else {
    sol.has_contact = false;
    // parabola u = lambda x^2/2 + A x + B through (a, p), (b, q)
    sol.par_A = (q - p - lambda * (b * b - a * a) / 2.0) / (b - a);
    sol.par_B = p - lambda * a * a / 2.0 - sol.par_A * a;
  }
  return sol;
}

VectorField reference_solve_1d(const Nonlinearity& N, double a, double b, double p, double q,
                               double h, int refinement, const SolveOptions& base) {
  if (refinement < 4) throw InputError("reference_solve_1d: refinement >= 4x the grid under test");
  const double h_ref = h / refinement;
  const auto nodes = static_cast<std::int64_t>(std::llround((b - a) / h_ref)) + 1;
  Grid g(1, {nodes, 1, 1}, Point{a, 0, 0}, h_ref);
  VectorField u(g, 1);
  u.mask_hull();
  u.at(0)[0] = p;
  u.at(nodes - 1)[0] = q;
  SolveOptions opts = base;
  opts.tol_fp = base.tol_fp / 100.0;
  opts.tol_E = base.tol_E / 100.0;
  opts.max_iters = std::max<std::int64_t>(base.max_iters, 400000);
  return minimize(u, N, opts).first;
}

double RadialProfile::eval(double rr) const {
  if (rr <= 0) return U.front();
  if (rr >= R) return U.back();
  const double s = rr / h;
  const auto i = static_cast<size_t>(std::floor(s));
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * U[i] + t * U[i + 1];
}

namespace {

// One-level weighted forward-backward solve of the radial functional with a
// given starting profile.
std::vector<double> radial_solve_level(const Nonlinearity& N, int n, double R, double b_mag,
                                       double h, std::vector<double> u) {
  const auto nodes = u.size();
  std::vector<double> r(nodes), we(nodes - 1), wn(nodes);
  for (size_t i = 0; i < nodes; ++i) r[i] = static_cast<double>(i) * h;
  double max_incident = 0;
  for (size_t i = 0; i + 1 < nodes; ++i)
    we[i] = std::pow(0.5 * (r[i] + r[i + 1]), n - 1) / h;
  for (size_t i = 0; i < nodes; ++i) wn[i] = std::pow(r[i], n - 1) * h;
  for (size_t i = 0; i < nodes; ++i) {
    double s = 0;
    if (i > 0) s += we[i - 1];
    if (i + 1 < nodes) s += we[i];
    max_incident = std::max(max_incident, s);
  }
  const double tau = 1.0 / (8.0 * max_incident);
  std::vector<double> y(u), unew(nodes);
  double t_mom = 1.0;
  const double stop = 1e-12;
  for (std::int64_t it = 0; it < 500000; ++it) {
    double delta = 0;
    for (size_t i = 0; i + 1 < nodes; ++i) {
      double grad = 0;
      if (i > 0) grad += 2.0 * we[i - 1] * (y[i] - y[i - 1]);
      grad += 2.0 * we[i] * (y[i] - y[i + 1]);
      double w = y[i] - tau * grad;
      double val;
      if (wn[i] > 0) {
        const double tn = tau * wn[i];
        if (std::abs(w) <= tn * N.dF(0.0))
          val = 0.0;
        else
          val = (w > 0 ? 1.0 : -1.0) * prox_radial(std::abs(w), tn, N);
      } else {
        val = w;
      }
      delta = std::max(delta, std::abs(val - u[i]));
      unew[i] = val;
    }
    unew[nodes - 1] = b_mag;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
    const double beta = (t_mom - 1.0) / t_next;
    for (size_t i = 0; i + 1 < nodes; ++i) y[i] = unew[i] + beta * (unew[i] - u[i]);
    y[nodes - 1] = b_mag;
    t_mom = t_next;
    std::swap(u, unew);
    if (delta <= stop) break;
  }
  return u;
}

}  // namespace

RadialProfile reference_radial(const Nonlinearity& N, int n, double R, double b_mag, double h) {
  if (b_mag < 0) throw InputError("reference_radial: boundary magnitude >= 0");
  RadialProfile prof;
  prof.n = n;
  prof.R = R;
  prof.h = h;
  const auto nodes = static_cast<size_t>(std::llround(R / h)) + 1;
  prof.r.resize(nodes);
  prof.U.assign(nodes, 0.0);
  for (size_t i = 0; i < nodes; ++i) prof.r[i] = static_cast<double>(i) * h;
  prof.U[nodes - 1] = b_mag;
  if (b_mag == 0.0) return prof;

  // grid continuation: the contact front moves at most a few cells per level,
  // so each refinement converges quickly
  int levels = 0;
  while ((nodes - 1) % (static_cast<size_t>(1) << (levels + 1)) == 0 &&
         (static_cast<double>(nodes - 1) / (1 << (levels + 1))) >= 96.0)
    ++levels;
  std::vector<double> u;
  for (int lev = levels; lev >= 0; --lev) {
    const auto step = static_cast<size_t>(1) << static_cast<size_t>(lev);
    const size_t count = (nodes - 1) / step + 1;
    std::vector<double> init(count, 0.0);
    if (u.empty()) {
      init[count - 1] = b_mag;
    } else {
      // linear interpolation from the previous (coarser) level
      for (size_t i = 0; i < count; ++i) {
        const size_t j = i / 2;
        init[i] = (i % 2 == 0) ? u[j] : 0.5 * (u[j] + u[std::min(j + 1, u.size() - 1)]);
      }
      init[count - 1] = b_mag;
    }
    u = radial_solve_level(N, n, R, b_mag, h * static_cast<double>(step), std::move(init));
  }
  prof.U = u;
  return prof;
}

}  // namespace fbreg
