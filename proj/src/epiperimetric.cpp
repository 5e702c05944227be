#include "fbreg/epiperimetric.hpp"

#include <cmath>
#include <random>

namespace fbreg {

VecM ConeTrace::value(double theta) const {
  if (closure) return closure(theta);
  const double t = theta / (2.0 * M_PI) * N;
  const auto j0 = static_cast<std::int64_t>(std::floor(t));
  const double x = t - static_cast<double>(j0);
  auto wrap = [this](std::int64_t j) {
    j %= N;
    if (j < 0) j += N;
    return static_cast<size_t>(j);
  };
  VecM out(m);
  for (int c = 0; c < m; ++c) {
    const double pm1 = samples[wrap(j0 - 1) * static_cast<size_t>(m) + static_cast<size_t>(c)];
    const double p0 = samples[wrap(j0) * static_cast<size_t>(m) + static_cast<size_t>(c)];
    const double p1 = samples[wrap(j0 + 1) * static_cast<size_t>(m) + static_cast<size_t>(c)];
    const double p2 = samples[wrap(j0 + 2) * static_cast<size_t>(m) + static_cast<size_t>(c)];
    out[c] = 0.5 * ((2.0 * p0) + (-pm1 + p1) * x + (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * x * x +
                    (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * x * x * x);
  }
  return out;
}

VecM ConeTrace::dvalue(double theta) const {
  if (closure_deriv) return closure_deriv(theta);
  const double dt = 2.0 * M_PI / N;
  const VecM a = value(theta - dt);
  const VecM b = value(theta + dt);
  VecM out(m);
  for (int c = 0; c < m; ++c) out[c] = (b[c] - a[c]) / (2.0 * dt);
  return out;
}

ConeTrace trace_of_halfspace(const HalfSpaceSolution& h, int m, int N) {
  if (h.n != 2) throw InputError("trace_of_halfspace: cone traces are 2-D");
  ConeTrace c;
  c.m = m;
  c.N = N;
  c.seeded_h = h;
  c.has_seed = true;
  const double nux = h.nu[0], nuy = h.nu[1];
  const double f0 = h.f0;
  VecM e(m);
  for (int i = 0; i < std::min(m, h.e.m); ++i) e[i] = h.e[i];
  c.closure = [nux, nuy, f0, e, m](double th) {
    const double t = std::max(std::cos(th) * nux + std::sin(th) * nuy, 0.0);
    return (f0 * t * t / 2.0) * e;
  };
  c.closure_deriv = [nux, nuy, f0, e, m](double th) {
    const double t = std::cos(th) * nux + std::sin(th) * nuy;
    const double dt = -std::sin(th) * nux + std::cos(th) * nuy;
    const double d = (t > 0) ? f0 * t * dt : 0.0;
    return d * e;
  };
  c.samples.assign(static_cast<size_t>(N) * static_cast<size_t>(m), 0.0);
  for (int j = 0; j < N; ++j) {
    const VecM v = c.closure(2.0 * M_PI * j / N);
    for (int cc = 0; cc < m; ++cc)
      c.samples[static_cast<size_t>(j * m + cc)] = v[cc];
  }
  return c;
}

PolarField cone_from_trace(const ConeTrace& c, int N_rad, int N_theta) {
  for (double v : c.samples)
    if (!std::isfinite(v)) throw InputError("cone_from_trace: non-finite trace");
  FieldProbe probe;
  probe.n = 2;
  probe.m = c.m;
  probe.value = [&c](const Point& x) {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    const double th = std::atan2(x[1], x[0]);
    return rho2 * c.value(th);
  };
  probe.gradient = [&c](const Point& x, double* g) {
    const double rho = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    const double th = std::atan2(x[1], x[0]);
    const VecM cv = c.value(th);
    const VecM cd = c.dvalue(th);
    const double ct = std::cos(th), st = std::sin(th);
    for (int cc = 0; cc < c.m; ++cc) {
      // grad(rho^2 c) = 2 rho c e_rho + rho c' e_theta
      g[cc * 2 + 0] = 2.0 * rho * cv[cc] * ct - rho * cd[cc] * st;
      g[cc * 2 + 1] = 2.0 * rho * cv[cc] * st + rho * cd[cc] * ct;
    }
  };
  return polar_from_probe(probe, N_rad, N_theta);
}

ConeTrace sample_cone_near_halfspace(double delta, int K, std::uint64_t seed, int m, double f0,
                                     int N) {
  if (!(delta >= 0) || K < 1) throw InputError("sample_cone_near_halfspace: delta >= 0, K >= 1");
  const HalfSpaceSolution h(2, Point{0, 1, 0}, [&] {
    VecM e(m);
    e[0] = 1;
    return e;
  }(), f0);
  ConeTrace base = trace_of_halfspace(h, m, N);
  if (delta == 0.0) return base;

  // random harmonic coefficients, W^{1,2}(dB1)-normalized:
  // |w|^2 = sum (a^2 + b^2) pi (1 + k^2)
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> ac(static_cast<size_t>(K * m)), bc(static_cast<size_t>(K * m));
  double norm2 = 0;
  for (int k = 1; k <= K; ++k)
    for (int c = 0; c < m; ++c) {
      const auto i = static_cast<size_t>((k - 1) * m + c);
      ac[i] = gauss(rng);
      bc[i] = gauss(rng);
      norm2 += (ac[i] * ac[i] + bc[i] * bc[i]) * M_PI * (1.0 + k * k);
    }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : ac) v *= scale;
  for (auto& v : bc) v *= scale;

  ConeTrace c = base;
  auto base_val = base.closure;
  auto base_der = base.closure_deriv;
  c.closure = [base_val, ac, bc, K, m, delta](double th) {
    VecM out = base_val(th);
    for (int k = 1; k <= K; ++k)
      for (int cc = 0; cc < m; ++cc) {
        const auto i = static_cast<size_t>((k - 1) * m + cc);
        out[cc] += delta * (ac[i] * std::cos(k * th) + bc[i] * std::sin(k * th));
      }
    return out;
  };
  c.closure_deriv = [base_der, ac, bc, K, m, delta](double th) {
    VecM out = base_der(th);
    for (int k = 1; k <= K; ++k)
      for (int cc = 0; cc < m; ++cc) {
        const auto i = static_cast<size_t>((k - 1) * m + cc);
        out[cc] += delta * k * (-ac[i] * std::sin(k * th) + bc[i] * std::cos(k * th));
      }
    return out;
  };
  double winf = 0;
  for (int j = 0; j < N; ++j) {
    const double th = 2.0 * M_PI * j / N;
    const VecM v = c.closure(th);
    for (int cc = 0; cc < m; ++cc)
      c.samples[static_cast<size_t>(j * m + cc)] = v[cc];
    double w2 = 0;
    for (int k = 1; k <= K; ++k)
      for (int cc = 0; cc < m; ++cc) {
        const auto i = static_cast<size_t>((k - 1) * m + cc);
        const double w = ac[i] * std::cos(k * th) + bc[i] * std::sin(k * th);
        w2 += w * w;
      }
    winf = std::max(winf, std::sqrt(w2));
  }
  c.delta_W = delta;
  c.delta_inf = delta * winf;
  return c;
}

namespace {

// Samples the 2-homogeneous extension of the trace on a covering grid.
VectorField cone_on_grid(const ConeTrace& c, double grid_h) {
  const double half = 1.0 + 4.0 * grid_h;
  Grid g = make_centered_grid(2, half, grid_h);
  VectorField u(g, c.m);
  u.mask_outside_ball(Point{0, 0, 0}, 1.0);
  const auto count = g.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    const Point x = g.coords(g.unindex(k));
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    const double th = std::atan2(x[1], x[0]);
    const VecM v = rho2 > 0 ? rho2 * c.value(th) : VecM(c.m);
    double* p = u.at(k);
    for (int cc = 0; cc < c.m; ++cc) p[cc] = v[cc];
  }
  return u;
}

}  // namespace

CompetitorResult competitor(const ConeTrace& c, const Nonlinearity& N, double s, double grid_h,
                            const SolveOptions& opts) {
  if (!(s > 0) || s > 1.0) throw InputError("competitor: s in (0, 1]");
  const Nonlinearity Ns = N.rescaled(s);
  VectorField cone = cone_on_grid(c, grid_h);
  const double E_cone = discrete_energy(cone, Ns);
  SolveOptions so = opts;
  so.acceleration = true;  // restart keeps the energy chain nonincreasing
  auto [v, stats] = minimize(cone, Ns, so);
  const double E_v = discrete_energy(v, Ns);
  CompetitorResult out{std::move(v), E_cone - E_v, E_cone, std::move(stats)};
  if (out.energy_gain < 0) {
    if (out.energy_gain < -1e-10 * (1.0 + std::abs(E_cone)))
      throw NumericError("competitor: energy increased, quadrature anomaly");
    out.energy_gain = 0.0;  // descent exact up to rounding of the energy sum
  }
  return out;
}

EpiResult kappa_estimate(const ConeTrace& c, const Nonlinearity& N, double s, double grid_h) {
  EpiResult out;
  out.s = s;

  const PolarField cone_polar = cone_from_trace(c);
  out.H_c = functional_H(cone_polar, N, s);
  out.M_c = functional_M(cone_polar, N.f0());

  out.projection = project_to_halfspace(cone_polar, N.f0());
  const HalfSpaceSolution hstar(2, out.projection.nu, out.projection.e, N.f0());
  const ConeTrace htrace = trace_of_halfspace(hstar, c.m);
  const PolarField h_polar = cone_from_trace(htrace);
  out.M_h = functional_M(h_polar, N.f0());

  // distances of c to its projection on the circle
  {
    double w2 = 0, winf = 0;
    const int NN = c.N;
    for (int j = 0; j < NN; ++j) {
      const double th = 2.0 * M_PI * j / NN;
      const VecM d = c.value(th) - htrace.value(th);
      const VecM dd = c.dvalue(th) - htrace.dvalue(th);
      w2 += (d.norm2() + dd.norm2()) * (2.0 * M_PI / NN);
      winf = std::max(winf, d.norm());
    }
    out.delta_W = std::sqrt(w2);
    out.delta_inf = winf;
  }

  const CompetitorResult comp = competitor(c, N, s, grid_h);
  out.H_v = out.H_c - comp.energy_gain;

  out.denominator = out.H_c - out.M_h;
  if (out.denominator <= kEpsDenominator) {
    out.kappa_defined = false;
    out.flag = "denominator below eps_den (cone at the half-space energy level)";
    return out;
  }
  out.kappa_defined = true;
  out.kappa_best = comp.energy_gain / out.denominator;
  if (out.kappa_best < 0) out.flag = "negative kappa: quadrature anomaly";
  return out;
}

EpiScan batch_scan(const std::vector<double>& deltas, const std::vector<double>& s_values, int K,
                   int seeds, const std::vector<Nonlinearity>& families, int m, double grid_h,
                   std::uint64_t seed_offset) {
  EpiScan scan;
  scan.min_kappa = std::numeric_limits<double>::infinity();
  scan.min_M_cone = std::numeric_limits<double>::infinity();
  std::uint64_t seed_base = seed_offset;
  for (const Nonlinearity& N : families) {
    for (double delta : deltas) {
      for (double s : s_values) {
        for (int sd = 0; sd < seeds; ++sd) {
          EpiScanRow row;
          row.delta = delta;
          row.s = s;
          row.seed = seed_base + static_cast<std::uint64_t>(sd);
          row.family = family_name(N.family);
          try {
            const ConeTrace c = sample_cone_near_halfspace(delta, K, row.seed, m, N.f0());
            row.result = kappa_estimate(c, N, s, grid_h);
            scan.min_M_cone = std::min(scan.min_M_cone, row.result.M_c);
            if (row.result.kappa_defined) {
              ++scan.defined_rows;
              if (row.result.kappa_best < scan.min_kappa) {
                scan.min_kappa = row.result.kappa_best;
                scan.argmin_row = static_cast<int>(scan.rows.size());
              }
            }
          } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
          }
          scan.rows.push_back(std::move(row));
        }
        seed_base += 1000;
      }
    }
  }
  return scan;
}

}  // namespace fbreg
