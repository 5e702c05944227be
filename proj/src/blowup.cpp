#include "fbreg/blowup.hpp"

#include <algorithm>
#include <cmath>

namespace fbreg {

BlowupField rescale(const FieldProbe& u, const Grid& g, const Point& x0, double r, int N_rad,
                    int N_theta) {
  for (int a = 0; a < g.n; ++a) {
    if (x0[static_cast<size_t>(a)] - r - 2 * g.h < g.hull_min(a) ||
        x0[static_cast<size_t>(a)] + r + 2 * g.h > g.hull_max(a))
      throw DomainError("rescale: B_{r+2h}(x0) not inside the grid hull");
  }
  BlowupField out;
  out.polar = polar_blowup(u, x0, r, N_rad, N_theta);
  out.x0 = x0;
  out.r = r;
  out.m = u.m;
  return out;
}

BlowupField rescale(const VectorField& u, const Point& x0, double r, int N_rad, int N_theta) {
  const FieldProbe p = probe_of(u);
  return rescale(p, u.grid, x0, r, N_rad, N_theta);
}

double homogeneity_defect(const PolarField& v) {
  if (v.nrad() < 8) throw InputError("homogeneity_defect: need >= 8 radial nodes");
  const double num = v.volume_integral([&](int i, int j) {
    const double* val = v.value_at(i, j);
    const double* g = v.grad_at(i, j);
    const Point x = v.node(i, j);
    double s = 0;
    for (int c = 0; c < v.m; ++c) {
      double radial = 0;
      for (int a = 0; a < v.n; ++a) radial += x[static_cast<size_t>(a)] * g[c * v.n + a];
      const double d = radial - 2.0 * val[c];
      s += d * d;
    }
    return std::sqrt(s);
  });
  const double den = v.volume_integral([&](int i, int j) { return v.norm_at(i, j); });
  return num / std::max(1.0, den);
}

namespace {

struct DirectionScore {
  double best_corr = 0;  // int (v.e) q over the sphere, maximized over e
  VecM e;
  double amplitude_free = 0;
  double res2_constrained = 0, res2_free = 0;
};

// For a fixed direction nu: e = normalized int v p, p = max(x.nu, 0)^2.
DirectionScore score_direction(const AngularRule& ang, const std::vector<double>& trace, int m,
                               double f0, const Point& nu, double v_norm2) {
  DirectionScore out;
  out.e = VecM(m);
  VecM w(m);
  double p2 = 0;
  for (int j = 0; j < ang.size(); ++j) {
    const double t = std::max(dotn(ang.dirs[static_cast<size_t>(j)], nu, ang.n), 0.0);
    const double p = t * t;
    const double wj = ang.w[static_cast<size_t>(j)];
    p2 += wj * p * p;
    const double* tv = trace.data() + static_cast<std::int64_t>(j) * m;
    for (int c = 0; c < m; ++c) w[c] += wj * tv[c] * p;
  }
  const double wn = w.norm();
  if (wn < 1e-300 || p2 < 1e-300) {
    out.res2_constrained = v_norm2;
    out.res2_free = v_norm2;
    return out;
  }
  for (int c = 0; c < m; ++c) out.e[c] = w[c] / wn;
  const double q = f0 / 2.0;
  // |v - q p e|^2 = |v|^2 - 2 q <v.e, p> + q^2 |p|^2 with <v.e, p> = |w|
  out.best_corr = wn;
  out.res2_constrained = v_norm2 - 2.0 * q * wn + q * q * p2;
  out.amplitude_free = wn / p2;
  out.res2_free = v_norm2 - wn * wn / p2;
  return out;
}

std::vector<Point> fibonacci_sphere(int count) {
  std::vector<Point> dirs;
  dirs.reserve(static_cast<size_t>(count));
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = ga * i;
    dirs.push_back(Point{rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return dirs;
}

}  // namespace

HalfSpaceProjection project_to_halfspace(const AngularRule& ang,
                                         const std::vector<double>& trace, int m, double f0) {
  double v_norm2 = 0;
  for (int j = 0; j < ang.size(); ++j) {
    const double* tv = trace.data() + static_cast<std::int64_t>(j) * m;
    double s = 0;
    for (int c = 0; c < m; ++c) s += tv[c] * tv[c];
    v_norm2 += ang.w[static_cast<size_t>(j)] * s;
  }
  if (v_norm2 <= 0) throw InputError("project_to_halfspace: projection of the zero field is undefined");

  const int n = ang.n;
  Point best_nu{0, 1, 0};
  DirectionScore best;
  double best_res = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& nu) {
    const DirectionScore s = score_direction(ang, trace, m, f0, nu, v_norm2);
    if (s.res2_free < best_res) {
      best_res = s.res2_free;
      best = s;
      best_nu = nu;
    }
  };
  if (n == 2) {
    const int coarse = 720;
    for (int i = 0; i < coarse; ++i) {
      const double th = 2.0 * M_PI * i / coarse;
      consider(Point{std::cos(th), std::sin(th), 0});
    }
    // golden-section refinement on the angle
    double th0 = std::atan2(best_nu[1], best_nu[0]);
    double lo = th0 - 2.0 * M_PI / coarse, hi = th0 + 2.0 * M_PI / coarse;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    auto res_at = [&](double th) {
      return score_direction(ang, trace, m, f0, Point{std::cos(th), std::sin(th), 0}, v_norm2)
          .res2_free;
    };
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = res_at(x1), f2 = res_at(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = res_at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = res_at(x2);
      }
    }
    consider(Point{std::cos(0.5 * (lo + hi)), std::sin(0.5 * (lo + hi)), 0});
  } else if (n == 3) {
    for (const Point& d : fibonacci_sphere(1024)) consider(d);
    // local shrink-and-poll refinement around the best direction
    double eps = 0.06;
    for (int round = 0; round < 24; ++round) {
      const Point c = best_nu;
      // tangent frame
      Point t1{-c[1], c[0], 0};
      double t1n = norm_n(t1, 3);
      if (t1n < 1e-8) {
        t1 = Point{0, -c[2], c[1]};
        t1n = norm_n(t1, 3);
      }
      for (int a = 0; a < 3; ++a) t1[static_cast<size_t>(a)] /= t1n;
      const Point t2{c[1] * t1[2] - c[2] * t1[1], c[2] * t1[0] - c[0] * t1[2],
                     c[0] * t1[1] - c[1] * t1[0]};
      for (int k = 0; k < 8; ++k) {
        const double a = 2.0 * M_PI * k / 8;
        Point d;
        double dn = 0;
        for (int ax = 0; ax < 3; ++ax) {
          d[static_cast<size_t>(ax)] = c[static_cast<size_t>(ax)] +
                                       eps * (std::cos(a) * t1[static_cast<size_t>(ax)] +
                                              std::sin(a) * t2[static_cast<size_t>(ax)]);
          dn += d[static_cast<size_t>(ax)] * d[static_cast<size_t>(ax)];
        }
        dn = std::sqrt(dn);
        for (int ax = 0; ax < 3; ++ax) d[static_cast<size_t>(ax)] /= dn;
        consider(d);
      }
      eps *= 0.7;
    }
  } else {
    throw InputError("project_to_halfspace: n must be 2 or 3");
  }

  HalfSpaceProjection out;
  out.nu = best_nu;
  out.e = best.e;
  out.amplitude_free = best.amplitude_free;
  out.residual_constrained = std::sqrt(std::max(0.0, best.res2_constrained));
  out.residual_free = std::sqrt(std::max(0.0, best.res2_free));
  if (out.e.m == 0) out.e = VecM(m);
  return out;
}

HalfSpaceProjection project_to_halfspace(const PolarField& v, double f0) {
  return project_to_halfspace(v.ang, v.trace, v.m, f0);
}

double sphere_l1_distance(const AngularRule& ang, const std::vector<double>& trace, int m,
                          const HalfSpaceSolution& H) {
  double total = 0;
  for (int j = 0; j < ang.size(); ++j) {
    Point x{0, 0, 0};
    for (int a = 0; a < ang.n; ++a)
      x[static_cast<size_t>(a)] = ang.dirs[static_cast<size_t>(j)][static_cast<size_t>(a)];
    const VecM hv = H.eval(x);
    const double* tv = trace.data() + static_cast<std::int64_t>(j) * m;
    double s = 0;
    for (int c = 0; c < m; ++c) {
      const double d = tv[c] - hv[c];
      s += d * d;
    }
    total += ang.w[static_cast<size_t>(j)] * std::sqrt(s);
  }
  return total;
}

DecayFit fit_decay(const std::vector<double>& radii, const std::vector<double>& G,
                   const std::vector<double>& d, int n) {
  auto slope = [](const std::vector<double>& r, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < r.size(); ++i) {
      if (y[i] > 0) {
        lx.push_back(std::log(r[i]));
        ly.push_back(std::log(y[i]));
      }
    }
    if (lx.size() < 3) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto k = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
  };
  DecayFit fit;
  fit.alpha_G = slope(radii, G);
  fit.alpha_L = slope(radii, d);
  fit.kappa_hat = fit.alpha_G / (n + 2 + fit.alpha_G);
  fit.consistency =
      (fit.alpha_L != 0) ? std::abs(fit.alpha_L - 0.5 * fit.alpha_G) / std::abs(fit.alpha_L) : 0;
  fit.decay_confirmed = fit.alpha_G > 0 && fit.alpha_L > 0;
  return fit;
}

DecayReport decay_measurement(const VectorField& u, const Nonlinearity& N, const Point& x0,
                              const std::vector<double>& radii, const HalfSpaceSolution* u0,
                              double tau_class) {
  if (radii.size() < 6) throw InputError("decay_measurement: need >= 6 radii");
  const double span = radii.back() / radii.front();
  if (span < std::pow(10.0, 1.5) - 1e-9)
    throw InputError("decay_measurement: ladder must span >= 1.5 decades");
  // one audit serves both the classification gate and the G(r) series
  {
    double g[kMaxCodim * 3];
    gradient_at(u, x0, g);
    double gn = 0;
    for (int c = 0; c < u.m * u.grid.n; ++c) gn += g[c] * g[c];
    if (std::sqrt(gn) > N.f0() * u.grid.h)
      throw InputError("decay_measurement: x0 is not a Gamma_0 candidate");
  }
  const WeissReport rep = monotonicity_audit(u, N, x0, radii);
  // rungs below ~24h carry interpolation bias amplified by the 1/r^{n+2}
  // scaling; the density fit and the exponent fits use the clean tail
  const double fit_floor = 24.0 * u.grid.h;
  std::vector<double> r_fit, W_fit;
  for (size_t j = 0; j < radii.size(); ++j)
    if (radii[j] >= fit_floor - 1e-12) {
      r_fit.push_back(radii[j]);
      W_fit.push_back(rep.W[j]);
    }
  const DensityFit dens =
      (r_fit.size() >= 6) ? density_limit(r_fit, W_fit) : density_limit(rep.r, rep.W);
  const PointClass cls = classify_from_density(dens.W0, alpha_n(u.grid.n, N.f0()), tau_class);
  if (cls != PointClass::Regular)
    throw InputError(std::string("decay_measurement: x0 classified ") + point_class_name(cls) +
                     ", audit refused");
  DecayReport out;
  out.radii = radii;
  out.W = rep.W;
  out.W0 = dens.W0;
  out.G.resize(radii.size());
  const double gtol = 1e-4 * (1.0 + std::abs(out.W0));
  double gmax = 0;
  for (size_t j = 0; j < radii.size(); ++j) {
    out.G[j] = rep.W[j] - out.W0;
    if (radii[j] < fit_floor) continue;
    gmax = std::max(gmax, std::abs(out.G[j]));
    if (out.G[j] < -10.0 * gtol) out.monotonicity_violation = true;
  }

  // reference half space: supplied, or the projection at the smallest radius
  const FieldProbe p = probe_of(u);
  HalfSpaceSolution ref = [&] {
    if (u0) return *u0;
    const BlowupField b = rescale(p, u.grid, x0, radii.front());
    const HalfSpaceProjection proj = project_to_halfspace(b.polar, N.f0());
    return HalfSpaceSolution(u.grid.n, proj.nu, proj.e, N.f0());
  }();

  out.d.resize(radii.size());
  for (size_t j = 0; j < radii.size(); ++j) {
    const BlowupField b = rescale(p, u.grid, x0, radii[j]);
    out.d[j] = sphere_l1_distance(b.polar.ang, b.polar.trace, b.m, ref);
  }
  out.reference = ref;

  if (gmax <= gtol) {
    out.already_homogeneous = true;
    out.fit = DecayFit{};
    return out;
  }
  // exponent fits on the clean tail only
  std::vector<double> rf, Gf, df;
  for (size_t j = 0; j < radii.size(); ++j) {
    if (radii[j] < fit_floor) continue;
    rf.push_back(radii[j]);
    Gf.push_back(out.G[j]);
    df.push_back(out.d[j]);
  }
  out.fit = fit_decay(rf, Gf, df, u.grid.n);
  return out;
}

}  // namespace fbreg
