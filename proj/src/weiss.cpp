#include "fbreg/weiss.hpp"

#include <cmath>

#include "fbreg/threads.hpp"

namespace fbreg {

double alpha_n(int n, double f0) {
  if (n < 1 || !(f0 > 0)) throw InputError("alpha_n: need n >= 1 and f0 > 0");
  return f0 * f0 * unit_ball_volume(n) / (2.0 * (n + 2));
}

namespace {

struct BallTerms {
  double volume = 0;   // int (|grad u|^2 + F(|u|))
  double surface = 0;  // int_{dB_r} |u|^2
  double t1 = 0;       // int_{dB_r} |grad u . nu - 2u/r|^2
  double t2 = 0;       // int (F'(|u|)|u| - F(|u|))
};

BallTerms ball_terms(const FieldProbe& u, const Nonlinearity& N, const BallQuadrature& Q) {
  BallTerms out;
  const int m = u.m, n = u.n;
  std::vector<double> g(static_cast<size_t>(m * n));
  const auto vq = Q.volume_size();
  for (std::int64_t q = 0; q < vq; ++q) {
    const Point x = Q.volume_node(q);
    const VecM val = u.value(x);
    u.gradient(x, g.data());
    double grad2 = 0;
    for (int c = 0; c < m * n; ++c) grad2 += g[static_cast<size_t>(c)] * g[static_cast<size_t>(c)];
    const double s = val.norm();
    const double w = Q.volume_weight(q);
    out.volume += w * (grad2 + N.F(s));
    out.t2 += w * (s > 0 ? N.dF(s) * s - N.F(s) : 0.0);
  }
  for (int j = 0; j < Q.ang.size(); ++j) {
    const Point x = Q.surface_node(j);
    const VecM val = u.value(x);
    u.gradient(x, g.data());
    const double w = Q.surface_weight(j);
    out.surface += w * val.norm2();
    double t1 = 0;
    for (int c = 0; c < m; ++c) {
      double dn = 0;
      for (int a = 0; a < n; ++a)
        dn += g[static_cast<size_t>(c * n + a)] * Q.ang.dirs[static_cast<size_t>(j)][static_cast<size_t>(a)];
      const double d = dn - 2.0 * val[c] / Q.r;
      t1 += d * d;
    }
    out.t1 += w * t1;
  }
  return out;
}

}  // namespace

double weiss_energy(const FieldProbe& u, const Nonlinearity& N, const BallQuadrature& Q) {
  const BallTerms t = ball_terms(u, N, Q);
  const int n = u.n;
  return t.volume / std::pow(Q.r, n + 2) - 2.0 * t.surface / std::pow(Q.r, n + 3);
}

double weiss_energy(const VectorField& u, const Nonlinearity& N, const Point& x0, double r) {
  const BallQuadrature Q = ball_quadrature(u.grid, x0, r);
  const FieldProbe p = probe_of(u);
  return weiss_energy(p, N, Q);
}

double functional_H(const PolarField& v, const Nonlinearity& N, double s) {
  if (!(s > 0)) throw InputError("functional_H: s > 0");
  const Nonlinearity Ns = N.rescaled(s);
  const double vol = v.volume_integral([&](int i, int j) {
    const double* g = v.grad_at(i, j);
    double grad2 = 0;
    for (int c = 0; c < v.m * v.n; ++c) grad2 += g[c] * g[c];
    return grad2 + Ns.F(v.norm_at(i, j));
  });
  const double surf = v.surface_integral([&](int j) {
    const double* t = v.trace.data() + static_cast<std::int64_t>(j) * v.m;
    double s2 = 0;
    for (int c = 0; c < v.m; ++c) s2 += t[c] * t[c];
    return s2;
  });
  return vol - 2.0 * surf;
}

double functional_M(const PolarField& v, double f0) {
  const double vol = v.volume_integral([&](int i, int j) {
    const double* g = v.grad_at(i, j);
    double grad2 = 0;
    for (int c = 0; c < v.m * v.n; ++c) grad2 += g[c] * g[c];
    return grad2 + 2.0 * f0 * v.norm_at(i, j);
  });
  const double surf = v.surface_integral([&](int j) {
    const double* t = v.trace.data() + static_cast<std::int64_t>(j) * v.m;
    double s2 = 0;
    for (int c = 0; c < v.m; ++c) s2 += t[c] * t[c];
    return s2;
  });
  return vol - 2.0 * surf;
}

WeissReport monotonicity_audit(const VectorField& u, const Nonlinearity& N, const Point& x0,
                               const std::vector<double>& radii, double tol_mono_scale) {
  if (radii.size() < 6) throw InputError("monotonicity_audit: need >= 6 radii");
  for (size_t j = 0; j + 1 < radii.size(); ++j)
    if (!(radii[j] < radii[j + 1])) throw InputError("monotonicity_audit: radii must increase");
  for (double r : radii)
    if (r < 8.0 * u.grid.h - 1e-12)
      throw DomainError("monotonicity_audit: radius below the 8h floor");

  WeissReport rep;
  rep.x0 = x0;
  rep.r = radii;
  rep.tol_mono_scale = tol_mono_scale;
  const int n = u.grid.n;
  const FieldProbe p = probe_of(u);
  rep.W.resize(radii.size());
  rep.T1.resize(radii.size());
  rep.T2.resize(radii.size());
  for (size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    const BallQuadrature Q = ball_quadrature(u.grid, x0, r);
    const BallTerms t = ball_terms(p, N, Q);
    rep.W[j] = t.volume / std::pow(r, n + 2) - 2.0 * t.surface / std::pow(r, n + 3);
    rep.T1[j] = 2.0 * t.t1 / std::pow(r, n + 2);
    rep.T2[j] = 2.0 * t.t2 / std::pow(r, n + 3);
  }
  // nonuniform centered differences, one-sided at the ends
  rep.dWdr.resize(radii.size());
  const auto k = radii.size();
  for (size_t j = 0; j < k; ++j) {
    if (j == 0) {
      rep.dWdr[j] = (rep.W[1] - rep.W[0]) / (radii[1] - radii[0]);
    } else if (j + 1 == k) {
      rep.dWdr[j] = (rep.W[k - 1] - rep.W[k - 2]) / (radii[k - 1] - radii[k - 2]);
    } else {
      const double r0 = radii[j - 1], r1 = radii[j], r2 = radii[j + 1];
      rep.dWdr[j] = rep.W[j - 1] * (r1 - r2) / ((r0 - r1) * (r0 - r2)) +
                    rep.W[j] * (2 * r1 - r0 - r2) / ((r1 - r0) * (r1 - r2)) +
                    rep.W[j + 1] * (r1 - r0) / ((r2 - r0) * (r2 - r1));
    }
  }
  for (size_t j = 0; j < k; ++j) {
    const double tol = tol_mono_scale * (1.0 + std::abs(rep.W[j]));
    if (rep.dWdr[j] < -tol) rep.violations.push_back(static_cast<int>(j));
  }
  const DensityFit fit = density_limit(rep.r, rep.W);
  rep.W0_estimate = fit.W0;
  rep.fit_exponent = fit.exponent;
  rep.fit_residual = fit.residual;
  rep.fit_low_confidence = fit.low_confidence;
  return rep;
}

DensityFit density_limit(const std::vector<double>& r, const std::vector<double>& W) {
  if (r.size() < 6 || r.size() != W.size())
    throw InputError("density_limit: need >= 6 matching (r, W) samples");
  const auto k = r.size();
  // linear LSQ in (W0, A) for fixed alpha; returns (rms, W0, A)
  auto solve_for = [&](double alpha) {
    double s11 = static_cast<double>(k), s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (size_t j = 0; j < k; ++j) {
      const double phi = std::pow(r[j], alpha);
      s12 += phi;
      s22 += phi * phi;
      b1 += W[j];
      b2 += W[j] * phi;
    }
    const double det = s11 * s22 - s12 * s12;
    double W0, A;
    if (std::abs(det) < 1e-300) {
      W0 = b1 / s11;
      A = 0;
    } else {
      W0 = (b1 * s22 - b2 * s12) / det;
      A = (s11 * b2 - s12 * b1) / det;
    }
    double rss = 0;
    for (size_t j = 0; j < k; ++j) {
      const double e = W[j] - (W0 + A * std::pow(r[j], alpha));
      rss += e * e;
    }
    return std::array<double, 3>{std::sqrt(rss / static_cast<double>(k)), W0, A};
  };
  double lo = 0.1, hi = 6.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = solve_for(x1)[0], f2 = solve_for(x2)[0];
  for (int it = 0; it < 80; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = solve_for(x1)[0];
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = solve_for(x2)[0];
    }
  }
  const double alpha = 0.5 * (lo + hi);
  const auto sol = solve_for(alpha);
  DensityFit fit;
  fit.W0 = sol[1];
  fit.exponent = alpha;
  fit.residual = sol[0];
  fit.low_confidence = sol[0] > 1e-3 * (1.0 + std::abs(sol[1]));
  return fit;
}

DensityFit density_limit(const WeissReport& report) { return density_limit(report.r, report.W); }

const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::Trivial: return "Trivial";
    case PointClass::Regular: return "Regular";
    case PointClass::NonRegular: return "NonRegular";
  }
  return "?";
}

PointClass classify_from_density(double W0, double alpha, double tau_class) {
  if (W0 <= tau_class * alpha) return PointClass::Trivial;
  if (std::abs(W0 - 0.5 * alpha) <= tau_class * alpha) return PointClass::Regular;
  return PointClass::NonRegular;
}

Classification classify_point(const VectorField& u, const Nonlinearity& N, const Point& x0,
                              const std::vector<double>& radii, double tau_class,
                              double theta_grad) {
  const double f0 = N.f0();
  if (theta_grad <= 0) theta_grad = f0 * u.grid.h;
  std::vector<double> g(static_cast<size_t>(u.m * u.grid.n));
  gradient_at(u, x0, g.data());
  double gn = 0;
  for (double v : g) gn += v * v;
  if (std::sqrt(gn) > theta_grad)
    throw InputError("classify_point: |grad u(x0)| exceeds theta_grad (not a Gamma_0 candidate)");
  const WeissReport rep = monotonicity_audit(u, N, x0, radii);
  Classification out;
  out.W0 = rep.W0_estimate;
  out.exponent = rep.fit_exponent;
  out.residual = rep.fit_residual;
  out.low_confidence = rep.fit_low_confidence;
  out.cls = classify_from_density(out.W0, alpha_n(u.grid.n, f0), tau_class);
  return out;
}

TestVectorField radial_bump_xi(int n, const Point& center, double R, double amp) {
  TestVectorField xi;
  xi.n = n;
  xi.eval = [n, center, R, amp](const Point& x, double* val, double* jac) {
    double r2 = 0;
    Point d{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      d[static_cast<size_t>(a)] = x[static_cast<size_t>(a)] - center[static_cast<size_t>(a)];
      r2 += d[static_cast<size_t>(a)] * d[static_cast<size_t>(a)];
    }
    const double t2 = r2 / (R * R);
    if (t2 >= 1.0) {
      for (int i = 0; i < n; ++i) val[i] = 0;
      for (int i = 0; i < n * n; ++i) jac[i] = 0;
      return;
    }
    const double eta = std::pow(1.0 - t2, 3);
    // d eta / d x_i = -6 (1 - t2)^2 d_i / R^2
    const double deta = -6.0 * std::pow(1.0 - t2, 2) / (R * R);
    for (int j = 0; j < n; ++j) val[j] = amp * eta * d[static_cast<size_t>(j)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        jac[i * n + j] = amp * (eta * (i == j ? 1.0 : 0.0) +
                                deta * d[static_cast<size_t>(i)] * d[static_cast<size_t>(j)]);
  };
  return xi;
}

double domain_variation_residual(const VectorField& u, const Nonlinearity& N,
                                 const TestVectorField& xi) {
  const Grid& g = u.grid;
  const int n = g.n, m = u.m;
  // support must stay away from the hull: probe the 2h ring
  {
    std::vector<double> val(static_cast<size_t>(n)), jac(static_cast<size_t>(n * n));
    const auto count = g.node_count();
    for (std::int64_t k = 0; k < count; ++k) {
      const auto idx = g.unindex(k);
      bool ring = false;
      for (int a = 0; a < n; ++a)
        if (idx[static_cast<size_t>(a)] < 2 ||
            idx[static_cast<size_t>(a)] + 3 > g.dims[static_cast<size_t>(a)])
          ring = true;
      if (!ring) continue;
      xi.eval(g.coords(idx), val.data(), jac.data());
      for (int a = 0; a < n; ++a)
        if (val[static_cast<size_t>(a)] != 0.0)
          throw DomainError("domain_variation_residual: xi support touches the hull");
    }
  }
  const double wn = std::pow(g.h, n);
  const auto count = static_cast<std::size_t>(g.node_count());
  const double total = block_sum(count, [&](std::size_t k) {
    const auto node = static_cast<std::int64_t>(k);
    const auto idx = g.unindex(node);
    for (int a = 0; a < n; ++a)
      if (idx[static_cast<size_t>(a)] == 0 ||
          idx[static_cast<size_t>(a)] + 1 == g.dims[static_cast<size_t>(a)])
        return 0.0;
    double val[3], jac[9];
    const Point x = g.coords(idx);
    xi.eval(x, val, jac);
    double div = 0;
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      div += jac[i * n + i];
      for (int j = 0; j < n; ++j) zero = zero && jac[i * n + j] == 0.0;
      zero = zero && val[i] == 0.0;
    }
    if (zero) return 0.0;
    // nodal centered gradient
    double grad[kMaxCodim][3];
    const auto st = [&] {
      std::array<std::int64_t, 3> s{0, 0, 0};
      std::int64_t acc = 1;
      for (int a = n - 1; a >= 0; --a) {
        s[static_cast<size_t>(a)] = acc;
        acc *= g.dims[static_cast<size_t>(a)];
      }
      return s;
    }();
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < n; ++a) {
        const double up = u.at(node + st[static_cast<size_t>(a)])[c];
        const double dn = u.at(node - st[static_cast<size_t>(a)])[c];
        grad[c][a] = (up - dn) / (2.0 * g.h);
      }
    double grad2 = 0, middle = 0;
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < n; ++i) {
        grad2 += grad[c][i] * grad[c][i];
        for (int j = 0; j < n; ++j) middle += grad[c][i] * jac[i * n + j] * grad[c][j];
      }
    const double Fv = N.F(u.norm_at(node));
    return wn * (grad2 * div - 2.0 * middle + Fv * div);
  });
  return std::abs(total);
}

std::vector<double> radii_ladder(double r_min, int count) {
  if (!(r_min > 0) || count < 1) throw InputError("radii_ladder: r_min > 0, count >= 1");
  std::vector<double> r(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) r[static_cast<size_t>(j)] = r_min * std::pow(2.0, 0.5 * j);
  return r;
}

}  // namespace fbreg
