#include "fbreg/freeboundary.hpp"

#include <algorithm>
#include <cmath>

namespace fbreg {

double default_theta_pos(double f0, double h) { return 1e-2 * f0 * h * h; }
double default_theta_grad(double f0, double h) { return f0 * h; }

namespace {

std::array<std::int64_t, 3> strides(const Grid& g) {
  std::array<std::int64_t, 3> s{0, 0, 0};
  std::int64_t acc = 1;
  for (int a = g.n - 1; a >= 0; --a) {
    s[static_cast<size_t>(a)] = acc;
    acc *= g.dims[static_cast<size_t>(a)];
  }
  return s;
}

double grad_norm_at(const VectorField& u, const Point& x) {
  double g[kMaxCodim * 3];
  gradient_at(u, x, g);
  double s = 0;
  for (int c = 0; c < u.m * u.grid.n; ++c) s += g[c] * g[c];
  return std::sqrt(s);
}

}  // namespace

FreeBoundarySet extract(const VectorField& u, double theta_pos, double theta_grad) {
  if (!(theta_pos > 0)) throw InputError("extract: theta_pos must be > 0");
  const Grid& g = u.grid;
  FreeBoundarySet fb;
  fb.theta_pos = theta_pos;
  fb.theta_grad = theta_grad;
  const auto st = strides(g);
  const auto count = g.node_count();
  std::vector<double> mag(static_cast<size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) mag[static_cast<size_t>(k)] = u.norm_at(k);

  // edge crossings of |u| = theta_pos, linear along each grid edge
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = g.unindex(k);
    const double a = mag[static_cast<size_t>(k)] - theta_pos;
    for (int ax = 0; ax < g.n; ++ax) {
      if (idx[static_cast<size_t>(ax)] + 1 >= g.dims[static_cast<size_t>(ax)]) continue;
      const double b = mag[static_cast<size_t>(k + st[static_cast<size_t>(ax)])] - theta_pos;
      if ((a > 0) == (b > 0)) continue;
      if (a == b) continue;
      const double t = a / (a - b);
      Point x = g.coords(idx);
      x[static_cast<size_t>(ax)] += t * g.h;
      FreeBoundaryPoint p;
      p.x = x;
      // classification needs the interpolated gradient; points too close to
      // the hull for the stencil are tagged Gamma_1 conservatively
      bool ok = true;
      for (int a2 = 0; a2 < g.n; ++a2)
        if (x[static_cast<size_t>(a2)] < g.hull_min(a2) + g.h ||
            x[static_cast<size_t>(a2)] > g.hull_max(a2) - g.h)
          ok = false;
      p.grad_norm = ok ? grad_norm_at(u, x) : theta_grad;
      p.degenerate = p.grad_norm < theta_grad;
      fb.points.push_back(p);
    }
  }
  // deterministic order: sort by coordinates
  std::sort(fb.points.begin(), fb.points.end(), [](const FreeBoundaryPoint& l, const FreeBoundaryPoint& r) {
    if (l.x[0] != r.x[0]) return l.x[0] < r.x[0];
    if (l.x[1] != r.x[1]) return l.x[1] < r.x[1];
    return l.x[2] < r.x[2];
  });
  return fb;
}

std::vector<NondegRow> nondegeneracy_audit(const VectorField& u, const Point& x0,
                                           const std::vector<double>& radii, double f0) {
  const Grid& g = u.grid;
  // closure-of-support precondition: some node of the cell containing x0 is positive
  {
    if (!g.contains(x0)) throw DomainError("nondegeneracy_audit: x0 outside hull");
    std::array<std::int64_t, 3> cell{0, 0, 0};
    for (int a = 0; a < g.n; ++a) {
      const double s = (x0[static_cast<size_t>(a)] - g.hull_min(a)) / g.h;
      cell[static_cast<size_t>(a)] =
          std::max<std::int64_t>(0, std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(s)),
                                                           g.dims[static_cast<size_t>(a)] - 2));
    }
    double best = 0;
    for (int corner = 0; corner < (1 << g.n); ++corner) {
      auto idx = cell;
      for (int a = 0; a < g.n; ++a) idx[static_cast<size_t>(a)] += (corner >> a) & 1;
      best = std::max(best, u.norm_at(g.index(idx)));
    }
    if (!(best > 0))
      throw InputError("nondegeneracy_audit: x0 is outside the closure of the support");
  }

  std::vector<NondegRow> rows;
  for (double r : radii) {
    const BallQuadrature Q = ball_quadrature(g, x0, r);
    double sup = 0;
    for (std::int64_t q = 0; q < Q.volume_size(); ++q)
      sup = std::max(sup, interpolate(u, Q.volume_node(q)).norm());
    for (int j = 0; j < Q.ang.size(); ++j)
      sup = std::max(sup, interpolate(u, Q.surface_node(j)).norm());
    // nodal samples inside the ball
    const auto count = g.node_count();
    for (std::int64_t k = 0; k < count; ++k) {
      const Point x = g.coords(g.unindex(k));
      double d2 = 0;
      for (int a = 0; a < g.n; ++a) {
        const double d = x[static_cast<size_t>(a)] - x0[static_cast<size_t>(a)];
        d2 += d * d;
      }
      if (d2 <= r * r) sup = std::max(sup, u.norm_at(k));
    }
    NondegRow row;
    row.r = r;
    row.sup = sup;
    row.bound = f0 * r * r / (2.0 * g.n);
    row.margin = sup - row.bound;
    const double slack = 0.05 * row.bound + f0 * g.h * g.h;
    row.flagged = row.margin < -slack;
    rows.push_back(row);
  }
  return rows;
}

GrowthFit growth_audit(const VectorField& u, const Point& x0, const std::vector<double>& radii) {
  const Grid& g = u.grid;
  GrowthFit fit;
  for (double r : radii) {
    if (r < 10.0 * g.h) continue;
    BallQuadrature Q;
    try {
      Q = ball_quadrature(g, x0, r);
    } catch (const DomainError&) {
      continue;
    }
    double su = 0, sg = 0;
    double grad[kMaxCodim * 3];
    for (std::int64_t q = 0; q < Q.volume_size(); ++q) {
      const Point x = Q.volume_node(q);
      su = std::max(su, interpolate(u, x).norm());
      gradient_at(u, x, grad);
      double g2 = 0;
      for (int c = 0; c < u.m * g.n; ++c) g2 += grad[c] * grad[c];
      sg = std::max(sg, std::sqrt(g2));
    }
    fit.r.push_back(r);
    fit.sup_u.push_back(su);
    fit.sup_grad.push_back(sg);
  }
  if (fit.r.size() < 4)
    throw InputError("growth_audit: fewer than 4 valid radii");
  auto loglog = [](const std::vector<double>& x, const std::vector<double>& y, double& slope,
                   double& c) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto k = static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      const double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-300));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    c = std::exp((sy - slope * sx) / k);
  };
  loglog(fit.r, fit.sup_u, fit.u_exponent, fit.u_constant);
  loglog(fit.r, fit.sup_grad, fit.grad_exponent, fit.grad_constant);
  return fit;
}

double l1_distance_ball(const VectorField& u, const HalfSpaceSolution& H, const Point& center,
                        double radius) {
  const Grid& g = u.grid;
  const double wn = std::pow(g.h, g.n);
  double total = 0;
  const auto count = g.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    const Point x = g.coords(g.unindex(k));
    double d2 = 0;
    for (int a = 0; a < g.n; ++a) {
      const double d = x[static_cast<size_t>(a)] - center[static_cast<size_t>(a)];
      d2 += d * d;
    }
    if (d2 > radius * radius) continue;
    total += wn * (u.vec_at(k) - H.eval(x)).norm();
  }
  return total;
}

SupportOffset support_offset(const VectorField& u, const HalfSpaceSolution& H, double epsilon,
                             double theta_pos) {
  const Grid& g = u.grid;
  for (int a = 0; a < g.n; ++a)
    if (g.hull_min(a) > -1.0 || g.hull_max(a) < 1.0)
      throw DomainError("support_offset: B_1 not contained in the grid");
  if (!(epsilon < 1.0)) throw InputError("support_offset: epsilon must be < 1");
  double minproj = std::numeric_limits<double>::infinity();
  const auto count = g.node_count();
  for (std::int64_t k = 0; k < count; ++k) {
    if (u.norm_at(k) <= theta_pos) continue;
    const Point x = g.coords(g.unindex(k));
    double r2 = 0;
    for (int a = 0; a < g.n; ++a) r2 += x[static_cast<size_t>(a)] * x[static_cast<size_t>(a)];
    if (r2 > 0.25) continue;
    minproj = std::min(minproj, dotn(x, H.nu, g.n));
  }
  SupportOffset out;
  out.epsilon = epsilon;
  out.d = std::isfinite(minproj) ? std::max(0.0, -minproj) : 0.0;
  out.constant = (epsilon > 0) ? out.d / std::pow(epsilon, 1.0 / (2.0 * g.n + 2.0)) : 0.0;
  return out;
}

std::vector<NormalPoint> normal_field(const FreeBoundarySet& fb, const VectorField& u) {
  if (fb.points.empty()) return {};
  const Grid& g = u.grid;
  const auto st = strides(g);
  const auto count = g.node_count();
  // one Jacobi smoothing pass on |u|
  std::vector<double> mag(static_cast<size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) mag[static_cast<size_t>(k)] = u.norm_at(k);
  std::vector<double> sm(mag);
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = g.unindex(k);
    double acc = mag[static_cast<size_t>(k)];
    int cnt = 1;
    for (int a = 0; a < g.n; ++a) {
      if (idx[static_cast<size_t>(a)] > 0) {
        acc += mag[static_cast<size_t>(k - st[static_cast<size_t>(a)])];
        ++cnt;
      }
      if (idx[static_cast<size_t>(a)] + 1 < g.dims[static_cast<size_t>(a)]) {
        acc += mag[static_cast<size_t>(k + st[static_cast<size_t>(a)])];
        ++cnt;
      }
    }
    sm[static_cast<size_t>(k)] = acc / cnt;
  }
  // gradient of the smoothed magnitude, interpolated
  auto smooth_grad = [&](const Point& x, Point& grad) -> bool {
    for (int a = 0; a < g.n; ++a)
      if (x[static_cast<size_t>(a)] < g.hull_min(a) + g.h ||
          x[static_cast<size_t>(a)] > g.hull_max(a) - g.h)
        return false;
    std::array<std::int64_t, 3> cell{0, 0, 0};
    std::array<double, 3> t{0, 0, 0};
    for (int a = 0; a < g.n; ++a) {
      const double s = (x[static_cast<size_t>(a)] - g.hull_min(a)) / g.h;
      auto i = static_cast<std::int64_t>(std::floor(s));
      i = std::max<std::int64_t>(0, std::min(i, g.dims[static_cast<size_t>(a)] - 2));
      cell[static_cast<size_t>(a)] = i;
      t[static_cast<size_t>(a)] = s - static_cast<double>(i);
    }
    grad = Point{0, 0, 0};
    for (int corner = 0; corner < (1 << g.n); ++corner) {
      double wgt = 1.0;
      auto idx = cell;
      for (int a = 0; a < g.n; ++a) {
        const int bit = (corner >> a) & 1;
        idx[static_cast<size_t>(a)] += bit;
        wgt *= bit ? t[static_cast<size_t>(a)] : 1.0 - t[static_cast<size_t>(a)];
      }
      const std::int64_t node = g.index(idx);
      for (int a = 0; a < g.n; ++a) {
        double d;
        if (idx[static_cast<size_t>(a)] > 0 &&
            idx[static_cast<size_t>(a)] + 1 < g.dims[static_cast<size_t>(a)])
          d = (sm[static_cast<size_t>(node + st[static_cast<size_t>(a)])] -
               sm[static_cast<size_t>(node - st[static_cast<size_t>(a)])]) /
              (2.0 * g.h);
        else
          d = 0.0;
        grad[static_cast<size_t>(a)] += wgt * d;
      }
    }
    return true;
  };

  std::vector<NormalPoint> out;
  const double delta = 2.0 * g.h;
  for (const auto& p : fb.points) {
    NormalPoint np;
    np.x = p.x;
    Point g0{0, 0, 0};
    if (!smooth_grad(p.x, g0)) {
      out.push_back(np);
      continue;
    }
    const double n0 = norm_n(g0, g.n);
    if (n0 < 1e-14) {
      out.push_back(np);
      continue;
    }
    Point probe = p.x;
    for (int a = 0; a < g.n; ++a)
      probe[static_cast<size_t>(a)] += delta * g0[static_cast<size_t>(a)] / n0;
    Point g1{0, 0, 0};
    if (!smooth_grad(probe, g1) || norm_n(g1, g.n) < 1e-14) {
      out.push_back(np);
      continue;
    }
    const double n1 = norm_n(g1, g.n);
    for (int a = 0; a < g.n; ++a) np.nu[static_cast<size_t>(a)] = g1[static_cast<size_t>(a)] / n1;
    np.valid = true;
    out.push_back(np);
  }
  return out;
}

double beta_of_kappa(int n, double kappa) {
  const double q = (n + 2) * kappa / (2.0 * (1.0 - kappa));
  return q / (1.0 + q);
}

HolderFit holder_exponent(const std::vector<NormalPoint>& normals, double h, int n,
                          double kappa_hat) {
  std::vector<const NormalPoint*> pts;
  for (const auto& p : normals)
    if (p.valid) pts.push_back(&p);
  if (pts.size() < 20) throw InputError("holder_exponent: need >= 20 points with normals");

  const double dmin = 10.0 * h, dmax = 0.3;
  // binned RMS structure function: the raw pair cloud is biased low by pairs
  // whose normal difference happens to vanish, the per-bin RMS is not
  const int nbins = 16;
  std::vector<double> bin_sum(nbins, 0.0), bin_dist(nbins, 0.0);
  std::vector<int> bin_count(nbins, 0);
  double pair_min = std::numeric_limits<double>::infinity(), pair_max = 0;
  std::int64_t pairs = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      double d2 = 0, dn2 = 0;
      for (int a = 0; a < n; ++a) {
        const double dx = pts[i]->x[static_cast<size_t>(a)] - pts[j]->x[static_cast<size_t>(a)];
        const double dv = pts[i]->nu[static_cast<size_t>(a)] - pts[j]->nu[static_cast<size_t>(a)];
        d2 += dx * dx;
        dn2 += dv * dv;
      }
      const double d = std::sqrt(d2);
      if (d < dmin || d > dmax) continue;
      pair_min = std::min(pair_min, d);
      pair_max = std::max(pair_max, d);
      ++pairs;
      const double t = std::log(d / dmin) / std::log(dmax / dmin);
      int b = static_cast<int>(t * nbins);
      b = std::max(0, std::min(nbins - 1, b));
      bin_sum[static_cast<size_t>(b)] += dn2;
      bin_dist[static_cast<size_t>(b)] += std::log(d);
      ++bin_count[static_cast<size_t>(b)];
    }
  if (pairs < 10 || pair_max < 10.0 * pair_min)
    throw InputError("holder_exponent: pair distances span less than one decade");

  HolderFit fit;
  fit.pairs = static_cast<int>(pairs);
  if (kappa_hat >= 0) fit.beta_reference = beta_of_kappa(n, kappa_hat);
  std::vector<double> lx, ly;
  double rms_all = 0;
  std::int64_t cnt_all = 0;
  for (int b = 0; b < nbins; ++b) {
    if (bin_count[static_cast<size_t>(b)] == 0) continue;
    const double rms = std::sqrt(bin_sum[static_cast<size_t>(b)] / bin_count[static_cast<size_t>(b)]);
    rms_all += bin_sum[static_cast<size_t>(b)];
    cnt_all += bin_count[static_cast<size_t>(b)];
    lx.push_back(bin_dist[static_cast<size_t>(b)] / bin_count[static_cast<size_t>(b)]);
    ly.push_back(std::log(std::max(rms, 1e-300)));
  }
  if (std::sqrt(rms_all / static_cast<double>(cnt_all)) < 1e-8) {
    fit.at_noise_floor = true;
    fit.beta_hat = std::numeric_limits<double>::infinity();
    return fit;
  }
  if (lx.size() < 6) throw InputError("holder_exponent: too few populated distance bins");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto k = static_cast<double>(lx.size());
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  fit.beta_hat = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  double rss = 0;
  const double icept = (sy - fit.beta_hat * sx) / k;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (icept + fit.beta_hat * lx[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / k);
  return fit;
}

}  // namespace fbreg
