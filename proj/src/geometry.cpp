#include "fbreg/geometry.hpp"

#include <cmath>
#include <sstream>

namespace fbreg {

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw InputError("gauss_legendre: n >= 1");
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0, z1;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > 1e-15);
    x[static_cast<size_t>(i)] = xm - xl * z;
    x[static_cast<size_t>(n - 1 - i)] = xm + xl * z;
    w[static_cast<size_t>(i)] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[static_cast<size_t>(n - 1 - i)] = w[static_cast<size_t>(i)];
  }
}

AngularRule angular_rule(int n, int N_theta, int N_cos, int N_phi) {
  AngularRule rule;
  rule.n = n;
  if (n == 1) {
    rule.dirs = {Point{-1, 0, 0}, Point{1, 0, 0}};
    rule.w = {1.0, 1.0};
  } else if (n == 2) {
    if (N_theta < 4) throw InputError("angular_rule: N_theta >= 4");
    rule.dirs.reserve(static_cast<size_t>(N_theta));
    for (int j = 0; j < N_theta; ++j) {
      const double th = 2.0 * M_PI * j / N_theta;
      rule.theta.push_back(th);
      rule.dirs.push_back(Point{std::cos(th), std::sin(th), 0});
      rule.w.push_back(2.0 * M_PI / N_theta);
    }
  } else if (n == 3) {
    std::vector<double> c, wc;
    gauss_legendre(N_cos, -1.0, 1.0, c, wc);
    for (int i = 0; i < N_cos; ++i) {
      const double ct = c[static_cast<size_t>(i)];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int j = 0; j < N_phi; ++j) {
        const double phi = 2.0 * M_PI * j / N_phi;
        rule.dirs.push_back(Point{st * std::cos(phi), st * std::sin(phi), ct});
        rule.w.push_back(wc[static_cast<size_t>(i)] * 2.0 * M_PI / N_phi);
      }
    }
  } else {
    throw InputError("angular_rule: n must be 1, 2 or 3");
  }
  return rule;
}

Point BallQuadrature::volume_node(std::int64_t q) const {
  const auto na = static_cast<std::int64_t>(ang.size());
  const auto i = static_cast<size_t>(q / na);
  const auto j = static_cast<size_t>(q % na);
  Point x = center;
  for (int a = 0; a < n; ++a) x[static_cast<size_t>(a)] += rho[i] * ang.dirs[j][static_cast<size_t>(a)];
  return x;
}

double BallQuadrature::volume_weight(std::int64_t q) const {
  const auto na = static_cast<std::int64_t>(ang.size());
  const auto i = static_cast<size_t>(q / na);
  const auto j = static_cast<size_t>(q % na);
  return wrho[i] * std::pow(rho[i], n - 1) * ang.w[j];
}

Point BallQuadrature::surface_node(int j) const {
  Point x = center;
  for (int a = 0; a < n; ++a)
    x[static_cast<size_t>(a)] += r * ang.dirs[static_cast<size_t>(j)][static_cast<size_t>(a)];
  return x;
}

double BallQuadrature::surface_weight(int j) const {
  return std::pow(r, n - 1) * ang.w[static_cast<size_t>(j)];
}

BallQuadrature ball_quadrature_free(int n, const Point& x0, double r, int N_r, int N_theta) {
  if (!(r > 0)) throw InputError("ball_quadrature: r > 0");
  BallQuadrature Q;
  Q.n = n;
  Q.center = x0;
  Q.r = r;
  const int nr = std::max(N_r, 32);
  gauss_legendre(nr, 0.0, r, Q.rho, Q.wrho);
  if (n == 2) {
    Q.ang = angular_rule(2, std::max(N_theta, 128));
  } else if (n == 3) {
    Q.ang = angular_rule(3, 0, 32, 64);
  } else {
    Q.ang = angular_rule(n);
  }
  return Q;
}

BallQuadrature ball_quadrature(const Grid& g, const Point& x0, double r, int N_r, int N_theta) {
  double margin = 0;
  for (int a = 0; a < g.n; ++a) {
    margin = std::max(margin, g.hull_min(a) - (x0[static_cast<size_t>(a)] - r - 2 * g.h));
    margin = std::max(margin, (x0[static_cast<size_t>(a)] + r + 2 * g.h) - g.hull_max(a));
  }
  if (margin > 1e-12) {
    std::ostringstream os;
    os << "ball_quadrature: B_{r+2h} not contained in grid hull, short by " << margin;
    throw DomainError(os.str());
  }
  const int nr = std::max({N_r, 32, static_cast<int>(std::ceil(4.0 * r / g.h))});
  const int nt = std::max({N_theta, 128, static_cast<int>(std::ceil(2.0 * M_PI * r / g.h))});
  return ball_quadrature_free(g.n, x0, r, nr, nt);
}

namespace {

struct CellLocator {
  std::array<std::int64_t, 3> cell{0, 0, 0};
  std::array<double, 3> t{0, 0, 0};
};

CellLocator locate(const Grid& g, const Point& x, const char* who) {
  if (!g.contains(x, 1e-9 * g.h)) throw DomainError(std::string(who) + ": point outside grid hull");
  CellLocator loc;
  for (int a = 0; a < g.n; ++a) {
    const double s = (x[static_cast<size_t>(a)] - g.hull_min(a)) / g.h;
    auto i = static_cast<std::int64_t>(std::floor(s));
    i = std::max<std::int64_t>(0, std::min(i, g.dims[static_cast<size_t>(a)] - 2));
    loc.cell[static_cast<size_t>(a)] = i;
    loc.t[static_cast<size_t>(a)] = s - static_cast<double>(i);
  }
  return loc;
}

// Nodal centered-difference gradient, one-sided second order at the hull.
double nodal_derivative(const VectorField& u, std::array<std::int64_t, 3> idx, int c, int a) {
  const Grid& g = u.grid;
  const auto d = g.dims[static_cast<size_t>(a)];
  const auto i = idx[static_cast<size_t>(a)];
  auto at = [&](std::int64_t ia) {
    auto jdx = idx;
    jdx[static_cast<size_t>(a)] = ia;
    return u.at(g.index(jdx))[c];
  };
  if (i > 0 && i + 1 < d) return (at(i + 1) - at(i - 1)) / (2.0 * g.h);
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * g.h);
  return (3.0 * at(d - 1) - 4.0 * at(d - 2) + at(d - 3)) / (2.0 * g.h);
}

double catmull_rom(double pm1, double p0, double p1, double p2, double t) {
  return 0.5 * ((2.0 * p0) + (-pm1 + p1) * t + (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * t * t +
                (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * t * t * t);
}

}  // namespace

VecM interpolate(const VectorField& u, const Point& x) {
  const Grid& g = u.grid;
  const auto loc = locate(g, x, "interpolate");
  VecM out(u.m);
  const int corners = 1 << g.n;
  for (int corner = 0; corner < corners; ++corner) {
    double wgt = 1.0;
    auto idx = loc.cell;
    for (int a = 0; a < g.n; ++a) {
      const int bit = (corner >> a) & 1;
      idx[static_cast<size_t>(a)] += bit;
      wgt *= bit ? loc.t[static_cast<size_t>(a)] : 1.0 - loc.t[static_cast<size_t>(a)];
    }
    const double* p = u.at(g.index(idx));
    for (int c = 0; c < u.m; ++c) out[c] += wgt * p[c];
  }
  return out;
}

double interpolate_scalar(const Grid& g, const std::vector<double>& s, const Point& x) {
  const auto loc = locate(g, x, "interpolate_scalar");
  double out = 0;
  const int corners = 1 << g.n;
  for (int corner = 0; corner < corners; ++corner) {
    double wgt = 1.0;
    auto idx = loc.cell;
    for (int a = 0; a < g.n; ++a) {
      const int bit = (corner >> a) & 1;
      idx[static_cast<size_t>(a)] += bit;
      wgt *= bit ? loc.t[static_cast<size_t>(a)] : 1.0 - loc.t[static_cast<size_t>(a)];
    }
    out += wgt * s[static_cast<size_t>(g.index(idx))];
  }
  return out;
}

void gradient_at(const VectorField& u, const Point& x, double* grad) {
  const Grid& g = u.grid;
  for (int a = 0; a < g.n; ++a) {
    if (x[static_cast<size_t>(a)] < g.hull_min(a) + g.h - 1e-9 * g.h ||
        x[static_cast<size_t>(a)] > g.hull_max(a) - g.h + 1e-9 * g.h)
      throw DomainError("gradient_at: point closer than h to the hull");
  }
  const auto loc = locate(g, x, "gradient_at");
  for (int i = 0; i < u.m * g.n; ++i) grad[i] = 0;
  const int corners = 1 << g.n;
  for (int corner = 0; corner < corners; ++corner) {
    double wgt = 1.0;
    auto idx = loc.cell;
    for (int a = 0; a < g.n; ++a) {
      const int bit = (corner >> a) & 1;
      idx[static_cast<size_t>(a)] += bit;
      wgt *= bit ? loc.t[static_cast<size_t>(a)] : 1.0 - loc.t[static_cast<size_t>(a)];
    }
    for (int c = 0; c < u.m; ++c)
      for (int a = 0; a < g.n; ++a)
        grad[c * g.n + a] += wgt * nodal_derivative(u, idx, c, a);
  }
}

VecM interpolate_cubic(const VectorField& u, const Point& x) {
  const Grid& g = u.grid;
  const auto loc = locate(g, x, "interpolate_cubic");
  VecM out(u.m);
  // per-axis 4-node stencil, indices clamped at the hull
  auto clamp_idx = [&](std::int64_t i, int a) {
    return std::max<std::int64_t>(0, std::min(i, g.dims[static_cast<size_t>(a)] - 1));
  };
  for (int c = 0; c < u.m; ++c) {
    if (g.n == 1) {
      double p[4];
      for (int o = 0; o < 4; ++o) {
        auto idx = loc.cell;
        idx[0] = clamp_idx(loc.cell[0] - 1 + o, 0);
        p[o] = u.at(g.index(idx))[c];
      }
      out[c] = catmull_rom(p[0], p[1], p[2], p[3], loc.t[0]);
    } else if (g.n == 2) {
      double rows[4];
      for (int oy = 0; oy < 4; ++oy) {
        double p[4];
        for (int ox = 0; ox < 4; ++ox) {
          std::array<std::int64_t, 3> idx{clamp_idx(loc.cell[0] - 1 + ox, 0),
                                          clamp_idx(loc.cell[1] - 1 + oy, 1), 0};
          p[ox] = u.at(g.index(idx))[c];
        }
        rows[oy] = catmull_rom(p[0], p[1], p[2], p[3], loc.t[0]);
      }
      out[c] = catmull_rom(rows[0], rows[1], rows[2], rows[3], loc.t[1]);
    } else {
      double planes[4];
      for (int oz = 0; oz < 4; ++oz) {
        double rows[4];
        for (int oy = 0; oy < 4; ++oy) {
          double p[4];
          for (int ox = 0; ox < 4; ++ox) {
            std::array<std::int64_t, 3> idx{clamp_idx(loc.cell[0] - 1 + ox, 0),
                                            clamp_idx(loc.cell[1] - 1 + oy, 1),
                                            clamp_idx(loc.cell[2] - 1 + oz, 2)};
            p[ox] = u.at(g.index(idx))[c];
          }
          rows[oy] = catmull_rom(p[0], p[1], p[2], p[3], loc.t[0]);
        }
        planes[oz] = catmull_rom(rows[0], rows[1], rows[2], rows[3], loc.t[1]);
      }
      out[c] = catmull_rom(planes[0], planes[1], planes[2], planes[3], loc.t[2]);
    }
  }
  return out;
}

FieldProbe probe_of(const VectorField& u, bool cubic) {
  FieldProbe p;
  p.n = u.grid.n;
  p.m = u.m;
  const VectorField* up = &u;
  if (cubic)
    p.value = [up](const Point& x) { return interpolate_cubic(*up, x); };
  else
    p.value = [up](const Point& x) { return interpolate(*up, x); };
  p.gradient = [up](const Point& x, double* grad) { gradient_at(*up, x, grad); };
  return p;
}

FieldProbe probe_of(const HalfSpaceSolution& H) {
  FieldProbe p;
  p.n = H.n;
  p.m = H.e.m;
  p.value = [H](const Point& x) { return H.eval(x); };
  p.gradient = [H](const Point& x, double* grad) {
    for (int c = 0; c < H.e.m; ++c)
      for (int a = 0; a < H.n; ++a) grad[c * H.n + a] = H.grad(x, c, a);
  };
  return p;
}

}  // namespace fbreg
