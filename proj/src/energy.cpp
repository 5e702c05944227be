#include "fbreg/energy.hpp"

#include <cmath>

#include "fbreg/threads.hpp"

namespace fbreg {

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

}  // namespace

double discrete_energy(const VectorField& u, const Nonlinearity& N) {
  u.check_finite("discrete_energy");
  const Grid& g = u.grid;
  const int m = u.m;
  const auto st = strides(g);
  const double we = std::pow(g.h, g.n - 2);
  const double wn = std::pow(g.h, g.n);
  const auto count = static_cast<std::size_t>(g.node_count());

  return block_sum(count, [&](std::size_t k) {
    const auto node = static_cast<std::int64_t>(k);
    const auto idx = g.unindex(node);
    const bool free_here = !u.mask[k];
    double acc = 0;
    // forward edges
    for (int a = 0; a < g.n; ++a) {
      if (idx[static_cast<size_t>(a)] + 1 >= g.dims[static_cast<size_t>(a)]) continue;
      const std::int64_t nb = node + st[static_cast<size_t>(a)];
      if (!free_here && u.mask[static_cast<size_t>(nb)]) continue;
      const double* p = u.at(node);
      const double* q = u.at(nb);
      double d2 = 0;
      for (int c = 0; c < m; ++c) {
        const double d = q[c] - p[c];
        d2 += d * d;
      }
      acc += we * d2;
    }
    // nodal F term on free nodes and their pinned neighbors
    bool active = free_here;
    if (!active) {
      for (int a = 0; a < g.n && !active; ++a) {
        if (idx[static_cast<size_t>(a)] + 1 < g.dims[static_cast<size_t>(a)] &&
            !u.mask[static_cast<size_t>(node + st[static_cast<size_t>(a)])])
          active = true;
        if (idx[static_cast<size_t>(a)] > 0 &&
            !u.mask[static_cast<size_t>(node - st[static_cast<size_t>(a)])])
          active = true;
      }
    }
    if (active) acc += wn * N.F(u.norm_at(node));
    return acc;
  });
}

void dirichlet_gradient(const VectorField& u, VectorField& out) {
  const Grid& g = u.grid;
  const int m = u.m;
  const auto st = strides(g);
  const double we = std::pow(g.h, g.n - 2);
  const auto count = static_cast<std::size_t>(g.node_count());
  if (out.values.size() != u.values.size()) out = VectorField(g, m);

  parallel_blocks(count, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t k = b0; k < b1; ++k) {
      double* go = out.values.data() + static_cast<std::int64_t>(k) * m;
      if (u.mask[k]) {
        for (int c = 0; c < m; ++c) go[c] = 0;
        continue;
      }
      const auto node = static_cast<std::int64_t>(k);
      const auto idx = g.unindex(node);
      const double* p = u.at(node);
      for (int c = 0; c < m; ++c) go[c] = 0;
      for (int a = 0; a < g.n; ++a) {
        if (idx[static_cast<size_t>(a)] + 1 < g.dims[static_cast<size_t>(a)]) {
          const double* q = u.at(node + st[static_cast<size_t>(a)]);
          for (int c = 0; c < m; ++c) go[c] += 2.0 * we * (p[c] - q[c]);
        }
        if (idx[static_cast<size_t>(a)] > 0) {
          const double* q = u.at(node - st[static_cast<size_t>(a)]);
          for (int c = 0; c < m; ++c) go[c] += 2.0 * we * (p[c] - q[c]);
        }
      }
    }
  });
}

double prox_radial(double wnorm, double tau, const Nonlinearity& N) {
  if (!(tau > 0)) throw InputError("prox: tau must be > 0");
  if (wnorm <= tau * N.dF(0.0)) return 0.0;
  // phi(s) = s + tau F'(s) is strictly increasing; root in (0, wnorm)
  double lo = 0.0, hi = wnorm;
  double s = wnorm - tau * N.dF(0.0);  // exact for linear F
  const double tol = 1e-12 * std::max(1.0, wnorm);
  for (int it = 0; it < 200; ++it) {
    const double phi = s + tau * N.dF(s) - wnorm;
    if (std::abs(phi) <= tol) return s;
    if (phi > 0)
      hi = s;
    else
      lo = s;
    const double dphi = 1.0 + tau * N.d2F(s);
    double step = phi / dphi;
    double cand = s - step;
    if (!(cand > lo) || !(cand < hi)) cand = 0.5 * (lo + hi);
    s = cand;
    if (hi - lo <= tol) return 0.5 * (lo + hi);
  }
  throw NumericError("prox: root finder failed to converge");
}

VecM prox_pointwise(const VecM& w, double tau, const Nonlinearity& N) {
  const double wn = w.norm();
  if (wn == 0.0) return VecM(w.m);
  const double s = prox_radial(wn, tau, N);
  if (s == 0.0) return VecM(w.m);
  return (s / wn) * w;
}

double lipschitz_bound(const Grid& g) { return 8.0 * g.n * std::pow(g.h, g.n - 2); }

}  // namespace fbreg
