#include "fbreg/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

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

// One forward-backward step from y into x_new; returns max |x_new - x_old|
// over free nodes (x_old passed separately so momentum steps can reuse it).
double fb_step(const VectorField& y, const VectorField& x_old, VectorField& x_new,
               const Nonlinearity& N, double tau) {
  const Grid& g = y.grid;
  const int m = y.m;
  const auto st = strides(g);
  const double we = std::pow(g.h, g.n - 2);
  const double tau_node = tau * std::pow(g.h, g.n);
  const auto count = static_cast<std::size_t>(g.node_count());
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> blockmax(nblocks, 0.0);

  parallel_blocks(count, [&](std::size_t b0, std::size_t b1) {
    double dmax = 0;
    VecM w(m);
    for (std::size_t k = b0; k < b1; ++k) {
      const auto node = static_cast<std::int64_t>(k);
      double* out = x_new.values.data() + node * m;
      const double* yv = y.at(node);
      if (y.mask[k]) {
        for (int c = 0; c < m; ++c) out[c] = yv[c];
        continue;
      }
      const auto idx = g.unindex(node);
      for (int c = 0; c < m; ++c) w[c] = yv[c];
      for (int a = 0; a < g.n; ++a) {
        if (idx[static_cast<size_t>(a)] + 1 < g.dims[static_cast<size_t>(a)]) {
          const double* q = y.at(node + st[static_cast<size_t>(a)]);
          for (int c = 0; c < m; ++c) w[c] -= tau * 2.0 * we * (yv[c] - q[c]);
        }
        if (idx[static_cast<size_t>(a)] > 0) {
          const double* q = y.at(node - st[static_cast<size_t>(a)]);
          for (int c = 0; c < m; ++c) w[c] -= tau * 2.0 * we * (yv[c] - q[c]);
        }
      }
      const VecM p = prox_pointwise(w, tau_node, N);
      const double* xo = x_old.at(node);
      for (int c = 0; c < m; ++c) {
        out[c] = p[c];
        dmax = std::max(dmax, std::abs(p[c] - xo[c]));
      }
    }
    blockmax[b0 / kReduceBlock] = std::max(blockmax[b0 / kReduceBlock], dmax);
  });
  double dmax = 0;
  for (double b : blockmax) dmax = std::max(dmax, b);
  return dmax;
}

}  // namespace

std::pair<VectorField, SolveStats> minimize(const VectorField& boundary, const Nonlinearity& N,
                                            const SolveOptions& opts) {
  boundary.check_finite("minimize");
  const Grid& g = boundary.grid;
  const double L = lipschitz_bound(g);
  const double tau = (opts.step > 0) ? opts.step : 1.0 / L;
  if (tau > 1.0 / L + 1e-15) throw InputError("minimize: step must satisfy step <= 1/L");
  const double stop_fp = opts.tol_fp * g.h * g.h;

  const auto t0 = std::chrono::steady_clock::now();
  VectorField x = boundary;
  VectorField y = x, x_new = x, x_prev = x;
  double E = discrete_energy(x, N);
  if (!std::isfinite(E)) throw NumericError("minimize: non-finite energy");

  SolveStats stats;
  stats.energy_trace.push_back(E);

  double t_mom = 1.0;
  double delta = 0.0;
  // stagnation window state
  const int window = 200;
  double window_E = E, window_delta = std::numeric_limits<double>::infinity();

  std::int64_t k = 0;
  for (k = 1; k <= opts.max_iters; ++k) {
    delta = fb_step(y, x, x_new, N, tau);
    double E_new = discrete_energy(x_new, N);
    if (!std::isfinite(E_new)) throw NumericError("minimize: non-finite energy");
    if (opts.acceleration && E_new > E) {
      // function-value restart: plain descent step from x
      t_mom = 1.0;
      delta = fb_step(x, x, x_new, N, tau);
      E_new = discrete_energy(x_new, N);
    }
    if (opts.acceleration) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
      const double beta = (t_mom - 1.0) / t_next;
      const auto vals = x_new.values.size();
      parallel_blocks(vals, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t i = b0; i < b1; ++i)
          y.values[i] = x_new.values[i] + beta * (x_new.values[i] - x.values[i]);
      });
      // pinned nodes keep their data exactly
      parallel_blocks(static_cast<std::size_t>(g.node_count()), [&](std::size_t b0, std::size_t b1) {
        for (std::size_t nd = b0; nd < b1; ++nd)
          if (boundary.mask[nd])
            for (int c = 0; c < x.m; ++c)
              y.values[nd * static_cast<std::size_t>(x.m) + static_cast<std::size_t>(c)] =
                  boundary.values[nd * static_cast<std::size_t>(x.m) + static_cast<std::size_t>(c)];
      });
      t_mom = t_next;
    } else {
      y = x_new;
    }
    std::swap(x.values, x_new.values);
    E = E_new;

    if (k % opts.trace_stride == 0) stats.energy_trace.push_back(E);
    if (delta <= stop_fp) {
      stats.converged = true;
      break;
    }
    if (k % window == 0) {
      const bool energy_stalled = (window_E - E) <= opts.tol_E * (1.0 + std::abs(E));
      const bool fp_stalled = delta > 0.9 * window_delta;
      if (energy_stalled && fp_stalled) {
        // stagnation: no measurable energy decrease and no fixed-point
        // progress over the window; converged only if the target was met
        stats.converged = delta <= stop_fp;
        stats.stopped_on_energy = true;
        break;
      }
      window_E = E;
      window_delta = delta;
    }
  }
  stats.iterations = std::min(k, opts.max_iters);
  stats.fp_residual = delta;
  stats.final_energy = E;
  if (stats.energy_trace.back() != E) stats.energy_trace.push_back(E);
  stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(x), std::move(stats)};
}

namespace {

// Deterministic face-blend interpolation of the hull boundary data: average
// over axes of the linear interpolation between opposite hull faces.
void face_blend_init(VectorField& u) {
  const Grid& g = u.grid;
  const int m = u.m;
  const auto count = g.node_count();
  for (std::int64_t node = 0; node < count; ++node) {
    if (u.mask[static_cast<size_t>(node)]) continue;
    auto idx = g.unindex(node);
    VecM acc(m);
    for (int a = 0; a < g.n; ++a) {
      auto lo = idx, hi = idx;
      lo[static_cast<size_t>(a)] = 0;
      hi[static_cast<size_t>(a)] = g.dims[static_cast<size_t>(a)] - 1;
      const double t = static_cast<double>(idx[static_cast<size_t>(a)]) /
                       static_cast<double>(g.dims[static_cast<size_t>(a)] - 1);
      const double* pl = u.at(g.index(lo));
      const double* ph = u.at(g.index(hi));
      for (int c = 0; c < m; ++c) acc[c] += (1.0 - t) * pl[c] + t * ph[c];
    }
    double* p = u.at(node);
    for (int c = 0; c < m; ++c) p[c] = acc[c] / g.n;
  }
}

}  // namespace

double uniqueness_audit(const VectorField& boundary, const Nonlinearity& N,
                        const SolveOptions& opts, int seeds) {
  if (seeds < 2) throw InputError("uniqueness_audit: seeds >= 2");
  double gmax = 0;
  for (double v : boundary.values) gmax = std::max(gmax, std::abs(v));

  std::vector<VectorField> solutions;
  for (int s = 0; s < seeds; ++s) {
    VectorField init = boundary;
    // interior of `boundary` is ignored: seed 0 starts from zero
    const auto count = init.grid.node_count();
    for (std::int64_t nd = 0; nd < count; ++nd) {
      if (init.mask[static_cast<size_t>(nd)]) continue;
      double* p = init.at(nd);
      for (int c = 0; c < init.m; ++c) p[c] = 0;
    }
    if (s == 1) {
      face_blend_init(init);
    } else if (s >= 2) {
      std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(s));
      std::uniform_real_distribution<double> dist(-gmax, gmax);
      for (std::int64_t nd = 0; nd < count; ++nd) {
        if (init.mask[static_cast<size_t>(nd)]) continue;
        double* p = init.at(nd);
        for (int c = 0; c < init.m; ++c) p[c] = dist(rng);
      }
    }
    solutions.push_back(minimize(init, N, opts).first);
  }
  double gap = 0;
  for (size_t i = 0; i < solutions.size(); ++i)
    for (size_t j = i + 1; j < solutions.size(); ++j) {
      double d = 0;
      for (size_t v = 0; v < solutions[i].values.size(); ++v)
        d = std::max(d, std::abs(solutions[i].values[v] - solutions[j].values[v]));
      gap = std::max(gap, d);
    }
  return gap;
}

std::vector<double> el_residual(const VectorField& u, const Nonlinearity& N, double theta_pos) {
  if (!(theta_pos > 0)) throw InputError("el_residual: theta_pos must be > 0");
  const Grid& g = u.grid;
  const int m = u.m;
  const auto st = strides(g);
  const double h2 = g.h * g.h;
  const auto count = g.node_count();
  std::vector<double> res(static_cast<size_t>(count), 0.0);
  const double f0 = N.f0();

  parallel_blocks(static_cast<std::size_t>(count), [&](std::size_t b0, std::size_t b1) {
    VecM lap(m);
    for (std::size_t k = b0; k < b1; ++k) {
      const auto node = static_cast<std::int64_t>(k);
      if (u.mask[k]) continue;
      const auto idx = g.unindex(node);
      bool interior = true;
      for (int a = 0; a < g.n; ++a)
        if (idx[static_cast<size_t>(a)] == 0 ||
            idx[static_cast<size_t>(a)] + 1 == g.dims[static_cast<size_t>(a)])
          interior = false;
      if (!interior) continue;
      const double* p = u.at(node);
      for (int c = 0; c < m; ++c) lap[c] = 0;
      for (int a = 0; a < g.n; ++a) {
        const double* qp = u.at(node + st[static_cast<size_t>(a)]);
        const double* qm = u.at(node - st[static_cast<size_t>(a)]);
        for (int c = 0; c < m; ++c) lap[c] += (qp[c] - 2.0 * p[c] + qm[c]) / h2;
      }
      const double un = u.norm_at(node);
      if (un > theta_pos) {
        const double fs = N.f(un);
        double d2 = 0;
        for (int c = 0; c < m; ++c) {
          const double d = lap[c] - fs * p[c] / un;
          d2 += d * d;
        }
        res[k] = std::sqrt(d2);
      } else {
        res[k] = std::max(lap.norm() - f0, 0.0);
      }
    }
  });
  return res;
}

}  // namespace fbreg
