#pragma once

#include <cstdint>
#include <utility>

#include "fbreg/energy.hpp"

namespace fbreg {

struct SolveOptions {
  double step = 0.0;         // 0 -> 1/lipschitz_bound
  bool acceleration = true;  // Nesterov momentum with function-value restart
  double tol_fp = 1e-8;      // fixed-point tolerance, scaled by h^2
  double tol_E = 1e-12;      // relative energy-decrease stagnation threshold
  std::int64_t max_iters = 200000;
  int trace_stride = 50;
  std::uint64_t seed = 0;  // random initializations in uniqueness_audit
};

struct SolveStats {
  std::int64_t iterations = 0;
  double final_energy = 0.0;
  std::vector<double> energy_trace;
  double fp_residual = 0.0;
  double wall_time_s = 0.0;
  bool converged = false;
  bool stopped_on_energy = false;
};

// Minimizes E_h over fields that equal `boundary` on its masked nodes.
// The unmasked values of `boundary` seed the iteration. Iterates
// u+ = prox_{tau h^n F(|.|)}(u - tau grad(Dirichlet part)) nodewise with
// boundary nodes pinned; stops when the sup-norm update drops below
// tol_fp * h^2, or when the energy decrease stagnates below tol_E with no
// fixed-point progress over a trailing window.
std::pair<VectorField, SolveStats> minimize(const VectorField& boundary, const Nonlinearity& N,
                                            const SolveOptions& opts = {});

// Runs minimize from u0 = 0, u0 = a face-blend interpolation of g, and
// (seeds - 2) random initializations; returns the max pairwise L-inf gap.
double uniqueness_audit(const VectorField& boundary, const Nonlinearity& N,
                        const SolveOptions& opts, int seeds);

// Pointwise Euler-Lagrange residual. On nodes with |u| > theta_pos this is
// |lap_h u - f(|u|) u/|u||; on the rest the distance of lap_h u to the
// subgradient ball f(0) B1 of R^m. Hull and masked nodes report 0.
std::vector<double> el_residual(const VectorField& u, const Nonlinearity& N, double theta_pos);

}  // namespace fbreg
