#pragma once

#include "fbreg/solver.hpp"

namespace fbreg {

// Closed-form 1-D solution of u'' = lambda on {u > 0} with nonnegative
// boundary values p = u(a), q = u(b):
//   u(x) = lambda max(x1 - x, 0)^2 / 2 + lambda max(x - x2, 0)^2 / 2,
//   x1 = a + sqrt(2p/lambda), x2 = b - sqrt(2q/lambda), valid iff x1 <= x2.
// Without contact the parabola through the boundary data is returned with a
// flag.
struct Contact1D {
  double lambda = 1, a = 0, b = 1, p = 0, q = 0;
  double x1 = 0, x2 = 0;
  bool has_contact = true;
  double par_A = 0, par_B = 0;  // no-contact fallback u = lambda x^2/2 + A x + B

  double eval(double x) const;
  double deriv(double x) const;
};

Contact1D exact_linear_1d(double lambda, double a, double b, double p, double q);

// Production scheme on [a, b] at h_ref = h/refinement with tolerances
// tightened 100x; returns the dense 1-D field.
VectorField reference_solve_1d(const Nonlinearity& N, double a, double b, double p, double q,
                               double h, int refinement, const SolveOptions& base = {});

// Radially symmetric reference: fine weighted 1-D solve of
// min int_0^R (U'^2 + F(|U|)) r^{n-1} dr with U(R) = b_mag >= 0; u = U(|x|) e.
struct RadialProfile {
  int n = 2;
  double R = 1, h = 0;
  std::vector<double> r, U;

  double eval(double rr) const;  // linear interpolation
};

RadialProfile reference_radial(const Nonlinearity& N, int n, double R, double b_mag,
                               double h = 1.0 / 2048.0);

}  // namespace fbreg
