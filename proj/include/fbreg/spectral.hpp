#pragma once

#include <vector>

#include "fbreg/common.hpp"

namespace fbreg {

// Smallest k eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence
// bisection (deterministic), eigenvectors by inverse iteration.
struct TridiagEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};
TridiagEigen tridiag_smallest(const std::vector<double>& diag, const std::vector<double>& off,
                              int k, bool want_vectors = true);

// Axisymmetric spherical-cap eigenproblem for L = -Lap' + q, q = 2/cos^2
// (theta), on {theta < theta_cap}, Dirichlet at theta_cap. Cell-centered
// theta grid, weight rho = sin^{n-2} theta. The ground-state transform
// v = cos^2(theta) w turns the singular potential into the degenerate-weight
// problem -(rho phi^2 w')' = (lambda - 2n) rho phi^2 w, phi = cos^2(theta).
struct CapProblem {
  int n = 2;
  double theta_cap = M_PI / 2.0;
  int M = 256;  // cells
  bool ground_state_transform = true;

  CapProblem() = default;
  CapProblem(int n_, double cap, int M_, bool transform = true);
};

struct CapEigenResult {
  std::vector<double> lambda;           // Richardson-extrapolated over M, 2M
  std::vector<double> lambda_raw_M, lambda_raw_2M;
  std::vector<double> theta;            // cell centers of the 2M grid
  std::vector<std::vector<double>> eigenfunctions;  // v = phi w samples
  double correlation_cos2 = 0;          // rho-weighted, first eigenfunction
};

CapEigenResult cap_eigen(const CapProblem& p, int k);

struct ShiftBoundRow {
  int k = 0;
  double lambda_L = 0, lambda_lap = 0;  // same discretization, q removed
  double bound = 0;                      // q0 + lambda_lap
  double margin = 0;                     // lambda_L - bound
};

struct ShiftBoundReport {
  double q0 = 2.0;
  std::vector<ShiftBoundRow> rows;
  bool pass = true;  // all margins >= -tol
};

ShiftBoundReport shift_bound_check(const CapProblem& p, int k, double tol = 1e-6);

}  // namespace fbreg
