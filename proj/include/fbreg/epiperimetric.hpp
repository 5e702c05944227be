#pragma once

#include "fbreg/blowup.hpp"
#include "fbreg/solver.hpp"

namespace fbreg {

// Angular trace of a 2-homogeneous cone c(x) = |x|^2 c(x/|x|) on the unit
// circle (the cone machinery is 2-D). Traces built analytically carry exact
// closures; otherwise evaluation falls back to periodic cubic interpolation
// of the samples.
struct ConeTrace {
  int m = 1;
  int N = 512;                  // uniform angular samples theta_j = 2 pi j / N
  std::vector<double> samples;  // j*m + c
  std::function<VecM(double)> closure;        // optional theta -> c(theta)
  std::function<VecM(double)> closure_deriv;  // optional d/dtheta
  double delta_W = 0, delta_inf = 0;  // recorded distances to the seeded h
  HalfSpaceSolution seeded_h;
  bool has_seed = false;

  VecM value(double theta) const;
  VecM dvalue(double theta) const;  // angular derivative
};

ConeTrace trace_of_halfspace(const HalfSpaceSolution& h, int m, int N = 512);

// Samples the extension |x|^2 c(x/|x|) (values and gradients) on the standard
// polar grid.
PolarField cone_from_trace(const ConeTrace& c, int N_rad = 32, int N_theta = 512);

// c = trace(h) + delta * w, w a seeded random combination of cos k theta,
// sin k theta (k <= K) across components with unit W^{1,2}(dB1) norm.
ConeTrace sample_cone_near_halfspace(double delta, int K, std::uint64_t seed, int m = 2,
                                     double f0 = 1.0, int N = 512);

struct CompetitorResult {
  VectorField v;        // constrained minimizer on the covering grid
  double energy_gain;   // A_h(cone) - A_h(v) >= 0, exact by monotone descent
  double cone_energy;   // A_h(cone): discrete energy of the sampled extension
  SolveStats stats;
};

// Global minimizer of H(., s) with Dirichlet trace c: the solver runs on a
// Cartesian grid covering B_1 with all nodes |x| >= 1 pinned to the
// 2-homogeneous extension, nonlinearity F_s, iteration started at the
// extension so the discrete energy chain is nonincreasing.
CompetitorResult competitor(const ConeTrace& c, const Nonlinearity& N, double s,
                            double grid_h = 1.0 / 64.0, const SolveOptions& opts = {});

struct EpiResult {
  double s = 0;
  double H_c = 0, H_v = 0, M_h = 0;
  double kappa_best = 0;
  bool kappa_defined = false;
  std::string flag;  // reason when undefined, or anomaly notes
  double denominator = 0;
  double delta_W = 0, delta_inf = 0;  // distances of c to its projection h*
  HalfSpaceProjection projection;
  double M_c = 0;  // energy density of the cone itself
};

inline constexpr double kEpsDenominator = 1e-8;

// kappa_best = (H(c,s) - H(v,s)) / (H(c,s) - M(h*)): the largest kappa for
// which the contraction inequality holds with this competitor. H(c,s) and
// M(h*) share one polar quadrature; H(v,s) = H(c,s) - gain with the gain
// taken on the solver grid, so H(v,s) <= H(c,s) holds exactly.
EpiResult kappa_estimate(const ConeTrace& c, const Nonlinearity& N, double s,
                         double grid_h = 1.0 / 64.0);

struct EpiScanRow {
  double delta = 0, s = 0;
  std::uint64_t seed = 0;
  std::string family;
  EpiResult result;
  bool failed = false;
  std::string error;
};

struct EpiScan {
  std::vector<EpiScanRow> rows;
  double min_kappa = 0;      // over defined rows
  int argmin_row = -1;
  double min_M_cone = 0;     // empirical floor proxy over sampled cones
  int defined_rows = 0;
};

EpiScan batch_scan(const std::vector<double>& deltas, const std::vector<double>& s_values, int K,
                   int seeds, const std::vector<Nonlinearity>& families, int m = 2,
                   double grid_h = 1.0 / 64.0, std::uint64_t seed_offset = 0);

}  // namespace fbreg
