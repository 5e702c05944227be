#pragma once

#include "fbreg/nonlinearity.hpp"
#include "fbreg/polar.hpp"

namespace fbreg {

// Half-space energy density doubling constant, both closed forms of which
// agree: f0^2 H^{n-1}(dB1) / (2n(n+2)) = f0^2 |B1| / (2(n+2)).
double alpha_n(int n, double f0);

// Weiss boundary adjusted energy
//   W(u, x0, r) = r^{-(n+2)} int_{B_r} (|grad u|^2 + F(|u|))
//               - 2 r^{-(n+3)} int_{dB_r} |u|^2
// evaluated with the given product quadrature.
double weiss_energy(const FieldProbe& u, const Nonlinearity& N, const BallQuadrature& Q);

// Grid version: builds an admissible quadrature (B_{r+2h} inside the hull).
double weiss_energy(const VectorField& u, const Nonlinearity& N, const Point& x0, double r);

// H(v, s) = int_{B1} |grad v|^2 + F_s(|v|) - 2 int_{dB1} |v|^2.
double functional_H(const PolarField& v, const Nonlinearity& N, double s);

// M(v) = int_{B1} |grad v|^2 + 2 f0 |v| - 2 int_{dB1} |v|^2, the s -> 0 limit
// of H.
double functional_M(const PolarField& v, double f0);

struct WeissReport {
  Point x0{0, 0, 0};
  std::vector<double> r, W, dWdr, T1, T2;
  double tol_mono_scale = 1e-3;
  std::vector<int> violations;  // indices with dW/dr < -tol_mono(r)
  double W0_estimate = 0, fit_exponent = 0, fit_residual = 0;
  bool fit_low_confidence = false;
};

// Per-radius W, numerical dW/dr (nonuniform centered differences), and the
// two nonnegative right-hand-side terms of the monotonicity identity:
//   T1 = 2 r^{-(n+2)} int_{dB_r} |grad u . nu - 2u/r|^2
//   T2 = 2 r^{-(n+3)} int_{B_r} (F'(|u|)|u| chi_{|u|>0} - F(|u|)).
// Radii below 8h are rejected.
WeissReport monotonicity_audit(const VectorField& u, const Nonlinearity& N, const Point& x0,
                               const std::vector<double>& radii, double tol_mono_scale = 1e-3);

struct DensityFit {
  double W0 = 0, exponent = 0, residual = 0;
  bool low_confidence = false;
};

// Fits W(r) = W0 + A r^alpha (golden-section over alpha in [0.1, 6], linear
// least squares in (W0, A)).
DensityFit density_limit(const std::vector<double>& r, const std::vector<double>& W);
DensityFit density_limit(const WeissReport& report);

enum class PointClass { Trivial, Regular, NonRegular };
const char* point_class_name(PointClass c);

struct Classification {
  PointClass cls = PointClass::NonRegular;
  double W0 = 0, exponent = 0, residual = 0;
  bool low_confidence = false;
};

// Threshold logic: Trivial when W0 <= tau alpha_n, Regular when
// |W0 - alpha_n/2| <= tau alpha_n, NonRegular otherwise.
PointClass classify_from_density(double W0, double alpha, double tau_class);

// Full pipeline at a free-boundary point: requires |grad u(x0)| <= theta_grad
// (a Gamma_0 candidate); default theta_grad = f0 h.
Classification classify_point(const VectorField& u, const Nonlinearity& N, const Point& x0,
                              const std::vector<double>& radii, double tau_class = 0.05,
                              double theta_grad = -1.0);

// Smooth compactly supported test field xi with Jacobian, sampled at nodes.
struct TestVectorField {
  int n = 2;
  // val: n doubles; jac: n*n doubles, entry i*n + j = d xi_j / d x_i
  std::function<void(const Point&, double*, double*)> eval;
};

// Radial bump xi(x) = amp (1 - |x-c|^2/R^2)^3 (x - c) inside B_R(c).
TestVectorField radial_bump_xi(int n, const Point& center, double R, double amp = 1.0);

// | int |grad u|^2 div xi - 2 grad u D xi . grad u + F(|u|) div xi | by the
// nodal rectangle rule; the support of xi must stay 2h inside the hull.
double domain_variation_residual(const VectorField& u, const Nonlinearity& N,
                                 const TestVectorField& xi);

// Geometric radii ladder r_j = r_min 2^{j/2}, j = 0..count-1.
std::vector<double> radii_ladder(double r_min, int count);

}  // namespace fbreg
