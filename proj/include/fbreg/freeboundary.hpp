#pragma once

#include "fbreg/geometry.hpp"

namespace fbreg {

// Level-set extraction of Gamma(u) = d{|u| > theta_pos} with per-point
// classification into the degenerate part Gamma_0 (|grad u| < theta_grad) and
// the rest Gamma_1.
struct FreeBoundaryPoint {
  Point x{0, 0, 0};
  bool degenerate = false;  // Gamma_0
  double grad_norm = 0;
};

struct FreeBoundarySet {
  std::vector<FreeBoundaryPoint> points;
  double theta_pos = 0, theta_grad = 0;

  std::vector<Point> gamma0() const {
    std::vector<Point> out;
    for (const auto& p : points)
      if (p.degenerate) out.push_back(p.x);
    return out;
  }
};

double default_theta_pos(double f0, double h);   // 1e-2 f0 h^2
double default_theta_grad(double f0, double h);  // f0 h

// Marching-squares (n=2) / cell-edge contour (n=3) points of |u| at level
// theta_pos. An empty positivity set gives an empty result.
FreeBoundarySet extract(const VectorField& u, double theta_pos, double theta_grad);

struct NondegRow {
  double r = 0, sup = 0, bound = 0, margin = 0;
  bool flagged = false;
};

// sup_{B_r(x0)} |u| against the bound f0 r^2 / (2n); the sup runs over
// quadrature and nodal samples. Flags margin < -slack with
// slack = 0.05 bound + f0 h^2. x0 must touch the closure of the support.
std::vector<NondegRow> nondegeneracy_audit(const VectorField& u, const Point& x0,
                                           const std::vector<double>& radii, double f0);

struct GrowthFit {
  double u_exponent = 0, u_constant = 0;
  double grad_exponent = 0, grad_constant = 0;
  std::vector<double> r, sup_u, sup_grad;
};

// Log-log least-squares growth rates of sup |u| and sup |grad u| over B_r(x0)
// at a Gamma_0 point; radii must be >= 10h and at least 4 must be admissible.
GrowthFit growth_audit(const VectorField& u, const Point& x0, const std::vector<double>& radii);

struct SupportOffset {
  double epsilon = 0;   // measured L1(B_1) distance to H
  double d = 0;         // worst offset below the hyperplane within B_{1/2}
  double constant = 0;  // d / epsilon^{1/(2n+2)}
};

// L1(B_1) distance by the nodal rectangle rule.
double l1_distance_ball(const VectorField& u, const HalfSpaceSolution& H, const Point& center,
                        double radius);

// d = max(0, -min{ x.nu : x in supp_theta(u) cap B_{1/2} }) and the implied
// constant d / eps^{1/(2n+2)} (exponent from the support-perturbation bound).
SupportOffset support_offset(const VectorField& u, const HalfSpaceSolution& H, double epsilon,
                             double theta_pos);

struct NormalPoint {
  Point x{0, 0, 0};
  Point nu{0, 0, 0};  // unit, pointing into the positivity set
  bool valid = false;
};

// nu(x) = grad|u|(x~)/|grad|u|(x~)| with x~ offset 2h into the positivity set
// and |u| smoothed by one Jacobi pass; points with vanishing smoothed gradient
// are skipped with valid = false.
std::vector<NormalPoint> normal_field(const FreeBoundarySet& fb, const VectorField& u);

struct HolderFit {
  double beta_hat = 0, residual = 0;
  bool at_noise_floor = false;  // flat boundary: differences below fit ceiling
  int pairs = 0;
  double beta_reference = -1;  // beta(kappa_hat) when kappa_hat supplied
};

// Fits log |nu(x) - nu(y)| vs log |x - y| over pairs with |x - y| in
// [10h, 0.3]. Needs >= 20 points spanning >= 1 decade of pair distances.
// kappa_hat, when >= 0, adds the reference beta = q/(1+q),
// q = (n+2) kappa / (2(1-kappa)).
HolderFit holder_exponent(const std::vector<NormalPoint>& normals, double h, int n,
                          double kappa_hat = -1.0);

// The reference exponent beta(kappa).
double beta_of_kappa(int n, double kappa);

}  // namespace fbreg
