#pragma once

#include "fbreg/weiss.hpp"

namespace fbreg {

// Polar samples of the rescaled field u_{x0,r}(x) = u(x0 + r x)/r^2.
struct BlowupField {
  PolarField polar;
  Point x0{0, 0, 0};
  double r = 0;
  int m = 1;
};

// Requires B_{r+2h}(x0) inside the hull.
BlowupField rescale(const VectorField& u, const Point& x0, double r, int N_rad = 32,
                    int N_theta = 256);
BlowupField rescale(const FieldProbe& u, const Grid& g, const Point& x0, double r,
                    int N_rad = 32, int N_theta = 256);

// int_{B1} |x . grad v - 2 v| dx / max(1, int_{B1} |v|); zero exactly on
// 2-homogeneous fields. Needs >= 8 radial nodes.
double homogeneity_defect(const PolarField& v);

struct HalfSpaceProjection {
  Point nu{0, 1, 0};
  VecM e;
  double amplitude_free = 0;      // best free amplitude (f0/2 when constrained)
  double residual_constrained = 0;  // L2(dB1), amplitude fixed at f0/2
  double residual_free = 0;         // L2(dB1), amplitude free
};

// Best half-space trace fit on the sphere: coarse direction scan (720 angles
// for n=2, 1024 Fibonacci directions for n=3) with the closed-form optimal e
// per direction, then local refinement. Throws on v = 0.
HalfSpaceProjection project_to_halfspace(const AngularRule& ang,
                                         const std::vector<double>& trace, int m, double f0);
HalfSpaceProjection project_to_halfspace(const PolarField& v, double f0);

// L1(dB1) distance between a trace and a half-space trace.
double sphere_l1_distance(const AngularRule& ang, const std::vector<double>& trace, int m,
                          const HalfSpaceSolution& H);

struct DecayFit {
  double alpha_G = 0, alpha_L = 0;
  double kappa_hat = 0;     // alpha_G / (n + 2 + alpha_G)
  double consistency = 0;   // |alpha_L - alpha_G/2| / alpha_L
  bool decay_confirmed = false;
};

// Pure fitting core (usable on synthetic data): log-log slopes of G and d.
DecayFit fit_decay(const std::vector<double>& radii, const std::vector<double>& G,
                   const std::vector<double>& d, int n);

struct DecayReport {
  std::vector<double> radii, W, G, d;
  double W0 = 0;
  DecayFit fit;
  bool already_homogeneous = false;  // G at noise level across the ladder
  bool monotonicity_violation = false;
  HalfSpaceSolution reference;
};

// Energy-gap and sphere-distance decay at a Regular point. The ladder must
// span >= 1.5 decades above 8h. u0 defaults to the H projection of the
// blow-up at the smallest radius.
DecayReport decay_measurement(const VectorField& u, const Nonlinearity& N, const Point& x0,
                              const std::vector<double>& radii,
                              const HalfSpaceSolution* u0 = nullptr, double tau_class = 0.05);

}  // namespace fbreg
