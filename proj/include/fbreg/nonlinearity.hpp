#pragma once

#include <string>
#include <vector>

#include "fbreg/common.hpp"

namespace fbreg {

// Convex nonlinearities F: [0,inf) -> R with F(0) = 0, f = F'/2 bounded
// between c0 and C0 and 0 <= F'' <= C0 on a declared range [0, s_max].
// A positive rescale factor sigma turns the object into the rescaled family
// F_sigma(t) = F(sigma^2 t)/sigma^2 with f_sigma(t) = f(sigma^2 t); the class
// is closed under rescaling.
enum class Family { Linear, AffineQuadratic, ExpSaturating, CustomTable };

const char* family_name(Family f);

struct Nonlinearity {
  Family family = Family::Linear;
  double lambda = 1.0;            // linear: F(s) = 2*lambda*s
  double aq_a = 1.0, aq_b = 0.0;  // affine-quadratic: F(s) = 2*a*s + b*s^2
  double es_c0 = 1.0, es_C0 = 1.0;  // exp-saturating f-range

  // custom table: PCHIP interpolant of F' through (t[i], dF[i]), dF nondecreasing
  std::vector<double> tab_t, tab_dF, tab_slope, tab_Fint;

  double rescale_s = 0.0;  // 0: plain F; >0: F_{rescale_s}

  double c0 = 1.0, C0 = 1.0;  // declared assumption bounds
  double s_max = 10.0;        // validated range

  double F(double s) const;
  double dF(double s) const;   // F'
  double d2F(double s) const;  // F''
  double f(double s) const { return 0.5 * dF(s); }
  double f0() const { return f(0.0); }

  // F_{s} of this family; composes multiplicatively with an existing rescale.
  Nonlinearity rescaled(double s) const;
  // The s -> 0 limit F_0(t) = 2 f(0) t (a linear family).
  Nonlinearity limit_s0() const;

 private:
  double base_F(double s) const;
  double base_dF(double s) const;
  double base_d2F(double s) const;
};

// Factory for the built-in families.
//   linear:           params = {lambda},       lambda > 0
//   affine-quadratic: params = {a, b},         a > 0, b >= 0
//   exp-saturating:   params = {c0, C0},       0 < c0 <= C0
// Declared bounds default to the tightest constants valid on [0, s_max];
// pass declared_c0/C0 >= 0 to override (validation then reports against them).
Nonlinearity make_nonlinearity(Family family, const std::vector<double>& params,
                               double s_max = 10.0, double declared_c0 = -1.0,
                               double declared_C0 = -1.0);

Nonlinearity make_nonlinearity(const std::string& family, const std::vector<double>& params,
                               double s_max = 10.0, double declared_c0 = -1.0,
                               double declared_C0 = -1.0);

// Custom table from F' samples; t must increase from 0 and dF be nondecreasing.
Nonlinearity make_custom_table(const std::vector<double>& t, const std::vector<double>& dF,
                               double s_max = -1.0);

struct ValidationReport {
  bool pass = true;
  double f_min = 0, f_max = 0;
  double d2F_min = 0, d2F_max = 0;
  std::vector<std::string> failures;  // one entry per violated bound
};

// Samples f, F'' and the convexity inequalities 2 f(0) s <= F(s) <= 2 f(s) s
// on a uniform grid over [0, s_max] and checks assumption set (1.3)-style
// bounds against the declared c0, C0. Failures are report entries, not errors.
ValidationReport validate_nonlinearity(const Nonlinearity& N, double s_max, int samples);

}  // namespace fbreg
