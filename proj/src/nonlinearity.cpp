#include "fbreg/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace fbreg {

const char* family_name(Family f) {
  switch (f) {
    case Family::Linear: return "linear";
    case Family::AffineQuadratic: return "affine-quadratic";
    case Family::ExpSaturating: return "exp-saturating";
    case Family::CustomTable: return "custom-table";
  }
  return "?";
}

namespace {

// PCHIP (Fritsch-Carlson) slopes: monotone data give a monotone interpolant,
// which keeps F'' >= 0 wherever the samples are nondecreasing.
std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& y) {
  const size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n == 1) return d;
  std::vector<double> delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2 * (t[i + 1] - t[i]) + (t[i] - t[i - 1]);
      const double w2 = (t[i + 1] - t[i]) + 2 * (t[i] - t[i - 1]);
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return d;
}

struct HermiteEval {
  double value, deriv;
};

HermiteEval hermite(double t0, double t1, double y0, double y1, double d0, double d1, double s) {
  const double h = t1 - t0;
  const double x = (s - t0) / h;
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
  const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
  const double g00 = (6 * x2 - 6 * x) / h, g10 = (3 * x2 - 4 * x + 1) / h;
  const double g01 = (-6 * x2 + 6 * x) / h, g11 = (3 * x2 - 2 * x) / h;
  return {h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1,
          g00 * y0 + g10 * h * d0 + g01 * y1 + g11 * h * d1};
}

// Integral of a Hermite segment from t0 to s.
double hermite_integral(double t0, double t1, double y0, double y1, double d0, double d1,
                        double s) {
  const double h = t1 - t0;
  const double x = (s - t0) / h;
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  const double H00 = x4 / 2 - x3 + x;             // int h00
  const double H10 = x4 / 4 - 2 * x3 / 3 + x2 / 2;  // int h10
  const double H01 = -x4 / 2 + x3;
  const double H11 = x4 / 4 - x3 / 3;
  return h * (H00 * y0 + H10 * h * d0 + H01 * y1 + H11 * h * d1);
}

}  // namespace

double Nonlinearity::base_dF(double s) const {
  switch (family) {
    case Family::Linear: return 2.0 * lambda;
    case Family::AffineQuadratic: return 2.0 * aq_a + 2.0 * aq_b * s;
    case Family::ExpSaturating:
      return 2.0 * es_C0 - 2.0 * (es_C0 - es_c0) * std::exp(-2.0 * s);
    case Family::CustomTable: {
      if (s <= tab_t.front()) return tab_dF.front();
      if (s >= tab_t.back()) return tab_dF.back();
      const size_t i = static_cast<size_t>(
          std::upper_bound(tab_t.begin(), tab_t.end(), s) - tab_t.begin() - 1);
      return hermite(tab_t[i], tab_t[i + 1], tab_dF[i], tab_dF[i + 1], tab_slope[i],
                     tab_slope[i + 1], s)
          .value;
    }
  }
  return 0;
}

double Nonlinearity::base_F(double s) const {
  switch (family) {
    case Family::Linear: return 2.0 * lambda * s;
    case Family::AffineQuadratic: return 2.0 * aq_a * s + aq_b * s * s;
    case Family::ExpSaturating:
      // -expm1(-2s) = 1 - e^{-2s} without cancellation near s = 0
      return 2.0 * es_C0 * s + (es_C0 - es_c0) * std::expm1(-2.0 * s);
    case Family::CustomTable: {
      if (s <= 0) return 0.0;
      if (s >= tab_t.back())
        return tab_Fint.back() + tab_dF.back() * (s - tab_t.back());
      const size_t i = static_cast<size_t>(
          std::upper_bound(tab_t.begin(), tab_t.end(), s) - tab_t.begin() - 1);
      return tab_Fint[i] + hermite_integral(tab_t[i], tab_t[i + 1], tab_dF[i], tab_dF[i + 1],
                                            tab_slope[i], tab_slope[i + 1], s);
    }
  }
  return 0;
}

double Nonlinearity::base_d2F(double s) const {
  switch (family) {
    case Family::Linear: return 0.0;
    case Family::AffineQuadratic: return 2.0 * aq_b;
    case Family::ExpSaturating: return 4.0 * (es_C0 - es_c0) * std::exp(-2.0 * s);
    case Family::CustomTable: {
      if (s <= tab_t.front() || s >= tab_t.back()) return 0.0;
      const size_t i = static_cast<size_t>(
          std::upper_bound(tab_t.begin(), tab_t.end(), s) - tab_t.begin() - 1);
      return hermite(tab_t[i], tab_t[i + 1], tab_dF[i], tab_dF[i + 1], tab_slope[i],
                     tab_slope[i + 1], s)
          .deriv;
    }
  }
  return 0;
}

double Nonlinearity::F(double s) const {
  if (rescale_s > 0) {
    const double s2 = rescale_s * rescale_s;
    return base_F(s2 * s) / s2;
  }
  return base_F(s);
}

double Nonlinearity::dF(double s) const {
  if (rescale_s > 0) return base_dF(rescale_s * rescale_s * s);
  return base_dF(s);
}

double Nonlinearity::d2F(double s) const {
  if (rescale_s > 0) {
    const double s2 = rescale_s * rescale_s;
    return s2 * base_d2F(s2 * s);
  }
  return base_d2F(s);
}

Nonlinearity Nonlinearity::rescaled(double s) const {
  if (!(s > 0)) throw InputError("rescaled: scaling parameter must be > 0");
  Nonlinearity out = *this;
  out.rescale_s = (rescale_s > 0) ? rescale_s * s : s;
  return out;
}

Nonlinearity Nonlinearity::limit_s0() const {
  Nonlinearity out;
  out.family = Family::Linear;
  out.lambda = f0();
  out.c0 = out.C0 = out.lambda;
  out.s_max = s_max;
  return out;
}

Nonlinearity make_nonlinearity(Family family, const std::vector<double>& params, double s_max,
                               double declared_c0, double declared_C0) {
  if (!(s_max > 0)) throw InputError("make_nonlinearity: s_max must be > 0");
  Nonlinearity N;
  N.family = family;
  N.s_max = s_max;
  switch (family) {
    case Family::Linear: {
      if (params.size() != 1 || !(params[0] > 0))
        throw InputError("linear family needs params = {lambda} with lambda > 0");
      N.lambda = params[0];
      N.c0 = N.C0 = N.lambda;
      break;
    }
    case Family::AffineQuadratic: {
      if (params.size() != 2 || !(params[0] > 0) || params[1] < 0)
        throw InputError("affine-quadratic family needs params = {a, b}, a > 0, b >= 0");
      N.aq_a = params[0];
      N.aq_b = params[1];
      N.c0 = N.aq_a;
      // f <= a + b*s_max and F'' = 2b on the validated range
      N.C0 = std::max(N.aq_a + N.aq_b * s_max, 2.0 * N.aq_b);
      break;
    }
    case Family::ExpSaturating: {
      if (params.size() != 2 || !(params[0] > 0) || params[1] < params[0])
        throw InputError("exp-saturating family needs params = {c0, C0}, 0 < c0 <= C0");
      N.es_c0 = params[0];
      N.es_C0 = params[1];
      N.c0 = N.es_c0;
      // F''(0) = 4 (C0 - c0) can exceed the f-cap; the declared bound covers both.
      N.C0 = std::max(N.es_C0, 4.0 * (N.es_C0 - N.es_c0));
      break;
    }
    case Family::CustomTable:
      throw InputError("custom-table: use make_custom_table");
  }
  if (declared_c0 >= 0) N.c0 = declared_c0;
  if (declared_C0 >= 0) N.C0 = declared_C0;
  return N;
}

Nonlinearity make_nonlinearity(const std::string& family, const std::vector<double>& params,
                               double s_max, double declared_c0, double declared_C0) {
  Family f;
  if (family == "linear")
    f = Family::Linear;
  else if (family == "affine-quadratic")
    f = Family::AffineQuadratic;
  else if (family == "exp-saturating")
    f = Family::ExpSaturating;
  else
    throw InputError("unknown nonlinearity family: " + family);
  return make_nonlinearity(f, params, s_max, declared_c0, declared_C0);
}

Nonlinearity make_custom_table(const std::vector<double>& t, const std::vector<double>& dF,
                               double s_max) {
  if (t.size() != dF.size() || t.size() < 2)
    throw InputError("custom-table: need >= 2 matching (t, F') samples");
  if (t.front() != 0.0) throw InputError("custom-table: first sample must be at t = 0");
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    if (!(t[i + 1] > t[i])) throw InputError("custom-table: t samples must increase");
    if (dF[i + 1] < dF[i])
      throw InputError("custom-table: F' samples must be nondecreasing (F'' >= 0)");
  }
  if (!(dF.front() > 0)) throw InputError("custom-table: F'(0) must be > 0 (non-degenerate)");
  Nonlinearity N;
  N.family = Family::CustomTable;
  N.tab_t = t;
  N.tab_dF = dF;
  N.tab_slope = pchip_slopes(t, dF);
  N.tab_Fint.assign(t.size(), 0.0);
  for (size_t i = 0; i + 1 < t.size(); ++i)
    N.tab_Fint[i + 1] = N.tab_Fint[i] + hermite_integral(t[i], t[i + 1], dF[i], dF[i + 1],
                                                         N.tab_slope[i], N.tab_slope[i + 1],
                                                         t[i + 1]);
  N.s_max = (s_max > 0) ? s_max : t.back();
  N.c0 = 0.5 * dF.front();
  N.C0 = 0.5 * dF.back();
  // scan F'' for the declared upper bound
  double d2 = 0;
  for (int i = 0; i <= 1000; ++i) d2 = std::max(d2, N.d2F(N.s_max * i / 1000.0));
  N.C0 = std::max(N.C0, d2);
  return N;
}

ValidationReport validate_nonlinearity(const Nonlinearity& N, double s_max, int samples) {
  if (!(s_max > 0) || samples < 2)
    throw InputError("validate_nonlinearity: need s_max > 0 and samples >= 2");
  ValidationReport rep;
  rep.f_min = rep.f_max = N.f(0.0);
  rep.d2F_min = rep.d2F_max = N.d2F(0.0);
  auto fail = [&rep](const std::string& what) {
    rep.pass = false;
    if (rep.failures.empty() || rep.failures.back() != what) rep.failures.push_back(what);
  };
  if (std::abs(N.F(0.0)) > 1e-14) fail("F(0) = 0");
  const double f0 = N.f0();
  for (int i = 0; i < samples; ++i) {
    const double s = s_max * i / (samples - 1);
    const double fs = N.f(s), d2 = N.d2F(s), Fs = N.F(s);
    rep.f_min = std::min(rep.f_min, fs);
    rep.f_max = std::max(rep.f_max, fs);
    rep.d2F_min = std::min(rep.d2F_min, d2);
    rep.d2F_max = std::max(rep.d2F_max, d2);
    const double tol = 1e-12 * (1.0 + std::abs(fs));
    if (fs < N.c0 - tol) fail("c0 <= f(s)");
    if (fs > N.C0 + tol) fail("f(s) <= C0");
    if (d2 < -1e-12) fail("0 <= F''(s)");
    if (d2 > N.C0 + 1e-12) fail("F''(s) <= C0");
    const double ftol = 1e-12 * (1.0 + std::abs(Fs));
    if (Fs < 2.0 * f0 * s - ftol) fail("2 f(0) s <= F(s)");
    if (Fs > 2.0 * fs * s + ftol) fail("F(s) <= 2 f(s) s");
  }
  return rep;
}

}  // namespace fbreg
