#include <random>

#include "doctest.h"
#include "fbreg/weiss.hpp"

using namespace fbreg;

namespace {

Nonlinearity linear1() { return make_nonlinearity(Family::Linear, {1.0}); }

FieldProbe halfspace_probe(int n, double f0 = 1.0) {
  Point nu{0, 0, 0};
  nu[static_cast<size_t>(n - 1)] = 1.0;
  const HalfSpaceSolution H(n, nu, VecM{1.0}, f0);
  return probe_of(H);  // captured by value
}

}  // namespace

TEST_CASE("alpha_n closed forms") {
  CHECK(alpha_n(2, 1.0) == doctest::Approx(M_PI / 8.0).epsilon(1e-15));
  CHECK(alpha_n(3, 1.0) == doctest::Approx(2.0 * M_PI / 15.0).epsilon(1e-15));
  CHECK(alpha_n(2, 2.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  // both closed forms agree: f0^2 |dB1| / (2n(n+2)) = f0^2 |B1| / (2(n+2))
  for (int n : {1, 2, 3}) {
    const double via_sphere = unit_sphere_area(n) / (2.0 * n * (n + 2));
    CHECK(std::abs(via_sphere - alpha_n(n, 1.0)) < 1e-14);
  }
}

TEST_CASE("Weiss energy of the exact half space is alpha_n/2, r-independent") {
  const Nonlinearity N = linear1();
  const FieldProbe p = halfspace_probe(2);
  for (double r : {0.2, 0.5, 0.8}) {
    const BallQuadrature Q = ball_quadrature_free(2, Point{0.3, 0, 0}, r, 64, 512);
    CHECK(weiss_energy(p, N, Q) == doctest::Approx(M_PI / 16.0).epsilon(1e-4));
  }
  // n = 3: alpha_3 / 2 = pi/15
  const FieldProbe p3 = halfspace_probe(3);
  const BallQuadrature Q3 = ball_quadrature_free(3, Point{0, 0, 0}, 0.6, 64, 0);
  CHECK(weiss_energy(p3, N, Q3) == doctest::Approx(M_PI / 15.0).epsilon(2e-4));
}

TEST_CASE("Weiss energy of the zero field vanishes") {
  FieldProbe z;
  z.n = 2;
  z.m = 1;
  z.value = [](const Point&) { return VecM{0.0}; };
  z.gradient = [](const Point&, double* g) { g[0] = g[1] = 0; };
  const BallQuadrature Q = ball_quadrature_free(2, Point{0, 0, 0}, 0.5);
  CHECK(weiss_energy(z, linear1(), Q) == 0.0);
}

TEST_CASE("H functional: scale-invariant for linear F, monotone in s for convex F") {
  const PolarField v = polar_from_probe(halfspace_probe(2), 48, 512);
  const Nonlinearity lin = linear1();
  for (double s : {1e-3, 1e-2, 0.5, 1.0})
    CHECK(functional_H(v, lin, s) == doctest::Approx(M_PI / 16.0).epsilon(1e-4));
  CHECK(std::abs(functional_H(v, lin, 0.7) - functional_H(v, lin, 1e-3)) < 1e-10);

  const Nonlinearity es = make_nonlinearity(Family::ExpSaturating, {1.0, 4.0});
  double prev = -1e300;
  for (double s : {1e-3, 1e-2, 0.1, 0.3, 1.0}) {
    const double H = functional_H(v, es, s);
    CHECK(H >= prev - 1e-12);
    prev = H;
  }
}

TEST_CASE("M functional values") {
  const PolarField v2 = polar_from_probe(halfspace_probe(2), 48, 512);
  CHECK(functional_M(v2, 1.0) == doctest::Approx(M_PI / 16.0).epsilon(1e-4));
  const PolarField v3 = polar_from_probe(halfspace_probe(3), 48, 0);
  CHECK(functional_M(v3, 1.0) == doctest::Approx(2.0 * M_PI / 30.0).epsilon(2e-4));
  PolarField z = v2;
  std::fill(z.values.begin(), z.values.end(), 0.0);
  std::fill(z.gradients.begin(), z.gradients.end(), 0.0);
  std::fill(z.trace.begin(), z.trace.end(), 0.0);
  CHECK(functional_M(z, 1.0) == 0.0);
  // M = lim_{s -> 0} H: the gap closes as s^2 for smooth F
  const Nonlinearity es = make_nonlinearity(Family::ExpSaturating, {1.0, 4.0});
  const double M = functional_M(v2, 1.0);
  double prev_gap = 1e300;
  for (double s : {1e-1, 1e-2, 1e-3}) {
    const double gap = std::abs(functional_H(v2, es, s) - M);
    CHECK(gap < prev_gap + 1e-14);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-5);
}

TEST_CASE("monotonicity audit on the exact sampled half space") {
  const double h = 1.0 / 128;
  Grid g = make_centered_grid(2, 2.0, h);
  VectorField u(g, 1);
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  u.fill([&H](const Point& x) { return H.eval(x); });
  const auto radii = radii_ladder(0.25, 6);
  const WeissReport rep = monotonicity_audit(u, linear1(), Point{0, 0, 0}, radii);
  for (size_t j = 0; j < rep.r.size(); ++j) {
    CHECK(std::abs(rep.W[j] - M_PI / 16.0) < 2e-3);
    CHECK(std::abs(rep.dWdr[j]) < 1e-3);
    CHECK(std::abs(rep.T1[j]) < 1e-3);
    CHECK(std::abs(rep.T2[j]) < 1e-12);  // F's - F = 0 pointwise for linear F
    CHECK(rep.T1[j] >= 0.0);
  }
  CHECK(rep.violations.empty());
}

TEST_CASE("monotonicity audit of the zero field is identically zero") {
  Grid g = make_centered_grid(2, 2.0, 1.0 / 64);
  VectorField u(g, 1);
  const WeissReport rep = monotonicity_audit(u, linear1(), Point{0, 0, 0}, radii_ladder(0.2, 6));
  for (size_t j = 0; j < rep.r.size(); ++j) {
    CHECK(rep.W[j] == 0.0);
    CHECK(rep.T1[j] == 0.0);
    CHECK(rep.T2[j] == 0.0);
  }
}

TEST_CASE("audit preconditions") {
  Grid g = make_centered_grid(2, 1.0, 1.0 / 32);
  VectorField u(g, 1);
  CHECK_THROWS_AS(monotonicity_audit(u, linear1(), Point{0, 0, 0}, {0.1, 0.2, 0.3, 0.4, 0.5}),
                  InputError);  // too few radii
  CHECK_THROWS_AS(
      monotonicity_audit(u, linear1(), Point{0, 0, 0}, {0.01, 0.2, 0.3, 0.4, 0.5, 0.6}),
      DomainError);  // below the 8h floor
}

TEST_CASE("density fit recovers synthetic power laws") {
  const auto radii = radii_ladder(0.05, 7);  // up to 0.4
  std::vector<double> W(radii.size());
  for (size_t j = 0; j < radii.size(); ++j) W[j] = 0.19635 + 0.5 * radii[j] * radii[j];
  const DensityFit fit = density_limit(radii, W);
  CHECK(fit.W0 == doctest::Approx(0.19635).epsilon(1e-6));
  CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.01));
  CHECK_FALSE(fit.low_confidence);

  std::vector<double> Wc(radii.size(), 0.42);
  const DensityFit cfit = density_limit(radii, Wc);
  CHECK(cfit.W0 == doctest::Approx(0.42).epsilon(1e-10));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> noise(-1e-5, 1e-5);
  std::vector<double> Wn(radii.size());
  for (size_t j = 0; j < radii.size(); ++j) Wn[j] = W[j] + noise(rng);
  const DensityFit nfit = density_limit(radii, Wn);
  CHECK(std::abs(nfit.W0 - 0.19635) < 1e-4);
}

TEST_CASE("classification thresholds") {
  const double a = alpha_n(2, 1.0);
  CHECK(classify_from_density(0.01 * a, a, 0.05) == PointClass::Trivial);
  CHECK(classify_from_density(0.5 * a, a, 0.05) == PointClass::Regular);
  CHECK(classify_from_density(0.52 * a, a, 0.05) == PointClass::Regular);
  CHECK(classify_from_density(a, a, 0.05) == PointClass::NonRegular);
}

TEST_CASE("classify_point on a flat boundary and deep inside the zero set") {
  const double h = 1.0 / 64;
  Grid g = make_centered_grid(2, 2.0, h);
  VectorField u(g, 1);
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  u.fill([&H](const Point& x) { return H.eval(x); });
  const Nonlinearity N = linear1();
  const auto radii = radii_ladder(12.0 * h, 6);  // up to ~1.06
  const Classification flat = classify_point(u, N, Point{0, 0, 0}, radii);
  CHECK(flat.cls == PointClass::Regular);
  CHECK(flat.W0 == doctest::Approx(M_PI / 16.0).epsilon(0.01));
  // a point well inside {u = 0}: W vanishes on the rungs inside the zero set
  const Classification deep = classify_point(u, N, Point{0, -0.8, 0}, radii);
  CHECK(deep.cls == PointClass::Trivial);
  // the gradient precondition rejects non-Gamma_0 candidates
  CHECK_THROWS_AS(classify_point(u, N, Point{0, 0.5, 0}, radii), InputError);
}

TEST_CASE("domain variation residual: zero field and half-space refinement order") {
  const Nonlinearity N = linear1();
  {
    Grid g = make_centered_grid(2, 1.0, 1.0 / 32);
    VectorField u(g, 1);
    const auto xi = radial_bump_xi(2, Point{0, 0, 0}, 0.8);
    CHECK(domain_variation_residual(u, N, xi) == 0.0);
  }
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  std::vector<double> res;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    Grid g = make_centered_grid(2, 1.0, h);
    VectorField u(g, 1);
    u.fill([&H](const Point& x) { return H.eval(x); });
    const auto xi = radial_bump_xi(2, Point{0, 0, 0}, 0.8);
    res.push_back(domain_variation_residual(u, N, xi));
  }
  const double order = std::log2(res[0] / res[2]) / 2.0;
  CHECK(order >= 1.0);
  CHECK(res[2] < res[0]);
}

TEST_CASE("domain variation rejects xi touching the hull") {
  Grid g = make_centered_grid(2, 1.0, 1.0 / 16);
  VectorField u(g, 1);
  const auto xi = radial_bump_xi(2, Point{0, 0, 0}, 1.05);
  CHECK_THROWS_AS(domain_variation_residual(u, linear1(), xi), DomainError);
}

TEST_CASE("radii ladder is geometric with ratio sqrt(2)") {
  const auto r = radii_ladder(0.1, 5);
  for (size_t j = 1; j < r.size(); ++j)
    CHECK(r[j] / r[j - 1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}
