#include "doctest.h"
#include "fbreg/blowup.hpp"

using namespace fbreg;

namespace {

VectorField sampled_halfspace(double half, double h) {
  Grid g = make_centered_grid(2, half, h);
  VectorField u(g, 1);
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  u.fill([&H](const Point& x) { return H.eval(x); });
  return u;
}

PolarField halfspace_polar(double f0 = 1.0, int m = 1) {
  VecM e(m);
  e[0] = 1.0;
  const HalfSpaceSolution H(2, Point{0, 1, 0}, e, f0);
  return polar_from_probe(probe_of(H), 32, 360);
}

}  // namespace

TEST_CASE("rescaling a 2-homogeneous field is r-independent") {
  const VectorField u = sampled_halfspace(2.0, 1.0 / 128);
  const BlowupField a = rescale(u, Point{0, 0, 0}, 0.3);
  const BlowupField b = rescale(u, Point{0, 0, 0}, 0.6);
  REQUIRE(a.polar.values.size() == b.polar.values.size());
  double worst = 0;
  for (size_t i = 0; i < a.polar.values.size(); ++i)
    worst = std::max(worst, std::abs(a.polar.values[i] - b.polar.values[i]));
  CHECK(worst < 1e-4);  // interpolation tolerance near the kink
  // and matches the analytic trace extension
  const PolarField exact = halfspace_polar();
  // compare on the common angular rule size
  REQUIRE(a.polar.nang() == 256);
}

TEST_CASE("rescale composes: blow-up of a blow-up") {
  const VectorField u = sampled_halfspace(2.0, 1.0 / 128);
  // u_{x0, r rho} sampled directly vs rescaling u_{x0, r} by rho
  const double r = 0.8, rho = 0.5;
  const BlowupField direct = rescale(u, Point{0, 0, 0}, r * rho);
  const FieldProbe p = probe_of(u);
  FieldProbe outer;
  outer.n = 2;
  outer.m = 1;
  outer.value = [&p, r](const Point& x) {
    return (1.0 / (r * r)) * p.value(Point{r * x[0], r * x[1], 0});
  };
  outer.gradient = [&p, r](const Point& x, double* g) {
    p.gradient(Point{r * x[0], r * x[1], 0}, g);
    g[0] /= r;
    g[1] /= r;
  };
  Grid unit = make_centered_grid(2, 1.0, 1.0 / 128);  // hull bookkeeping only
  const BlowupField outer_scaled = rescale(outer, unit, Point{0, 0, 0}, rho);
  double worst = 0;
  for (size_t i = 0; i < direct.polar.values.size(); ++i)
    worst = std::max(worst, std::abs(direct.polar.values[i] - outer_scaled.polar.values[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("rescale rejects balls leaving the hull") {
  const VectorField u = sampled_halfspace(1.0, 1.0 / 32);
  CHECK_THROWS_AS(rescale(u, Point{0.5, 0, 0}, 0.6), DomainError);
}

TEST_CASE("homogeneity defect: zero for cones, known value for |x|^3") {
  CHECK(homogeneity_defect(halfspace_polar()) < 1e-10);
  FieldProbe cubic;
  cubic.n = 2;
  cubic.m = 1;
  cubic.value = [](const Point& x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    return VecM{r * r * r};
  };
  cubic.gradient = [](const Point& x, double* g) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    g[0] = 3.0 * r * x[0];
    g[1] = 3.0 * r * x[1];
  };
  const PolarField v = polar_from_probe(cubic, 32, 256);
  // int |3 rho^3 - 2 rho^3| = int rho^3 = 2 pi / 5; int |v| = 2 pi / 5 > 1
  CHECK(homogeneity_defect(v) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("homogeneity defect is invariant under positive scaling") {
  PolarField v = halfspace_polar();
  // tilt the field so the defect is nonzero, then scale
  for (size_t i = 0; i < v.values.size(); ++i) v.values[i] += 0.01;
  PolarField w = v;
  for (double& x : w.values) x *= 7.0;
  for (double& x : w.gradients) x *= 7.0;
  for (double& x : w.trace) x *= 7.0;
  const double dv = homogeneity_defect(v);
  CHECK(dv > 0);
  // scale-free once the normalizing integral exceeds 1
  PolarField v2 = v, w2 = w;
  for (double& x : v2.values) x *= 50.0;
  for (double& x : v2.gradients) x *= 50.0;
  for (double& x : w2.values) x *= 50.0;
  for (double& x : w2.gradients) x *= 50.0;
  CHECK(homogeneity_defect(v2) == doctest::Approx(homogeneity_defect(w2)).epsilon(1e-10));
}

TEST_CASE("projection recovers exact half-space traces") {
  const double inv = std::sqrt(0.5);
  VecM e(2);
  e[0] = 0.28;
  e[1] = -0.96;
  const HalfSpaceSolution H(2, Point{inv, inv, 0}, e, 1.0);
  const PolarField v = polar_from_probe(probe_of(H), 32, 512);
  const HalfSpaceProjection proj = project_to_halfspace(v, 1.0);
  CHECK(dotn(proj.nu, H.nu, 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(proj.e[0] == doctest::Approx(0.28).epsilon(1e-6));
  CHECK(proj.e[1] == doctest::Approx(-0.96).epsilon(1e-6));
  CHECK(proj.residual_constrained < 1e-5);
  CHECK(proj.residual_free < 1e-5);
}

TEST_CASE("projection absorbs a negated component direction into e") {
  VecM e(2);
  e[0] = -1.0;
  const HalfSpaceSolution H(2, Point{0, 1, 0}, e, 1.0);
  const PolarField v = polar_from_probe(probe_of(H), 32, 512);
  const HalfSpaceProjection proj = project_to_halfspace(v, 1.0);
  CHECK(proj.e[0] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(proj.residual_constrained < 1e-5);
}

TEST_CASE("projection of a perturbed trace keeps nu within a degree") {
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  FieldProbe p;
  p.n = 2;
  p.m = 1;
  p.value = [H](const Point& x) {
    const double th = std::atan2(x[1], x[0]);
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    return VecM{H.eval(x)[0] + 0.05 * rho2 * std::cos(2.0 * th)};
  };
  p.gradient = [](const Point&, double* g) { g[0] = g[1] = 0; };  // unused by projection
  const PolarField v = polar_from_probe(p, 16, 720);
  const HalfSpaceProjection proj = project_to_halfspace(v, 1.0);
  CHECK(std::abs(std::atan2(proj.nu[0], proj.nu[1])) < M_PI / 180.0);
  CHECK(proj.residual_free == doctest::Approx(0.05 * std::sqrt(M_PI)).epsilon(0.1));
}

TEST_CASE("projection of the zero field is refused") {
  PolarField z = halfspace_polar();
  std::fill(z.values.begin(), z.values.end(), 0.0);
  std::fill(z.trace.begin(), z.trace.end(), 0.0);
  CHECK_THROWS_AS(project_to_halfspace(z, 1.0), InputError);
}

TEST_CASE("projection residual is invariant under a quarter-turn of the trace") {
  // rotating both the field and the search problem by 90 degrees is exact
  VecM e(2);
  e[0] = 0.6;
  e[1] = 0.8;
  const HalfSpaceSolution H1(2, Point{0, 1, 0}, e, 1.0);
  const HalfSpaceSolution H2(2, Point{-1, 0, 0}, e, 1.0);
  FieldProbe p1 = probe_of(H1), p2 = probe_of(H2);
  auto perturb1 = [p1](const Point& x) {
    const double th = std::atan2(x[1], x[0]);
    VecM v = p1.value(x);
    v[0] += 0.03 * (x[0] * x[0] + x[1] * x[1]) * std::cos(3.0 * th);
    return v;
  };
  auto perturb2 = [p2](const Point& x) {
    const double th = std::atan2(x[1], x[0]);
    VecM v = p2.value(x);
    v[0] += 0.03 * (x[0] * x[0] + x[1] * x[1]) * std::cos(3.0 * (th - M_PI / 2.0));
    return v;
  };
  FieldProbe q1, q2;
  q1.n = q2.n = 2;
  q1.m = q2.m = 2;
  q1.value = perturb1;
  q2.value = perturb2;
  q1.gradient = q2.gradient = [](const Point&, double* g) { for (int i = 0; i < 4; ++i) g[i] = 0; };
  const auto r1 = project_to_halfspace(polar_from_probe(q1, 8, 512), 1.0);
  const auto r2 = project_to_halfspace(polar_from_probe(q2, 8, 512), 1.0);
  CHECK(r1.residual_free == doctest::Approx(r2.residual_free).epsilon(1e-10));
}

TEST_CASE("decay fit inverts the exponent relation") {
  const auto radii = radii_ladder(0.02, 12);
  std::vector<double> G(radii.size()), d(radii.size());
  for (size_t i = 0; i < radii.size(); ++i) {
    G[i] = std::pow(radii[i], 4.0);
    d[i] = std::pow(radii[i], 2.0);
  }
  const DecayFit fit = fit_decay(radii, G, d, 2);
  CHECK(fit.alpha_G == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(fit.alpha_L == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.kappa_hat == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.consistency == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit.decay_confirmed);
}

TEST_CASE("decay measurement reports the exact half space as already homogeneous") {
  const double h = 1.0 / 128;
  const VectorField u = sampled_halfspace(2.125, h);
  const auto radii = radii_ladder(8.0 * h, 11);  // spans 2^5 > 1.5 decades
  const DecayReport rep = decay_measurement(u, make_nonlinearity(Family::Linear, {1.0}),
                                            Point{0, 0, 0}, radii);
  CHECK(rep.already_homogeneous);
}
