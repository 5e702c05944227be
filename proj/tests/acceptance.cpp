// Acceptance suite: every criterion as an executable check with its stated
// tolerance, one pass/fail line each. Solved fields are shared across
// criteria; each check prints the measured numbers it judged.
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <thread>
#include <vector>

#include "fbreg/blowup.hpp"
#include "fbreg/epiperimetric.hpp"
#include "fbreg/freeboundary.hpp"
#include "fbreg/io.hpp"
#include "fbreg/oracle.hpp"
#include "fbreg/solver.hpp"
#include "fbreg/spectral.hpp"
#include "fbreg/threads.hpp"
#include "fbreg/weiss.hpp"

using namespace fbreg;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail,
            double seconds) {
  std::printf("[%s] C%02d %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return std::string(buf);
}

Nonlinearity linear1() { return make_nonlinearity(Family::Linear, {1.0}); }
Nonlinearity expsat14() { return make_nonlinearity(Family::ExpSaturating, {1.0, 4.0}); }

VecM unit_e2() {
  VecM e(2);
  e[0] = 0.6;
  e[1] = 0.8;
  return e;
}

VectorField boundary_from(const Grid& g, int m, const std::function<VecM(const Point&)>& fn) {
  VectorField u(g, m);
  u.mask_hull();
  u.fill_boundary(fn);
  return u;
}

// solved fields shared by several criteria
struct Lab {
  // flat linear configuration on [-2,2]^2, h = 1/128
  VectorField flat;
  // exp-saturating configuration, same grid
  VectorField expf;
  // curved free boundary (linear F, parabolic data) on [-2.125,2.125]^2
  VectorField curved;
  double h = 1.0 / 128.0;

  Point flat_fb, expf_fb, curved_fb;  // Gamma_0 extraction points nearest 0
};

Point nearest_gamma0(const VectorField& u, double f0, const Point& target) {
  const FreeBoundarySet fb =
      extract(u, default_theta_pos(f0, u.grid.h), default_theta_grad(f0, u.grid.h));
  double best = 1e300;
  Point out{0, 0, 0};
  bool found = false;
  for (const auto& p : fb.points) {
    if (!p.degenerate) continue;
    double d2 = 0;
    for (int a = 0; a < u.grid.n; ++a) {
      const double d = p.x[static_cast<size_t>(a)] - target[static_cast<size_t>(a)];
      d2 += d * d;
    }
    if (d2 < best) {
      best = d2;
      out = p.x;
      found = true;
    }
  }
  if (!found) throw InputError("acceptance: no Gamma_0 points extracted");
  return out;
}

Lab solve_lab() {
  // warm starts: interiors filled from cheap references of the expected
  // profile (the minimizer is unique, so the start only buys iterations; the
  // uniqueness criterion checks init-independence separately)
  Lab lab;
  const HalfSpaceSolution H(2, Point{0, 1, 0}, unit_e2(), 1.0);
  {
    Grid g = make_centered_grid(2, 2.0, lab.h);
    VectorField bf = boundary_from(g, 2, [&H](const Point& x) { return H.eval(x); });
    bf.fill([&H](const Point& x) { return H.eval(x); });
    bf.fill_boundary([&H](const Point& x) { return H.eval(x); });
    lab.flat = minimize(bf, linear1()).first;

    // exp-saturating configuration: the boundary data is the trace of the
    // 1-D exp profile itself (zero below its contact point, so the side
    // walls cannot bridge the support), free boundary near x2 = 0
    const VectorField prof = reference_solve_1d(expsat14(), -2.0, 2.0, 0.0, 4.5, lab.h, 4);
    auto exp_data = [&prof](const Point& x) {
      const double U = interpolate(prof, Point{x[1], 0, 0})[0];
      VecM v(2);
      v[0] = 0.6 * U;
      v[1] = 0.8 * U;
      return v;
    };
    VectorField be = boundary_from(g, 2, exp_data);
    be.fill(exp_data);
    be.fill_boundary(exp_data);
    lab.expf = minimize(be, expsat14()).first;
  }
  {
    Grid g = make_centered_grid(2, 2.25, lab.h);
    auto curved_data = [](const Point& x) {
      const double q = x[1] - 0.2 * x[0] * x[0];
      const double t = std::max(q, 0.0);
      return VecM{t * t / 2.0};
    };
    VectorField bc = boundary_from(g, 1, curved_data);
    bc.fill(curved_data);
    bc.fill_boundary(curved_data);
    lab.curved = minimize(bc, linear1()).first;
  }
  lab.flat_fb = nearest_gamma0(lab.flat, 1.0, Point{0, 0, 0});
  lab.expf_fb = nearest_gamma0(lab.expf, 1.0, Point{0, 0, 0});
  lab.curved_fb = nearest_gamma0(lab.curved, 1.0, Point{0, 0, 0});
  return lab;
}

// ---------------------------------------------------------------- criteria

void c01_alpha_identity() {
  Timer t;
  const double e2 = std::abs(alpha_n(2, 1.0) - M_PI / 8.0);
  const double e3 = std::abs(alpha_n(3, 1.0) - 2.0 * M_PI / 15.0);
  double forms = 0;
  for (int n : {2, 3})
    forms = std::max(forms, std::abs(unit_sphere_area(n) / (2.0 * n * (n + 2)) - alpha_n(n, 1.0)));
  const bool pass = e2 < 1e-14 && e3 < 1e-14 && forms < 1e-14;
  report(1, pass, "alpha_n identity",
         fmt("errors %.2e, %.2e, both-forms gap %.2e vs 1e-14", e2, e3, forms), t.s());
}

void c02_energy_density_quadrature() {
  Timer t;
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  const PolarField v = polar_from_probe(probe_of(H), 64, 256);
  const double M = functional_M(v, 1.0);
  const double err = std::abs(M - M_PI / 16.0);
  report(2, err <= 1e-4, "energy-density quadrature",
         fmt("M = %.8f vs pi/16 = %.8f, err %.2e vs 1e-4", M, M_PI / 16.0, err), t.s());
}

void c03_prox_oracle() {
  Timer t;
  const int cases = 1000;
  const int scan = 1000000;
  std::vector<double> errs(cases, 0.0);
  const Nonlinearity fams[3] = {linear1(),
                                make_nonlinearity(Family::AffineQuadratic, {1.0, 0.2}, 5.0),
                                expsat14()};
  auto run_range = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      std::mt19937_64 rng(1000003ULL * static_cast<std::uint64_t>(i) + 17);
      std::uniform_real_distribution<double> dist(-2.0, 2.0);
      std::uniform_real_distribution<double> taud(0.005, 1.0);
      const Nonlinearity& N = fams[i % 3];
      const int m = 1 + i % 3;
      VecM w(m);
      for (int c = 0; c < m; ++c) w[c] = dist(rng);
      const double tau = taud(rng);
      const double wn = w.norm();
      double best_s = 0, best_v = 0.5 * wn * wn;
      for (int k = 1; k <= scan; ++k) {
        const double s = wn * k / scan;
        const double v = 0.5 * (s - wn) * (s - wn) + tau * N.F(s);
        if (v < best_v) {
          best_v = v;
          best_s = s;
        }
      }
      errs[static_cast<size_t>(i)] = std::abs(prox_pointwise(w, tau, N).norm() - best_s);
    }
  };
  const int nt = std::max(2u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  const int chunk = (cases + nt - 1) / nt;
  for (int th = 0; th < nt; ++th)
    pool.emplace_back(run_range, th * chunk, std::min(cases, (th + 1) * chunk));
  for (auto& th : pool) th.join();
  double worst = 0;
  for (double e : errs) worst = std::max(worst, e);
  report(3, worst <= 1e-5, "prox vs brute-force scan",
         fmt("1000 cases, worst gap %.2e vs 1e-5", worst), t.s());
}

void c04_contact_1d() {
  Timer t;
  const Contact1D exact = exact_linear_1d(1.0, 0.0, 1.0, 0.125, 0.0);
  std::vector<double> errs, envelopes;
  for (double h : {1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    const auto nodes = static_cast<std::int64_t>(std::llround(1.0 / h)) + 1;
    Grid g(1, {nodes, 1, 1}, Point{0, 0, 0}, h);
    VectorField b(g, 1);
    b.mask_hull();
    b.at(0)[0] = 0.125;
    auto [u, st] = minimize(b, linear1());
    double err = 0;
    for (std::int64_t k = 0; k < nodes; ++k)
      err = std::max(err, std::abs(u.at(k)[0] - exact.eval(static_cast<double>(k) * h)));
    errs.push_back(err);
    envelopes.push_back(10.0 * h * h);
  }
  const bool linf_ok = errs.back() <= envelopes.back();
  const double order = std::log2(errs[0] / errs[2]) / 2.0;
  // p = 0.125 puts the contact point on a grid node at every dyadic h, so the
  // discrete minimizer equals the sampled exact solution and the errors sit at
  // the solver floor, far below the second-order envelope. The order clause is
  // then satisfied by envelope dominance; an off-node variant (p = 0.08,
  // contact at 0.4) demonstrates the genuine discretization order.
  double dominance = 0;
  for (size_t i = 0; i < errs.size(); ++i) dominance = std::max(dominance, errs[i] / envelopes[i]);
  std::vector<double> off_errs;
  const Contact1D off_exact = exact_linear_1d(1.0, 0.0, 1.0, 0.08, 0.0);
  for (double h : {1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    const auto nodes = static_cast<std::int64_t>(std::llround(1.0 / h)) + 1;
    Grid g(1, {nodes, 1, 1}, Point{0, 0, 0}, h);
    VectorField b(g, 1);
    b.mask_hull();
    b.at(0)[0] = 0.08;
    auto [u, st] = minimize(b, linear1());
    double err = 0;
    for (std::int64_t k = 0; k < nodes; ++k)
      err = std::max(err, std::abs(u.at(k)[0] - off_exact.eval(static_cast<double>(k) * h)));
    off_errs.push_back(err);
  }
  const double off_order = std::log2(off_errs[0] / off_errs[2]) / 2.0;
  const bool order_ok = (order >= 1.8) || (dominance <= 0.01 && off_order >= 1.8);
  report(4, linf_ok && order_ok, "1-D exact contact",
         fmt("Linf %.2e vs %.2e; errs {%.1e,%.1e,%.1e} (envelope ratio %.1e, on-node contact); "
             "off-node order %.2f vs 1.8",
             errs.back(), envelopes.back(), errs[0], errs[1], errs[2], dominance, off_order),
         t.s());
}

void c05_halfspace_2d() {
  Timer t;
  // tilted normal keeps the kink off the grid lines, so the discretization
  // error is visible and the order measurable
  const double ang = 1.2;
  const HalfSpaceSolution H(2, Point{std::cos(ang), std::sin(ang), 0}, unit_e2(), 1.0);
  std::vector<double> errs;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    Grid g = make_centered_grid(2, 1.0, h);
    auto [u, st] = minimize(boundary_from(g, 2, [&H](const Point& x) { return H.eval(x); }),
                            linear1());
    double err = 0;
    const auto count = g.node_count();
    for (std::int64_t k = 0; k < count; ++k) {
      const VecM hv = H.eval(g.coords(g.unindex(k)));
      for (int c = 0; c < 2; ++c) err = std::max(err, std::abs(u.at(k)[c] - hv[c]));
    }
    errs.push_back(err);
  }
  const double order = std::log2(errs[0] / errs[2]) / 2.0;
  const double envelope = 10.0 / (64.0 * 64.0);
  report(5, order >= 1.5 && errs[1] <= envelope, "2-D half-space reproduction",
         fmt("errors {%.2e, %.2e, %.2e}, order %.2f vs 1.5; err(1/64) vs 10h^2 = %.1e", errs[0],
             errs[1], errs[2], order, envelope),
         t.s());
}

void c06_uniqueness() {
  Timer t;
  const double h = 1.0 / 64;
  Grid g = make_centered_grid(2, 1.0, h);
  const HalfSpaceSolution H(2, Point{0, 1, 0}, unit_e2(), 1.0);
  const VectorField b = boundary_from(g, 2, [&H](const Point& x) { return H.eval(x); });
  SolveOptions opts;
  const double gap_lin = uniqueness_audit(b, linear1(), opts, 3);
  const double gap_exp = uniqueness_audit(b, expsat14(), opts, 3);
  report(6, gap_lin <= 1e-6 && gap_exp <= 1e-6, "uniqueness (3 seeds)",
         fmt("gap linear %.2e, exp-saturating %.2e vs 1e-6", gap_lin, gap_exp), t.s());
}

void c07_weiss_monotonicity(const Lab& lab) {
  Timer t;
  const Nonlinearity N = expsat14();
  int violations = 0;
  double min_T = 0;
  int points = 0;
  for (double cx : {-0.15, 0.0, 0.15}) {
    const Point x0 = nearest_gamma0(lab.expf, 1.0, Point{cx, 0, 0});
    const auto radii = radii_ladder(10.0 * lab.h, 10);
    const WeissReport rep = monotonicity_audit(lab.expf, N, x0, radii);
    violations += static_cast<int>(rep.violations.size());
    for (size_t j = 0; j < rep.r.size(); ++j) {
      min_T = std::min({min_T, rep.T1[j], rep.T2[j]});
    }
    ++points;
  }
  report(7, violations == 0 && min_T >= -1e-10, "Weiss monotonicity on the solved field",
         fmt("%d points x 10 radii, %d violations, min(T1,T2) = %.1e vs -1e-10", points,
             violations, min_T),
         t.s());
}

void c08_identity_check() {
  Timer t;
  const double h = 1.0 / 128;
  Grid g = make_centered_grid(2, 2.0, h);
  VectorField u(g, 1);
  const HalfSpaceSolution H(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  u.fill([&H](const Point& x) { return H.eval(x); });
  const WeissReport rep = monotonicity_audit(u, linear1(), Point{0, 0, 0}, radii_ladder(0.25, 6));
  double worst = 0;
  for (size_t j = 0; j < rep.r.size(); ++j)
    worst = std::max({worst, std::abs(rep.dWdr[j]), std::abs(rep.T1[j]), std::abs(rep.T2[j])});
  report(8, worst <= 1e-3, "monotonicity identity on the exact half space",
         fmt("max(|dW/dr|, T1, T2) = %.2e vs 1e-3 across %zu radii", worst, rep.r.size()), t.s());
}

void c09_nondegeneracy(const Lab& lab) {
  Timer t;
  double worst_ratio = 1e300;
  int audited = 0;
  for (const VectorField* u : {&lab.flat, &lab.expf}) {
    for (double cx : {-0.15, 0.0, 0.15}) {
      const Point x0 = nearest_gamma0(*u, 1.0, Point{cx, 0, 0});
      const auto radii = radii_ladder(10.0 * lab.h, 8);
      const auto rows = nondegeneracy_audit(*u, x0, radii, 1.0);
      for (const auto& row : rows) {
        worst_ratio = std::min(worst_ratio, row.sup / row.bound);
        ++audited;
      }
    }
  }
  report(9, worst_ratio >= 0.95, "non-degeneracy floor",
         fmt("%d (point, radius) audits, min sup/bound = %.3f vs 0.95", audited, worst_ratio),
         t.s());
}

void c10_growth(const Lab& lab) {
  Timer t;
  const GrowthFit fit = growth_audit(lab.flat, lab.flat_fb, radii_ladder(10.0 * lab.h, 9));
  const double exp_gap = std::abs(fit.grad_exponent - (fit.u_exponent - 1.0));
  const bool pass = fit.u_exponent >= 1.85 && fit.u_exponent <= 2.15 &&
                    fit.grad_exponent >= 0.85 && fit.grad_exponent <= 1.15 && exp_gap <= 0.15;
  report(10, pass, "quadratic growth at a Gamma_0 point",
         fmt("|u| exponent %.3f in [1.85, 2.15], |grad u| exponent %.3f in [0.85, 1.15], "
             "consistency gap %.3f vs 0.15",
             fit.u_exponent, fit.grad_exponent, exp_gap),
         t.s());
}

void c11_regular_density(const Lab& lab) {
  Timer t;
  // fit the density on the bias-clean part of the ladder (>= 24h)
  const auto radii = radii_ladder(24.0 * lab.h, 7);
  const WeissReport rep = monotonicity_audit(lab.flat, linear1(), lab.flat_fb, radii);
  const DensityFit fit = density_limit(rep);
  const double target = alpha_n(2, 1.0) / 2.0;
  const double rel = std::abs(fit.W0 - target) / target;
  report(11, rel <= 0.05, "regular-point density",
         fmt("W0 = %.6f vs alpha_2/2 = %.6f, rel err %.3f vs 0.05", fit.W0, target, rel), t.s());
}

void c12_domain_variation(const Lab& lab) {
  Timer t;
  // fixed smooth xi, solved field at h and h/2
  const auto xi = radial_bump_xi(2, Point{0, 0, 0}, 0.8);
  const Nonlinearity N = expsat14();
  const HalfSpaceSolution H(2, Point{0, 1, 0}, unit_e2(), 1.0);
  std::vector<double> res;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    Grid g = make_centered_grid(2, 1.0, h);
    auto [u, st] = minimize(boundary_from(g, 2, [&H](const Point& x) { return H.eval(x); }), N);
    res.push_back(domain_variation_residual(u, N, xi));
  }
  const double order = std::log2(res[0] / res[1]);
  // exactly representable: the sampled half space with linear F
  Grid g = make_centered_grid(2, 1.0, 1.0 / 128);
  VectorField hs(g, 1);
  const HalfSpaceSolution H1(2, Point{0, 1, 0}, VecM{1.0}, 1.0);
  hs.fill([&H1](const Point& x) { return H1.eval(x); });
  const double exact_res = domain_variation_residual(hs, linear1(), xi);
  report(12, order >= 0.8 && exact_res <= 1e-3, "domain variation identity",
         fmt("residuals %.2e -> %.2e (order %.2f vs 0.8); exact case %.2e vs 1e-3", res[0],
             res[1], order, exact_res),
         t.s());
}

void c13_epiperimetric_scan() {
  Timer t;
  const EpiScan scan = batch_scan({0.01, 0.05}, {1e-3, 1e-2}, 3, 5, {linear1(), expsat14()}, 2,
                                  1.0 / 64);
  int defined = 0, failures = 0, inequality_violations = 0, below_floor = 0;
  double min_kappa = 1e300;
  for (const auto& row : scan.rows) {
    if (row.failed) {
      ++failures;
      continue;
    }
    if (row.result.H_v > row.result.H_c) ++inequality_violations;
    if (row.result.kappa_defined) {
      ++defined;
      min_kappa = std::min(min_kappa, row.result.kappa_best);
      if (row.result.kappa_best < 0.01) ++below_floor;
    }
  }
  const bool pass =
      failures == 0 && inequality_violations == 0 && defined > 0 && below_floor == 0;
  report(13, pass, "epiperimetric contraction scan",
         fmt("%zu rows, %d defined, min kappa_best %.4f (reported, not asserted as the paper's "
             "kappa); H(v) <= H(c) exact in all rows",
             scan.rows.size(), defined, min_kappa),
         t.s());
}

void c14_decay(const Lab& lab) {
  Timer t;
  // synthetic arm
  const auto radii = radii_ladder(0.02, 12);
  std::vector<double> G(radii.size()), d(radii.size());
  for (size_t i = 0; i < radii.size(); ++i) {
    G[i] = std::pow(radii[i], 4.0);
    d[i] = std::pow(radii[i], 2.0);
  }
  const DecayFit syn = fit_decay(radii, G, d, 2);
  const bool syn_ok = std::abs(syn.kappa_hat - 0.5) <= 0.02 && syn.consistency <= 0.05;
  // solved-field arm at the curved configuration's Gamma_0 point
  const auto ladder = radii_ladder(8.0 * lab.h, 11);
  const DecayReport rep = decay_measurement(lab.curved, linear1(), lab.curved_fb, ladder);
  const bool field_ok = !rep.already_homogeneous && rep.fit.alpha_G > 0 && rep.fit.alpha_L > 0 &&
                        rep.fit.consistency <= 0.3;
  // uniqueness of the blow-up limit: d shrinks toward small r (10% slack)
  bool d_monotone = true;
  for (size_t j = 0; j + 1 < ladder.size(); ++j) {
    if (ladder[j] < 24.0 * lab.h) continue;
    if (rep.d[j] > 1.1 * rep.d[j + 1]) d_monotone = false;
  }
  report(14, syn_ok && field_ok && d_monotone, "energy decay",
         fmt("synthetic kappa_hat %.3f (vs 1/2 +- 0.02), consistency %.3f; solved field alpha_G "
             "%.2f, alpha_L %.2f, consistency %.3f vs 0.3, d(r) monotone: %s",
             syn.kappa_hat, syn.consistency, rep.fit.alpha_G, rep.fit.alpha_L,
             rep.fit.consistency, d_monotone ? "yes" : "no"),
         t.s());
}

void c15_cap_eigenproblem() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (int n : {2, 3}) {
    const CapProblem p(n, M_PI / 2.0, 256);
    const CapEigenResult eig = cap_eigen(p, 1);
    const double err = std::abs(eig.lambda[0] - 2.0 * n);
    pass = pass && err <= 1e-3 && eig.correlation_cos2 >= 0.999;
    detail += fmt("n=%d: lambda_1 %.6f (err %.1e), corr %.5f; ", n, eig.lambda[0], err,
                  eig.correlation_cos2);
  }
  double prev = 1e300;
  bool decreasing = true;
  for (double cap : {M_PI / 4.0, M_PI / 3.0, M_PI / 2.5, M_PI / 2.0}) {
    const double l1 = cap_eigen(CapProblem(2, cap, 256), 1).lambda[0];
    if (l1 >= prev) decreasing = false;
    prev = l1;
  }
  const ShiftBoundReport s2 = shift_bound_check(CapProblem(2, M_PI / 2.0, 512), 1);
  const ShiftBoundReport s3 = shift_bound_check(CapProblem(3, M_PI / 2.0, 512), 1);
  const bool shift_ok = s2.rows[0].margin > 0 && s3.rows[0].margin > 0;
  detail += fmt("lambda_1 decreasing in cap: %s; shift margins %.3f, %.3f", decreasing ? "yes" : "no",
                s2.rows[0].margin, s3.rows[0].margin);
  report(15, pass && decreasing && shift_ok, "cap eigenproblem", detail, t.s());
}

void c16_density_floor(const Lab& lab) {
  Timer t;
  const double floor = alpha_n(2, 1.0) / 2.0 - 1e-3;
  double worst = 1e300;
  int audited = 0;
  struct Case {
    const VectorField* u;
    Point x0;
    Nonlinearity N;
  };
  const std::vector<Case> cases = {{&lab.flat, lab.flat_fb, linear1()},
                                   {&lab.curved, lab.curved_fb, linear1()},
                                   {&lab.expf, lab.expf_fb, expsat14()}};
  for (const auto& c : cases) {
    const FieldProbe p = probe_of(*c.u);
    for (double r : {16.0 * lab.h, 32.0 * lab.h}) {
      const BlowupField b = rescale(p, c.u->grid, c.x0, r);
      // the H projection of the blow-up
      const HalfSpaceProjection proj = project_to_halfspace(b.polar, 1.0);
      const HalfSpaceSolution hstar(2, proj.nu, proj.e, 1.0);
      const PolarField hp = polar_from_probe(probe_of(hstar), 32, 256);
      worst = std::min({worst, functional_M(b.polar, 1.0), functional_M(hp, 1.0)});
      audited += 2;
    }
  }
  report(16, worst >= floor, "energy-density floor",
         fmt("%d fields (blow-ups and projections), min M = %.6f vs alpha_2/2 - 1e-3 = %.6f",
             audited, worst, floor),
         t.s());
}

void c17_persistence() {
  Timer t;
  // bit-exact round trip
  Grid g = make_centered_grid(2, 0.5, 1.0 / 16);
  VectorField u(g, 2);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : u.values) v = dist(rng);
  const std::string p1 = "/tmp/fbreg_acc_a.vfb", p2 = "/tmp/fbreg_acc_b.vfb";
  write_field(p1, u);
  const VectorField v = read_field(p1);
  bool roundtrip = v.values.size() == u.values.size();
  for (size_t i = 0; roundtrip && i < u.values.size(); ++i)
    roundtrip = std::memcmp(&u.values[i], &v.values[i], sizeof(double)) == 0;

  // thread-count invariance of solve artifacts
  const HalfSpaceSolution H(2, Point{0, 1, 0}, unit_e2(), 1.0);
  Grid sg = make_centered_grid(2, 1.0, 1.0 / 32);
  const VectorField b = boundary_from(sg, 2, [&H](const Point& x) { return H.eval(x); });
  set_thread_count(1);
  auto [u1, s1] = minimize(b, expsat14());
  set_thread_count(4);
  auto [u4, s4] = minimize(b, expsat14());
  set_thread_count(1);
  write_field(p1, u1);
  write_field(p2, u4);
  auto slurp = [](const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(is),
                             std::istreambuf_iterator<char>());
  };
  const bool bytes_equal = slurp(p1) == slurp(p2);
  const bool stats_equal = s1.iterations == s4.iterations &&
                           std::memcmp(&s1.final_energy, &s4.final_energy, sizeof(double)) == 0;
  std::remove(p1.c_str());
  std::remove(p2.c_str());
  report(17, roundtrip && bytes_equal && stats_equal, "persistence and determinism",
         fmt("round-trip bit-exact: %s; thread counts {1,4} give identical field bytes: %s, "
             "identical stats: %s",
             roundtrip ? "yes" : "no", bytes_equal ? "yes" : "no", stats_equal ? "yes" : "no"),
         t.s());
}

}  // namespace

int main() {
  Timer total;
  std::printf("acceptance suite\n");
  c01_alpha_identity();
  c02_energy_density_quadrature();
  c03_prox_oracle();
  c04_contact_1d();
  c05_halfspace_2d();
  c06_uniqueness();
  std::printf("... solving the shared audit fields\n");
  std::fflush(stdout);
  const Lab lab = solve_lab();
  c07_weiss_monotonicity(lab);
  c08_identity_check();
  c09_nondegeneracy(lab);
  c10_growth(lab);
  c11_regular_density(lab);
  c12_domain_variation(lab);
  c13_epiperimetric_scan();
  c14_decay(lab);
  c15_cap_eigenproblem();
  c16_density_floor(lab);
  c17_persistence();
  std::printf("%d of 17 criteria failed (%.1f s total)\n", g_failures, total.s());
  return g_failures == 0 ? 0 : 1;
}
