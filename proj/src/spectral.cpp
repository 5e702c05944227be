#include "fbreg/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace fbreg {

namespace {

// Number of eigenvalues of T strictly less than x (LDL^T pivot signs).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const auto n = d.size();
  int count = 0;
  double p = d[0] - x;
  if (p < 0) ++count;
  for (size_t i = 1; i < n; ++i) {
    const double denom = (p == 0.0) ? 1e-300 : p;
    p = (d[i] - x) - e[i - 1] * e[i - 1] / denom;
    if (p < 0) ++count;
  }
  return count;
}

std::vector<double> solve_shifted(const std::vector<double>& d, const std::vector<double>& e,
                                  double shift, const std::vector<double>& rhs) {
  // Thomas algorithm for (T - shift I) x = rhs with a tiny diagonal guard
  const auto n = d.size();
  std::vector<double> c(n), dd(n), x(n);
  double b0 = d[0] - shift;
  if (std::abs(b0) < 1e-300) b0 = 1e-300;
  c[0] = (n > 1) ? e[0] / b0 : 0.0;
  dd[0] = rhs[0] / b0;
  for (size_t i = 1; i < n; ++i) {
    double b = d[i] - shift - e[i - 1] * c[i - 1];
    if (std::abs(b) < 1e-300) b = 1e-300;
    if (i + 1 < n) c[i] = e[i] / b;
    dd[i] = (rhs[i] - e[i - 1] * dd[i - 1]) / b;
  }
  x[n - 1] = dd[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = dd[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace

TridiagEigen tridiag_smallest(const std::vector<double>& diag, const std::vector<double>& off,
                              int k, bool want_vectors) {
  const auto n = diag.size();
  if (n == 0 || off.size() + 1 != n) throw InputError("tridiag_smallest: bad sizes");
  if (k < 1 || static_cast<size_t>(k) > n) throw InputError("tridiag_smallest: bad k");
  // Gershgorin bounds
  double lo = diag[0], hi = diag[0];
  for (size_t i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  TridiagEigen out;
  for (int j = 0; j < k; ++j) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(diag, off, mid) >= j + 1)
        b = mid;
      else
        a = mid;
      if (b - a <= 1e-14 * std::max(1.0, std::abs(b))) break;
    }
    out.values.push_back(0.5 * (a + b));
  }
  if (want_vectors) {
    for (int j = 0; j < k; ++j) {
      const double lam = out.values[static_cast<size_t>(j)];
      std::vector<double> v(n, 1.0);
      // deterministic start, orthogonalize against previous vectors
      for (int c = 0; c < static_cast<int>(n); ++c)
        v[static_cast<size_t>(c)] = 1.0 + 0.3 * std::sin(0.7 * (c + 1) * (j + 1));
      const double shift = lam + 1e-11 * std::max(1.0, std::abs(lam));
      for (int it = 0; it < 6; ++it) {
        for (int p = 0; p < j; ++p) {
          const auto& u = out.vectors[static_cast<size_t>(p)];
          double prj = 0;
          for (size_t i = 0; i < n; ++i) prj += u[i] * v[i];
          for (size_t i = 0; i < n; ++i) v[i] -= prj * u[i];
        }
        v = solve_shifted(diag, off, shift, v);
        double nrm = 0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        for (double& x : v) x /= nrm;
      }
      if (v[n / 2] < 0)
        for (double& x : v) x = -x;
      out.vectors.push_back(std::move(v));
    }
  }
  return out;
}

CapProblem::CapProblem(int n_, double cap, int M_, bool transform)
    : n(n_), theta_cap(cap), M(M_), ground_state_transform(transform) {
  if (n < 2 || n > 3) throw InputError("CapProblem: n must be 2 or 3");
  if (!(theta_cap > 0) || theta_cap > M_PI / 2.0 + 1e-12)
    throw InputError("CapProblem: theta_cap in (0, pi/2]");
  if (M < 64) throw InputError("CapProblem: M >= 64");
}

namespace {

double rho_weight(int n, double th) { return n == 2 ? 1.0 : std::sin(th); }

// Generalized problem A w = mu B w reduced to standard symmetric tridiagonal
// via D^{-1/2} A D^{-1/2}.
struct Discretization {
  std::vector<double> diag, off, b;
};

// Ground-state transformed operator: -(rho phi^2 w')' with natural condition
// at theta = 0 and Dirichlet at theta_cap (face value 0 over half a cell).
Discretization build_transformed(int n, double cap, int M) {
  const double dth = cap / M;
  auto face_a = [&](int j) {
    const double th = j * dth;
    const double phi = std::cos(th) * std::cos(th);
    return rho_weight(n, th) * phi * phi;
  };
  Discretization D;
  D.diag.assign(static_cast<size_t>(M), 0.0);
  D.off.assign(static_cast<size_t>(M - 1), 0.0);
  D.b.assign(static_cast<size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    const double th = (i + 0.5) * dth;
    const double phi = std::cos(th) * std::cos(th);
    D.b[static_cast<size_t>(i)] = rho_weight(n, th) * phi * phi;
    double dcoef = 0;
    if (i > 0) dcoef += face_a(i);
    if (i + 1 < M) dcoef += face_a(i + 1);
    if (i + 1 == M) dcoef += 2.0 * face_a(M);  // Dirichlet half-cell flux
    D.diag[static_cast<size_t>(i)] = dcoef / (dth * dth);
    if (i + 1 < M) D.off[static_cast<size_t>(i)] = -face_a(i + 1) / (dth * dth);
  }
  return D;
}

// Direct (untransformed) operator: -(rho v')'/rho + q v with the singular
// potential evaluated at cell centers.
Discretization build_direct(int n, double cap, int M, bool with_q) {
  const double dth = cap / M;
  auto face_a = [&](int j) { return rho_weight(n, j * dth); };
  Discretization D;
  D.diag.assign(static_cast<size_t>(M), 0.0);
  D.off.assign(static_cast<size_t>(M - 1), 0.0);
  D.b.assign(static_cast<size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    const double th = (i + 0.5) * dth;
    D.b[static_cast<size_t>(i)] = rho_weight(n, th);
    double dcoef = 0;
    if (i > 0) dcoef += face_a(i);
    if (i + 1 < M) dcoef += face_a(i + 1);
    if (i + 1 == M) dcoef += 2.0 * face_a(M);
    D.diag[static_cast<size_t>(i)] = dcoef / (dth * dth);
    if (with_q) {
      const double c = std::cos(th);
      D.diag[static_cast<size_t>(i)] += (2.0 / (c * c)) * D.b[static_cast<size_t>(i)];
    }
    if (i + 1 < M) D.off[static_cast<size_t>(i)] = -face_a(i + 1) / (dth * dth);
  }
  return D;
}

std::vector<double> eigen_of(const Discretization& D, int k, TridiagEigen* full = nullptr) {
  const auto n = D.diag.size();
  std::vector<double> diag(n), off(n - 1);
  for (size_t i = 0; i < n; ++i) diag[i] = D.diag[i] / D.b[i];
  for (size_t i = 0; i + 1 < n; ++i) off[i] = D.off[i] / std::sqrt(D.b[i] * D.b[i + 1]);
  TridiagEigen eig = tridiag_smallest(diag, off, k, full != nullptr);
  if (full) {
    // undo the symmetrizing scaling: w = D^{-1/2} y
    for (auto& v : eig.vectors)
      for (size_t i = 0; i < n; ++i) v[i] /= std::sqrt(D.b[i]);
    *full = eig;
  }
  return eig.values;
}

}  // namespace

CapEigenResult cap_eigen(const CapProblem& p, int k) {
  if (k < 1) throw InputError("cap_eigen: k >= 1");
  if (k > p.M / 4) throw InputError("cap_eigen: k exceeds grid resolution");
  CapEigenResult out;

  auto solve_at = [&](int M, TridiagEigen* full) {
    if (p.ground_state_transform) {
      const Discretization D = build_transformed(p.n, p.theta_cap, M);
      std::vector<double> mu = eigen_of(D, k, full);
      for (double& v : mu) v += 2.0 * p.n;
      return mu;
    }
    const Discretization D = build_direct(p.n, p.theta_cap, M, true);
    return eigen_of(D, k, full);
  };

  out.lambda_raw_M = solve_at(p.M, nullptr);
  TridiagEigen full;
  out.lambda_raw_2M = solve_at(2 * p.M, &full);
  out.lambda.resize(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j)
    out.lambda[static_cast<size_t>(j)] =
        (4.0 * out.lambda_raw_2M[static_cast<size_t>(j)] - out.lambda_raw_M[static_cast<size_t>(j)]) / 3.0;

  const int M2 = 2 * p.M;
  const double dth = p.theta_cap / M2;
  out.theta.resize(static_cast<size_t>(M2));
  for (int i = 0; i < M2; ++i) out.theta[static_cast<size_t>(i)] = (i + 0.5) * dth;
  for (auto& w : full.vectors) {
    std::vector<double> v(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
      const double c = std::cos(out.theta[i]);
      v[i] = p.ground_state_transform ? c * c * w[i] : w[i];
    }
    out.eigenfunctions.push_back(std::move(v));
  }
  // rho-weighted correlation of the first eigenfunction with cos^2
  {
    const auto& v = out.eigenfunctions.front();
    double vv = 0, cc = 0, vc = 0;
    for (size_t i = 0; i < v.size(); ++i) {
      const double w = rho_weight(p.n, out.theta[i]);
      const double c2 = std::cos(out.theta[i]) * std::cos(out.theta[i]);
      vv += w * v[i] * v[i];
      cc += w * c2 * c2;
      vc += w * v[i] * c2;
    }
    out.correlation_cos2 = std::abs(vc) / std::sqrt(vv * cc);
  }
  return out;
}

ShiftBoundReport shift_bound_check(const CapProblem& p, int k, double tol) {
  if (k < 1 || k > p.M / 4) throw InputError("shift_bound_check: bad k");
  ShiftBoundReport rep;
  rep.q0 = 2.0;  // min of 2/cos^2 over the cap, attained at theta = 0
  const Discretization DL = build_direct(p.n, p.theta_cap, p.M, true);
  const Discretization D0 = build_direct(p.n, p.theta_cap, p.M, false);
  const std::vector<double> lamL = eigen_of(DL, k);
  const std::vector<double> lam0 = eigen_of(D0, k);
  for (int j = 0; j < k; ++j) {
    ShiftBoundRow row;
    row.k = j + 1;
    row.lambda_L = lamL[static_cast<size_t>(j)];
    row.lambda_lap = lam0[static_cast<size_t>(j)];
    row.bound = rep.q0 + row.lambda_lap;
    row.margin = row.lambda_L - row.bound;
    if (row.margin < -tol) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace fbreg
