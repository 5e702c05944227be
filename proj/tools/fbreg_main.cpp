// Config-driven entry point: solving, free-boundary audits, blow-up and decay
// reports, epiperimetric scans, the cap eigenproblem, and oracle profiles.
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbreg/blowup.hpp"
#include "fbreg/config.hpp"
#include "fbreg/epiperimetric.hpp"
#include "fbreg/freeboundary.hpp"
#include "fbreg/io.hpp"
#include "fbreg/oracle.hpp"
#include "fbreg/solver.hpp"
#include "fbreg/spectral.hpp"
#include "fbreg/threads.hpp"
#include "fbreg/weiss.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct AppState {
  fbreg::RunConfig cfg;
  std::string out_dir = ".";
  std::string field_path;

  std::string artifact(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }
  std::string field_file() const {
    return field_path.empty() ? artifact("field.vfb") : field_path;
  }
};

fbreg::VectorField load_solved(const AppState& app) {
  fbreg::VectorField u = fbreg::read_field(app.field_file());
  u.mask_hull();
  return u;
}

double resolved_theta_pos(const AppState& app, const fbreg::Nonlinearity& N, double h) {
  return app.cfg.theta_pos > 0 ? app.cfg.theta_pos : fbreg::default_theta_pos(N.f0(), h);
}

double resolved_theta_grad(const AppState& app, const fbreg::Nonlinearity& N, double h) {
  return app.cfg.theta_grad > 0 ? app.cfg.theta_grad : fbreg::default_theta_grad(N.f0(), h);
}

// Audit center: explicit, or the Gamma_0 extraction point nearest cfg.near.
fbreg::Point audit_center(const AppState& app, const fbreg::VectorField& u,
                          const fbreg::Nonlinearity& N) {
  if (!app.cfg.center.empty()) {
    fbreg::Point x{0, 0, 0};
    for (size_t a = 0; a < app.cfg.center.size() && a < 3; ++a) x[a] = app.cfg.center[a];
    return x;
  }
  const auto fb = fbreg::extract(u, resolved_theta_pos(app, N, u.grid.h),
                                 resolved_theta_grad(app, N, u.grid.h));
  fbreg::Point nearp{0, 0, 0};
  for (size_t a = 0; a < app.cfg.near.size() && a < 3; ++a) nearp[a] = app.cfg.near[a];
  double best = std::numeric_limits<double>::infinity();
  fbreg::Point out{0, 0, 0};
  bool found = false;
  for (const auto& p : fb.points) {
    if (!p.degenerate) continue;
    double d2 = 0;
    for (int a = 0; a < u.grid.n; ++a) {
      const double d = p.x[static_cast<size_t>(a)] - nearp[static_cast<size_t>(a)];
      d2 += d * d;
    }
    if (d2 < best) {
      best = d2;
      out = p.x;
      found = true;
    }
  }
  if (!found) throw fbreg::InputError("audit: no Gamma_0 free boundary points found");
  return out;
}

std::vector<double> audit_radii(const AppState& app, double h) {
  const double r_min = app.cfg.r_min > 0 ? app.cfg.r_min : 10.0 * h;
  return fbreg::radii_ladder(r_min, app.cfg.rungs);
}

int cmd_solve(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  fbreg::VectorField boundary = fbreg::config_boundary_field(app.cfg, N);
  if (app.cfg.generator == "file") {
    boundary = fbreg::read_field(app.cfg.field_file);
    boundary.mask_hull();
  }
  fbreg::SolveOptions opts;
  opts.step = app.cfg.step;
  opts.acceleration = app.cfg.acceleration;
  opts.tol_fp = app.cfg.tol_fp;
  opts.tol_E = app.cfg.tol_E;
  opts.max_iters = app.cfg.max_iters;
  opts.trace_stride = app.cfg.trace_stride;
  opts.seed = app.cfg.seed;
  auto [u, stats] = fbreg::minimize(boundary, N, opts);
  fbreg::write_field(app.artifact("field.vfb"), u);
  json j;
  j["iterations"] = stats.iterations;
  j["final_energy"] = stats.final_energy;
  j["fp_residual"] = stats.fp_residual;
  j["converged"] = stats.converged;
  j["stopped_on_energy"] = stats.stopped_on_energy;
  j["energy_trace"] = stats.energy_trace;
  fbreg::write_text_file(app.artifact("solve_stats.json"), j.dump(2) + "\n");
  // wall time goes to the log only: artifact bytes stay thread-count invariant
  std::cerr << "solve: " << stats.iterations << " iterations, wall " << stats.wall_time_s
            << " s\n";
  return 0;
}

int cmd_audit_weiss(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const fbreg::Point x0 = audit_center(app, u, N);
  const auto radii = audit_radii(app, u.grid.h);
  const fbreg::WeissReport rep =
      fbreg::monotonicity_audit(u, N, x0, radii, app.cfg.tol_mono);
  fbreg::CsvWriter csv(app.artifact("weiss.csv"), {"r", "W", "dWdr", "T1", "T2"});
  for (size_t j = 0; j < rep.r.size(); ++j)
    csv.row_values({rep.r[j], rep.W[j], rep.dWdr[j], rep.T1[j], rep.T2[j]});
  json j;
  j["x0"] = std::vector<double>(x0.begin(), x0.begin() + u.grid.n);
  j["W0_estimate"] = rep.W0_estimate;
  j["fit_exponent"] = rep.fit_exponent;
  j["fit_residual"] = rep.fit_residual;
  j["violations"] = rep.violations;
  fbreg::write_text_file(app.artifact("weiss_fit.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_audit_nondeg(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const fbreg::Point x0 = audit_center(app, u, N);
  const auto rows = fbreg::nondegeneracy_audit(u, x0, audit_radii(app, u.grid.h), N.f0());
  fbreg::CsvWriter csv(app.artifact("nondeg.csv"), {"r", "sup_u", "bound", "margin", "flagged"});
  for (const auto& r : rows)
    csv.row({fbreg::format_double(r.r), fbreg::format_double(r.sup),
             fbreg::format_double(r.bound), fbreg::format_double(r.margin),
             r.flagged ? "1" : "0"});
  return 0;
}

int cmd_audit_growth(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const fbreg::Point x0 = audit_center(app, u, N);
  const auto fit = fbreg::growth_audit(u, x0, audit_radii(app, u.grid.h));
  fbreg::CsvWriter csv(app.artifact("growth.csv"), {"r", "sup_u", "sup_grad"});
  for (size_t j = 0; j < fit.r.size(); ++j) csv.row_values({fit.r[j], fit.sup_u[j], fit.sup_grad[j]});
  json j;
  j["u_exponent"] = fit.u_exponent;
  j["grad_exponent"] = fit.grad_exponent;
  j["u_constant"] = fit.u_constant;
  j["grad_constant"] = fit.grad_constant;
  fbreg::write_text_file(app.artifact("growth_fit.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_audit_variation(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const double R = 0.8 * app.cfg.half;
  const auto xi = fbreg::radial_bump_xi(u.grid.n, fbreg::Point{0, 0, 0}, R);
  const double res = fbreg::domain_variation_residual(u, N, xi);
  fbreg::CsvWriter csv(app.artifact("variation.csv"), {"h", "bump_radius", "residual"});
  csv.row_values({u.grid.h, R, res});
  return 0;
}

int cmd_audit_holder(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const auto fb = fbreg::extract(u, resolved_theta_pos(app, N, u.grid.h),
                                 resolved_theta_grad(app, N, u.grid.h));
  const auto normals = fbreg::normal_field(fb, u);
  fbreg::CsvWriter csv(app.artifact("holder_points.csv"), {"x0", "x1", "nu0", "nu1", "valid"});
  for (const auto& p : normals)
    csv.row_values({p.x[0], p.x[1], p.nu[0], p.nu[1], p.valid ? 1.0 : 0.0});
  json j;
  try {
    const auto fit = fbreg::holder_exponent(normals, u.grid.h, u.grid.n);
    j["beta_hat"] = fit.beta_hat;
    j["residual"] = fit.residual;
    j["pairs"] = fit.pairs;
    j["at_noise_floor"] = fit.at_noise_floor;
  } catch (const std::exception& e) {
    j["error"] = e.what();
  }
  fbreg::write_text_file(app.artifact("holder_fit.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_blowup(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const fbreg::Point x0 = audit_center(app, u, N);
  const auto radii = audit_radii(app, u.grid.h);
  json rows = json::array();
  for (double r : radii) {
    const fbreg::BlowupField b = fbreg::rescale(u, x0, r);
    const auto proj = fbreg::project_to_halfspace(b.polar, N.f0());
    json row;
    row["r"] = r;
    row["homogeneity_defect"] = fbreg::homogeneity_defect(b.polar);
    row["nu"] = std::vector<double>(proj.nu.begin(), proj.nu.begin() + u.grid.n);
    row["residual_constrained"] = proj.residual_constrained;
    row["residual_free"] = proj.residual_free;
    row["M"] = fbreg::functional_M(b.polar, N.f0());
    rows.push_back(row);
  }
  json j;
  j["x0"] = std::vector<double>(x0.begin(), x0.begin() + u.grid.n);
  j["rows"] = rows;
  j["alpha_n_half"] = fbreg::alpha_n(u.grid.n, N.f0()) / 2.0;
  fbreg::write_text_file(app.artifact("blowup.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_decay(const AppState& app) {
  const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
  const fbreg::VectorField u = load_solved(app);
  const fbreg::Point x0 = audit_center(app, u, N);
  const auto radii = audit_radii(app, u.grid.h);
  const fbreg::DecayReport rep = fbreg::decay_measurement(u, N, x0, radii, nullptr,
                                                          app.cfg.tau_class);
  json j;
  j["x0"] = std::vector<double>(x0.begin(), x0.begin() + u.grid.n);
  j["radii"] = rep.radii;
  j["W"] = rep.W;
  j["G"] = rep.G;
  j["d"] = rep.d;
  j["W0"] = rep.W0;
  j["alpha_G"] = rep.fit.alpha_G;
  j["alpha_L"] = rep.fit.alpha_L;
  j["kappa_hat"] = rep.fit.kappa_hat;
  j["consistency"] = rep.fit.consistency;
  j["decay_confirmed"] = rep.fit.decay_confirmed;
  j["already_homogeneous"] = rep.already_homogeneous;
  j["monotonicity_violation"] = rep.monotonicity_violation;
  fbreg::write_text_file(app.artifact("decay.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_epi_scan(const AppState& app) {
  std::vector<fbreg::Nonlinearity> families;
  for (const auto& spec : app.cfg.families)
    families.push_back(fbreg::parse_family_spec(spec, app.cfg.s_max));
  const fbreg::EpiScan scan =
      fbreg::batch_scan(app.cfg.deltas, app.cfg.s_values, app.cfg.K, app.cfg.epi_seeds, families,
                        app.cfg.epi_m, app.cfg.epi_h, app.cfg.seed);
  fbreg::CsvWriter csv(app.artifact("epi.csv"),
                       {"delta", "s", "seed", "H_c", "H_v", "M_h", "kappa_best", "flags"});
  for (const auto& row : scan.rows) {
    // the flags cell carries the family tag plus any per-row flag
    std::string flag = row.family;
    if (row.failed)
      flag += ";error: " + row.error;
    else if (!row.result.kappa_defined)
      flag += ";undefined" + (row.result.flag.empty() ? "" : (": " + row.result.flag));
    else if (!row.result.flag.empty())
      flag += ";" + row.result.flag;
    csv.row({fbreg::format_double(row.delta), fbreg::format_double(row.s),
             std::to_string(row.seed), fbreg::format_double(row.result.H_c),
             fbreg::format_double(row.result.H_v), fbreg::format_double(row.result.M_h),
             row.result.kappa_defined ? fbreg::format_double(row.result.kappa_best) : "",
             flag});
  }
  json j;
  j["min_kappa"] = scan.min_kappa;
  j["defined_rows"] = scan.defined_rows;
  j["min_M_cone"] = scan.min_M_cone;
  j["argmin_row"] = scan.argmin_row;
  fbreg::write_text_file(app.artifact("epi_summary.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_spectral(const AppState& app) {
  std::vector<std::string> header = {"theta_cap", "M"};
  for (int i = 1; i <= app.cfg.sp_k; ++i) header.push_back("lambda_" + std::to_string(i));
  for (int i = 1; i <= app.cfg.sp_k; ++i) header.push_back("margin_" + std::to_string(i));
  header.push_back("correlation_cos2");
  fbreg::CsvWriter csv(app.artifact("spectral.csv"), header);
  for (double cap : app.cfg.theta_caps) {
    const fbreg::CapProblem p(app.cfg.sp_n, cap, app.cfg.sp_M, app.cfg.sp_transform);
    const auto eig = fbreg::cap_eigen(p, app.cfg.sp_k);
    const auto shift = fbreg::shift_bound_check(p, app.cfg.sp_k);
    std::vector<double> row = {cap, static_cast<double>(app.cfg.sp_M)};
    for (double l : eig.lambda) row.push_back(l);
    for (const auto& r : shift.rows) row.push_back(r.margin);
    row.push_back(eig.correlation_cos2);
    csv.row_values(row);
  }
  return 0;
}

int cmd_oracle(const AppState& app) {
  const auto sol = fbreg::exact_linear_1d(app.cfg.or_lambda, app.cfg.or_a, app.cfg.or_b,
                                          app.cfg.or_p, app.cfg.or_q);
  {
    fbreg::CsvWriter csv(app.artifact("oracle_contact.csv"), {"x", "u"});
    const int samples = 513;
    for (int i = 0; i < samples; ++i) {
      const double x =
          app.cfg.or_a + (app.cfg.or_b - app.cfg.or_a) * i / static_cast<double>(samples - 1);
      csv.row_values({x, sol.eval(x)});
    }
  }
  {
    const fbreg::Nonlinearity N = fbreg::config_nonlinearity(app.cfg);
    const auto prof =
        fbreg::reference_radial(N, app.cfg.or_radial_n, app.cfg.or_R, app.cfg.or_magnitude);
    fbreg::CsvWriter csv(app.artifact("oracle_radial.csv"), {"r", "U"});
    for (size_t i = 0; i < prof.r.size(); i += 8) csv.row_values({prof.r[i], prof.U[i]});
  }
  return 0;
}

int cmd_report(const AppState& app) {
  json j;
  j["artifacts"] = json::object();
  auto note = [&](const std::string& name) {
    const bool present = fs::exists(app.artifact(name));
    j["artifacts"][name] = present;
    return present;
  };
  json checks = json::object();
  if (note("weiss_fit.json")) {
    const json w = json::parse(fbreg::read_text_file(app.artifact("weiss_fit.json")));
    checks["weiss_monotone"] = w["violations"].empty();
  }
  if (note("epi_summary.json")) {
    const json e = json::parse(fbreg::read_text_file(app.artifact("epi_summary.json")));
    checks["epi_kappa_positive"] =
        e["defined_rows"].get<int>() > 0 && e["min_kappa"].get<double>() >= 0.01;
  }
  if (note("decay.json")) {
    const json d = json::parse(fbreg::read_text_file(app.artifact("decay.json")));
    checks["decay_confirmed"] = d.value("decay_confirmed", false);
    checks["decay_consistent"] = d.value("consistency", 1.0) <= 0.3;
  }
  note("field.vfb");
  note("solve_stats.json");
  note("weiss.csv");
  note("nondeg.csv");
  note("growth_fit.json");
  note("spectral.csv");
  note("epi.csv");
  j["checks"] = checks;
  fbreg::write_text_file(app.artifact("report.json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"free boundary regularity laboratory"};
  AppState app;
  std::string config_path;
  int threads = 0;
  std::uint64_t seed = 0;
  bool show_defaults = false;
  cli.add_option("--config", config_path, "TOML config path");
  cli.add_option("--out", app.out_dir, "artifact output directory");
  cli.add_option("--field", app.field_path, "solved field file for audits");
  cli.add_option("--threads", threads, "worker threads (results are thread-count invariant)");
  cli.add_option("--seed", seed, "base seed for randomized scans");
  cli.add_flag("--print-defaults", show_defaults, "print every config default and exit");

  auto* solve = cli.add_subcommand("solve", "minimize the discrete energy");
  auto* audit = cli.add_subcommand("audit", "free boundary / energy audits");
  std::string audit_kind;
  audit->add_option("kind", audit_kind, "weiss|nondeg|growth|variation|holder")->required();
  auto* blowup = cli.add_subcommand("blowup", "rescaled-field diagnostics");
  auto* decay = cli.add_subcommand("decay", "energy-decay measurement");
  auto* epi = cli.add_subcommand("epi", "epiperimetric scans");
  std::string epi_kind = "scan";
  epi->add_option("kind", epi_kind, "scan");
  auto* spectral = cli.add_subcommand("spectral", "spherical-cap eigenproblem");
  auto* oracle = cli.add_subcommand("oracle", "reference solutions");
  auto* report = cli.add_subcommand("report", "aggregate prior artifacts");
  cli.require_subcommand(0, 1);

  CLI11_PARSE(cli, argc, argv);

  if (show_defaults) {
    std::cout << fbreg::print_defaults();
    return 0;
  }

  try {
    if (!config_path.empty()) app.cfg = fbreg::load_config(config_path);
    app.cfg.seed = seed;
    if (threads > 0) fbreg::set_thread_count(threads);
    fs::create_directories(app.out_dir);

    if (solve->parsed()) return cmd_solve(app);
    if (audit->parsed()) {
      if (audit_kind == "weiss") return cmd_audit_weiss(app);
      if (audit_kind == "nondeg") return cmd_audit_nondeg(app);
      if (audit_kind == "growth") return cmd_audit_growth(app);
      if (audit_kind == "variation") return cmd_audit_variation(app);
      if (audit_kind == "holder") return cmd_audit_holder(app);
      std::cerr << "unknown audit kind: " << audit_kind << "\n";
      return 2;
    }
    if (blowup->parsed()) return cmd_blowup(app);
    if (decay->parsed()) return cmd_decay(app);
    if (epi->parsed()) {
      if (epi_kind == "scan") return cmd_epi_scan(app);
      std::cerr << "unknown epi kind: " << epi_kind << "\n";
      return 2;
    }
    if (spectral->parsed()) return cmd_spectral(app);
    if (oracle->parsed()) return cmd_oracle(app);
    if (report->parsed()) return cmd_report(app);
    std::cout << cli.help();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
