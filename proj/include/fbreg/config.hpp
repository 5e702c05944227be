#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbreg/grid.hpp"
#include "fbreg/nonlinearity.hpp"

namespace fbreg {

// Strict TOML subset: [section] headers, key = value with number, string,
// bool and homogeneous arrays, # comments. Unknown sections/keys and parse
// problems are reported with line numbers.
struct ConfigValue {
  enum class Kind { Number, String, Bool, NumberList, StringList };
  Kind kind = Kind::Number;
  double num = 0;
  std::string str;
  bool flag = false;
  std::vector<double> nums;
  std::vector<std::string> strs;
  int line = 0;
};

using ConfigSection = std::map<std::string, ConfigValue>;
using RawConfig = std::map<std::string, ConfigSection>;

RawConfig parse_toml(const std::string& text);

struct RunConfig {
  // [grid]
  int n = 2;
  double half = 1.0;
  double h = 1.0 / 64.0;
  // [nonlinearity]
  std::string family = "linear";
  std::vector<double> params = {1.0};
  double c0 = -1.0, C0 = -1.0;  // declared bounds; negative = derive
  double s_max = 10.0;
  // [boundary]
  std::string generator = "half-space";
  std::vector<double> nu = {0.0, 1.0};
  std::vector<double> e = {1.0};
  double amplitude = -1.0;  // negative = use f(0)
  std::vector<double> value = {0.0};
  double disk_radius = -1.0;
  double magnitude = 0.25;
  std::string field_file;
  // [solver]
  double step = 0.0;
  bool acceleration = true;
  double tol_fp = 1e-8, tol_E = 1e-12;
  std::int64_t max_iters = 200000;
  int trace_stride = 50;
  // [audit]
  std::vector<double> center;  // empty = pick nearest Gamma_0 point to `near`
  std::vector<double> near = {0.0, 0.0};
  double r_min = -1.0;  // negative = 10h
  int rungs = 10;
  double theta_pos = -1.0, theta_grad = -1.0;
  double tau_class = 0.05, tol_mono = 1e-3;
  // [epi]
  std::vector<double> deltas = {0.01, 0.05};
  std::vector<double> s_values = {1e-3, 1e-2};
  int K = 3, epi_seeds = 5, epi_m = 2;
  double epi_h = 1.0 / 64.0;
  std::vector<std::string> families = {"linear:1", "exp-saturating:1:4"};
  // [spectral]
  int sp_n = 2, sp_M = 256, sp_k = 2;
  bool sp_transform = true;
  std::vector<double> theta_caps = {M_PI / 2.0};
  // [oracle]
  double or_lambda = 1.0, or_a = 0.0, or_b = 1.0, or_p = 0.125, or_q = 0.0;
  int or_refinement = 8;
  int or_radial_n = 2;
  double or_R = 1.0, or_magnitude = 0.25;

  std::uint64_t seed = 0;  // --seed flag
};

RunConfig load_config(const std::string& path);
RunConfig apply_raw(const RawConfig& raw);  // validates keys
std::string print_defaults();

Nonlinearity config_nonlinearity(const RunConfig& cfg);
Nonlinearity parse_family_spec(const std::string& spec, double s_max);  // "name:p1:p2"

// Grid + mask + Dirichlet data from [grid]/[boundary]; interior zeroed.
VectorField config_boundary_field(const RunConfig& cfg, const Nonlinearity& N);

}  // namespace fbreg
