#include "fbreg/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fbreg/io.hpp"

namespace fbreg {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  std::ostringstream os;
  os << "config parse error at line " << line << ": " << what;
  throw InputError(os.str());
}

ConfigValue parse_value(const std::string& raw, int line) {
  ConfigValue v;
  v.line = line;
  const std::string s = trim(raw);
  if (s.empty()) parse_fail(line, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') parse_fail(line, "unterminated string");
    v.kind = ConfigValue::Kind::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.kind = ConfigValue::Kind::Bool;
    v.flag = s == "true";
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') parse_fail(line, "unterminated array");
    std::string inner = s.substr(1, s.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    for (char c : inner) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        items.push_back(trim(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    const bool strings = !items.empty() && items.front().size() > 0 && items.front()[0] == '"';
    if (strings) {
      v.kind = ConfigValue::Kind::StringList;
      for (auto& it : items) {
        if (it.size() < 2 || it.front() != '"' || it.back() != '"')
          parse_fail(line, "array mixes strings and numbers");
        v.strs.push_back(it.substr(1, it.size() - 2));
      }
    } else {
      v.kind = ConfigValue::Kind::NumberList;
      for (auto& it : items) {
        try {
          size_t pos = 0;
          v.nums.push_back(std::stod(it, &pos));
          if (pos != it.size()) parse_fail(line, "bad number '" + it + "'");
        } catch (const std::exception&) {
          parse_fail(line, "bad number '" + it + "'");
        }
      }
    }
    return v;
  }
  try {
    size_t pos = 0;
    v.num = std::stod(s, &pos);
    if (pos != s.size()) parse_fail(line, "bad value '" + s + "'");
    v.kind = ConfigValue::Kind::Number;
    return v;
  } catch (const std::exception&) {
    parse_fail(line, "bad value '" + s + "'");
  }
}

}  // namespace

RawConfig parse_toml(const std::string& text) {
  RawConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') parse_fail(lineno, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) parse_fail(lineno, "empty section name");
      cfg[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) parse_fail(lineno, "empty key");
    if (section.empty()) parse_fail(lineno, "key outside any [section]");
    if (cfg[section].count(key)) parse_fail(lineno, "duplicate key '" + key + "'");
    cfg[section][key] = parse_value(body.substr(eq + 1), lineno);
  }
  return cfg;
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"grid", {"n", "half", "h"}},
      {"nonlinearity", {"family", "params", "c0", "C0", "s_max"}},
      {"boundary",
       {"generator", "nu", "e", "amplitude", "value", "disk_radius", "magnitude", "file"}},
      {"solver", {"step", "acceleration", "tol_fp", "tol_E", "max_iters", "trace_stride"}},
      {"audit",
       {"center", "near", "r_min", "rungs", "theta_pos", "theta_grad", "tau_class", "tol_mono"}},
      {"epi", {"deltas", "s", "K", "seeds", "m", "grid_h", "families"}},
      {"spectral", {"n", "M", "k", "transform", "theta_caps"}},
      {"oracle", {"lambda", "a", "b", "p", "q", "refinement", "radial_n", "R", "magnitude"}},
  };
  return k;
}

double num_of(const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Number) parse_fail(v.line, "expected a number");
  return v.num;
}
bool bool_of(const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::Bool) parse_fail(v.line, "expected true/false");
  return v.flag;
}
std::string str_of(const ConfigValue& v) {
  if (v.kind != ConfigValue::Kind::String) parse_fail(v.line, "expected a string");
  return v.str;
}
std::vector<double> nums_of(const ConfigValue& v) {
  if (v.kind == ConfigValue::Kind::NumberList) return v.nums;
  if (v.kind == ConfigValue::Kind::Number) return {v.num};
  parse_fail(v.line, "expected a number array");
}
std::vector<std::string> strs_of(const ConfigValue& v) {
  if (v.kind == ConfigValue::Kind::StringList) return v.strs;
  if (v.kind == ConfigValue::Kind::String) return {v.str};
  parse_fail(v.line, "expected a string array");
}

}  // namespace

RunConfig apply_raw(const RawConfig& raw) {
  RunConfig cfg;
  for (const auto& [section, kv] : raw) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw InputError("config: unknown section [" + section + "]");
    for (const auto& [key, val] : kv) {
      if (!it->second.count(key))
        parse_fail(val.line, "unknown key '" + key + "' in [" + section + "]");
      if (section == "grid") {
        if (key == "n") cfg.n = static_cast<int>(num_of(val));
        else if (key == "half") cfg.half = num_of(val);
        else cfg.h = num_of(val);
      } else if (section == "nonlinearity") {
        if (key == "family") cfg.family = str_of(val);
        else if (key == "params") cfg.params = nums_of(val);
        else if (key == "c0") cfg.c0 = num_of(val);
        else if (key == "C0") cfg.C0 = num_of(val);
        else cfg.s_max = num_of(val);
      } else if (section == "boundary") {
        if (key == "generator") cfg.generator = str_of(val);
        else if (key == "nu") cfg.nu = nums_of(val);
        else if (key == "e") cfg.e = nums_of(val);
        else if (key == "amplitude") cfg.amplitude = num_of(val);
        else if (key == "value") cfg.value = nums_of(val);
        else if (key == "disk_radius") cfg.disk_radius = num_of(val);
        else if (key == "magnitude") cfg.magnitude = num_of(val);
        else cfg.field_file = str_of(val);
      } else if (section == "solver") {
        if (key == "step") cfg.step = num_of(val);
        else if (key == "acceleration") cfg.acceleration = bool_of(val);
        else if (key == "tol_fp") cfg.tol_fp = num_of(val);
        else if (key == "tol_E") cfg.tol_E = num_of(val);
        else if (key == "max_iters") cfg.max_iters = static_cast<std::int64_t>(num_of(val));
        else cfg.trace_stride = static_cast<int>(num_of(val));
      } else if (section == "audit") {
        if (key == "center") cfg.center = nums_of(val);
        else if (key == "near") cfg.near = nums_of(val);
        else if (key == "r_min") cfg.r_min = num_of(val);
        else if (key == "rungs") cfg.rungs = static_cast<int>(num_of(val));
        else if (key == "theta_pos") cfg.theta_pos = num_of(val);
        else if (key == "theta_grad") cfg.theta_grad = num_of(val);
        else if (key == "tau_class") cfg.tau_class = num_of(val);
        else cfg.tol_mono = num_of(val);
      } else if (section == "epi") {
        if (key == "deltas") cfg.deltas = nums_of(val);
        else if (key == "s") cfg.s_values = nums_of(val);
        else if (key == "K") cfg.K = static_cast<int>(num_of(val));
        else if (key == "seeds") cfg.epi_seeds = static_cast<int>(num_of(val));
        else if (key == "m") cfg.epi_m = static_cast<int>(num_of(val));
        else if (key == "grid_h") cfg.epi_h = num_of(val);
        else cfg.families = strs_of(val);
      } else if (section == "spectral") {
        if (key == "n") cfg.sp_n = static_cast<int>(num_of(val));
        else if (key == "M") cfg.sp_M = static_cast<int>(num_of(val));
        else if (key == "k") cfg.sp_k = static_cast<int>(num_of(val));
        else if (key == "transform") cfg.sp_transform = bool_of(val);
        else cfg.theta_caps = nums_of(val);
      } else if (section == "oracle") {
        if (key == "lambda") cfg.or_lambda = num_of(val);
        else if (key == "a") cfg.or_a = num_of(val);
        else if (key == "b") cfg.or_b = num_of(val);
        else if (key == "p") cfg.or_p = num_of(val);
        else if (key == "q") cfg.or_q = num_of(val);
        else if (key == "refinement") cfg.or_refinement = static_cast<int>(num_of(val));
        else if (key == "radial_n") cfg.or_radial_n = static_cast<int>(num_of(val));
        else if (key == "R") cfg.or_R = num_of(val);
        else cfg.or_magnitude = num_of(val);
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) { return apply_raw(parse_toml(read_text_file(path))); }

std::string print_defaults() {
  std::ostringstream os;
  os << "# every key with its default value\n"
     << "[grid]\n"
     << "n = 2\nhalf = 1.0\nh = 0.015625\n\n"
     << "[nonlinearity]\n"
     << "family = \"linear\"        # linear | affine-quadratic | exp-saturating\n"
     << "params = [1.0]\n"
     << "c0 = -1.0               # declared lower bound; negative = derive\n"
     << "C0 = -1.0               # declared upper bound; negative = derive\n"
     << "s_max = 10.0\n\n"
     << "[boundary]\n"
     << "generator = \"half-space\" # half-space | constant | radial | file\n"
     << "nu = [0.0, 1.0]\n"
     << "e = [1.0]\n"
     << "amplitude = -1.0        # negative = f(0)\n"
     << "value = [0.0]           # constant generator\n"
     << "disk_radius = -1.0      # radial generator: pin outside this radius\n"
     << "magnitude = 0.25        # radial generator boundary magnitude\n"
     << "file = \"\"\n\n"
     << "[solver]\n"
     << "step = 0.0              # 0 = 1/L\n"
     << "acceleration = true\n"
     << "tol_fp = 1e-08\n"
     << "tol_E = 1e-12\n"
     << "max_iters = 200000\n"
     << "trace_stride = 50\n\n"
     << "[audit]\n"
     << "center = []             # empty = nearest Gamma_0 point to `near`\n"
     << "near = [0.0, 0.0]\n"
     << "r_min = -1.0            # negative = 10h\n"
     << "rungs = 10\n"
     << "theta_pos = -1.0        # negative = 1e-2 f0 h^2\n"
     << "theta_grad = -1.0       # negative = f0 h\n"
     << "tau_class = 0.05\n"
     << "tol_mono = 0.001\n\n"
     << "[epi]\n"
     << "deltas = [0.01, 0.05]\n"
     << "s = [0.001, 0.01]\n"
     << "K = 3\n"
     << "seeds = 5\n"
     << "m = 2\n"
     << "grid_h = 0.015625\n"
     << "families = [\"linear:1\", \"exp-saturating:1:4\"]\n\n"
     << "[spectral]\n"
     << "n = 2\nM = 256\nk = 2\ntransform = true\n"
     << "theta_caps = [1.5707963267948966]\n\n"
     << "[oracle]\n"
     << "lambda = 1.0\na = 0.0\nb = 1.0\np = 0.125\nq = 0.0\nrefinement = 8\n"
     << "radial_n = 2\nR = 1.0\nmagnitude = 0.25\n";
  return os.str();
}

Nonlinearity parse_family_spec(const std::string& spec, double s_max) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.empty()) throw InputError("empty family spec");
  std::vector<double> params;
  for (size_t i = 1; i < parts.size(); ++i) params.push_back(std::stod(parts[i]));
  return make_nonlinearity(parts[0], params, s_max);
}

Nonlinearity config_nonlinearity(const RunConfig& cfg) {
  return make_nonlinearity(cfg.family, cfg.params, cfg.s_max, cfg.c0, cfg.C0);
}

VectorField config_boundary_field(const RunConfig& cfg, const Nonlinearity& N) {
  Grid g = make_centered_grid(cfg.n, cfg.half, cfg.h);
  const int m = static_cast<int>(std::max<size_t>(cfg.e.size(), cfg.value.size()));
  VectorField u(g, m);
  const double f0 = cfg.amplitude > 0 ? cfg.amplitude : N.f0();

  if (cfg.generator == "half-space") {
    Point nu{0, 0, 0};
    for (size_t a = 0; a < cfg.nu.size() && a < 3; ++a) nu[a] = cfg.nu[a];
    const double nn = norm_n(nu, g.n);
    if (!(nn > 0)) throw InputError("boundary: nu must be nonzero");
    for (int a = 0; a < g.n; ++a) nu[static_cast<size_t>(a)] /= nn;
    VecM e(m);
    for (size_t c = 0; c < cfg.e.size() && c < static_cast<size_t>(m); ++c) e[static_cast<int>(c)] = cfg.e[c];
    const double en = e.norm();
    if (!(en > 0)) throw InputError("boundary: e must be nonzero");
    for (int c = 0; c < m; ++c) e[c] /= en;
    const HalfSpaceSolution H(g.n, nu, e, f0);
    u.mask_hull();
    u.fill_boundary([&H](const Point& x) { return H.eval(x); });
  } else if (cfg.generator == "constant") {
    u.mask_hull();
    VecM v(m);
    for (size_t c = 0; c < cfg.value.size() && c < static_cast<size_t>(m); ++c)
      v[static_cast<int>(c)] = cfg.value[c];
    u.fill_boundary([v](const Point&) { return v; });
  } else if (cfg.generator == "radial") {
    const double R = cfg.disk_radius > 0 ? cfg.disk_radius : cfg.half * 0.9;
    u.mask_outside_ball(Point{0, 0, 0}, R);
    VecM e(m);
    for (size_t c = 0; c < cfg.e.size() && c < static_cast<size_t>(m); ++c) e[static_cast<int>(c)] = cfg.e[c];
    const double en = e.norm();
    if (!(en > 0)) throw InputError("boundary: e must be nonzero");
    for (int c = 0; c < m; ++c) e[c] /= en;
    const double mag = cfg.magnitude;
    u.fill_boundary([e, mag](const Point&) { return mag * e; });
  } else if (cfg.generator == "file") {
    throw InputError("boundary: file generator resolved by the CLI, not here");
  } else {
    throw InputError("boundary: unknown generator '" + cfg.generator + "'");
  }
  return u;
}

}  // namespace fbreg
