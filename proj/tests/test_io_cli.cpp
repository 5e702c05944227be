#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "fbreg/config.hpp"
#include "fbreg/io.hpp"

using namespace fbreg;

namespace {

std::string tmp_path(const char* name) { return std::string("/tmp/fbreg_test_") + name; }

std::vector<char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("field files round-trip bit-exactly") {
  Grid g(2, {17, 19, 1}, Point{-0.5, 0.25, 0}, 1.0 / 64);
  VectorField u(g, 3);
  for (size_t i = 0; i < u.values.size(); ++i)
    u.values[i] = std::sin(0.001 * static_cast<double>(i)) * 1e3;
  const std::string path = tmp_path("roundtrip.vfb");
  write_field(path, u);
  const VectorField v = read_field(path);
  CHECK(v.grid.n == 2);
  CHECK(v.m == 3);
  CHECK(v.grid.dims[0] == 17);
  CHECK(v.grid.dims[1] == 19);
  CHECK(v.grid.h == u.grid.h);
  REQUIRE(v.values.size() == u.values.size());
  for (size_t i = 0; i < u.values.size(); ++i) CHECK(v.values[i] == u.values[i]);
  // writing the reread field reproduces identical bytes
  const std::string path2 = tmp_path("roundtrip2.vfb");
  write_field(path2, v);
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("field reader rejects foreign bytes") {
  const std::string path = tmp_path("bad.vfb");
  write_text_file(path, "definitely not a field file");
  CHECK_THROWS_AS(read_field(path), InputError);
  std::remove(path.c_str());
}

TEST_CASE("double formatting round-trips and uses a point decimal") {
  for (double v : {0.1, -3.25e-17, 12345.678, 1.0 / 3.0}) {
    const std::string s = format_double(v);
    CHECK(s.find(',') == std::string::npos);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("toml subset parses sections, arrays and strings") {
  const RawConfig raw = parse_toml(
      "# comment\n[grid]\nn = 2\nhalf = 1.5 # trailing\n\n[nonlinearity]\n"
      "family = \"exp-saturating\"\nparams = [1.0, 4.0]\n\n[solver]\nacceleration = false\n");
  const RunConfig cfg = apply_raw(raw);
  CHECK(cfg.n == 2);
  CHECK(cfg.half == 1.5);
  CHECK(cfg.family == "exp-saturating");
  REQUIRE(cfg.params.size() == 2);
  CHECK(cfg.params[1] == 4.0);
  CHECK_FALSE(cfg.acceleration);
}

TEST_CASE("unknown keys and parse errors carry line numbers") {
  try {
    apply_raw(parse_toml("[grid]\nn = 2\nbogus_key = 1\n"));
    FAIL("expected a throw");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("bogus_key") != std::string::npos);
  }
  try {
    parse_toml("[grid]\nn == 2\n");
    FAIL("expected a throw");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_raw(parse_toml("[made_up_section]\nx = 1\n")), InputError);
}

TEST_CASE("defaults text parses back and covers every section") {
  const std::string text = print_defaults();
  const RawConfig raw = parse_toml(text);
  for (const char* sec :
       {"grid", "nonlinearity", "boundary", "solver", "audit", "epi", "spectral", "oracle"})
    CHECK(raw.count(sec) == 1);
  CHECK_NOTHROW(apply_raw(raw));
}

TEST_CASE("family specs parse into nonlinearities") {
  const Nonlinearity lin = parse_family_spec("linear:1", 10.0);
  CHECK(lin.f0() == doctest::Approx(1.0));
  const Nonlinearity es = parse_family_spec("exp-saturating:1:4", 10.0);
  CHECK(es.f0() == doctest::Approx(1.0));
  CHECK(es.f(50.0) == doctest::Approx(4.0));
}

TEST_CASE("boundary field generators") {
  RunConfig cfg;
  cfg.n = 2;
  cfg.half = 1.0;
  cfg.h = 1.0 / 16;
  cfg.e = {1.0, 0.0};
  const Nonlinearity N = config_nonlinearity(cfg);
  const VectorField hs = config_boundary_field(cfg, N);
  CHECK(hs.m == 2);
  // hull corner (1,1): value = max(1,0)^2/2 = 0.5 in component 0
  const auto idx = hs.grid.index({hs.grid.dims[0] - 1, hs.grid.dims[1] - 1, 0});
  CHECK(hs.at(idx)[0] == doctest::Approx(0.5));

  cfg.generator = "constant";
  cfg.value = {0.25};
  cfg.e = {1.0};
  const VectorField cst = config_boundary_field(cfg, N);
  CHECK(cst.m == 1);
  CHECK(cst.at(0)[0] == doctest::Approx(0.25));

  cfg.generator = "radial";
  cfg.disk_radius = 0.8;
  cfg.magnitude = 0.3;
  const VectorField rad = config_boundary_field(cfg, N);
  bool masked_outside = true;
  for (std::int64_t k = 0; k < rad.grid.node_count(); ++k) {
    const Point x = rad.grid.coords(rad.grid.unindex(k));
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
    if (r >= 0.8 && !rad.mask[static_cast<size_t>(k)]) masked_outside = false;
  }
  CHECK(masked_outside);
}
