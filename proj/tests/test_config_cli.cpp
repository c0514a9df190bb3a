#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "speclyap/commands.hpp"
#include "speclyap/config.hpp"

using namespace speclyap;

namespace {

RunConfig cfg_of(std::vector<std::string> overrides) {
  std::map<std::string, std::string> keys;
  apply_overrides(keys, overrides);
  return build_run_config(keys);
}

std::string cli(std::vector<std::string> args, int expect) {
  std::string text;
  const int code = run_cli(args, &text);
  CHECK(code == expect);
  return text;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("speclyap_test_" + name);
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto keys = parse_config_text("# comment\ngeometry = sphere  # trailing\n\nL=3\n");
  CHECK(keys.at("geometry") == "sphere");
  CHECK(keys.at("L") == "3");
  CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("no equals sign\n"), ConfigError);
}

TEST_CASE("config validation names the offending key") {
  auto fails_on = [](std::vector<std::string> o, const std::string& key) {
    try {
      cfg_of(std::move(o));
      FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(key) != std::string::npos, e.what());
    }
  };
  fails_on({"geometry=torus"}, "geometry");
  fails_on({"alpha=0"}, "alpha");
  fails_on({"gamma=-1"}, "gamma");
  fails_on({"geometry=oscillator", "d=4"}, "d");
  fails_on({"cutoff=0"}, "cutoff");
  fails_on({"cutoff=abc"}, "cutoff");
  fails_on({"geometry=sphere", "cutoff=5"}, "L");
  fails_on({"L=2"}, "L");
  fails_on({"noise.kind=pink"}, "noise.kind");
  fails_on({"noise.sigma2=0"}, "noise.sigma2");
  fails_on({"noise.kind=diagonal", "noise.values=1,2"}, "noise.values");
  fails_on({"noise.kind=kernel-custom-table"}, "noise.table");
  fails_on({"sim.dt=0"}, "sim.dt");
  fails_on({"sim.steps=100", "sim.burn_in=100"}, "sim.burn_in");
  fails_on({"output.format=xml"}, "output.format");
  fails_on({"bogus.key=1"}, "bogus.key");
  fails_on({"seed=-3"}, "seed");
}

TEST_CASE("config defaults and derived values") {
  auto c = cfg_of({});
  CHECK(c.geometry == Geometry::disk);
  CHECK(c.cutoff == 8);
  c = cfg_of({"geometry=sphere", "L=3"});
  CHECK(c.cutoff == 16);
  c = cfg_of({"geometry=sphere", "cutoff=9"});
  CHECK(c.L == 2);
  c = cfg_of({"geometry=oscillator", "d=3", "gamma=1"});
  CHECK_FALSE(c.warnings.empty());
  c = cfg_of({"sim.dt=5"});
  CHECK_FALSE(c.warnings.empty());
}

TEST_CASE("spectrum command examples") {
  auto doc = out::dump(cmd_spectrum(cfg_of({"geometry=sphere", "L=1"})).doc);
  CHECK(doc.find("\"eigenvalues\": [-0.5, -2.5, -2.5, -2.5]") != std::string::npos);
  doc = out::dump(cmd_spectrum(cfg_of({"geometry=oscillator", "gamma=1", "cutoff=3"})).doc);
  CHECK(doc.find("\"eigenvalues\": [-1.5, -2.5, -3.5]") != std::string::npos);
  doc = out::dump(cmd_spectrum(cfg_of({"cutoff=3"})).doc);
  CHECK(doc.find("\"eigenvalues\": [-6.28318596294678") != std::string::npos);
  CHECK(doc.find("\"parity\": \"sin\"") != std::string::npos);
}

TEST_CASE("solve command with white noise") {
  const auto res = cmd_solve(cfg_of({"cutoff=5", "noise.sigma2=2"}));
  CHECK(res.exit_code == 0);
  const auto text = out::dump(res.doc);
  for (const char* key : {"\"modes\"", "\"eigenvalues\"", "\"Q\"", "\"P\"", "\"residual_rel\"", "\"min_eig_P\"",
                          "\"bounds\"", "\"coarse\"", "\"improved\"", "\"block_structure\""})
    CHECK_MESSAGE(text.find(key) != std::string::npos, key);
  CHECK(text.find("\"residual_rel\": 0.0") != std::string::npos);
}

TEST_CASE("solve reports block structure for an isotropic kernel") {
  const auto text =
      out::dump(cmd_solve(cfg_of({"cutoff=10", "noise.kind=kernel-gaussian", "quad.radial=32", "quad.angular=48"})).doc);
  const auto pos = text.find("\"block_structure\"");
  REQUIRE(pos != std::string::npos);
  CHECK(text.find("\"block_diagonal\": true", pos) != std::string::npos);
  CHECK(text.find("\"block_diagonal\": false", pos) == std::string::npos);
}

TEST_CASE("verify command checks its preconditions") {
  CHECK_THROWS_AS(cmd_verify(cfg_of({"cutoff=8", "verify.n_ref=8"})), ConfigError);
  CHECK_THROWS_AS(cmd_verify(cfg_of({"cutoff=8", "verify.n_ref=50", "verify.sweep=10,60"})), ConfigError);
  const auto res = cmd_verify(cfg_of({"cutoff=8", "verify.n_ref=60", "verify.sweep=5,10,20", "verify.samples=50"}));
  CHECK(res.exit_code == 0);
}

TEST_CASE("verify passes on every geometry") {
  CHECK(cmd_verify(cfg_of({"geometry=sphere", "L=2", "verify.n_ref=49", "verify.sweep=4,9,16,25",
                           "verify.samples=100"}))
            .exit_code == 0);
  CHECK(cmd_verify(cfg_of({"geometry=oscillator", "d=2", "gamma=1.5", "cutoff=6", "verify.n_ref=55",
                           "verify.sweep=6,10,15,21", "verify.samples=100", "noise.kind=diagonal"}))
            .exit_code == 0);
}

TEST_CASE("simulate command with zero noise") {
  const auto res = cmd_simulate(cfg_of({"noise.kind=none", "sim.steps=400", "sim.paths=2"}));
  CHECK(res.exit_code == 0);
  CHECK(out::dump(res.doc).find("\"P_hat\": [\n    [0.0, 0.0, 0.0") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  cli({"spectrum", "--set", "alpha=-1"}, kExitConfig);
  cli({"frobnicate"}, kExitConfig);
  cli({"spectrum", "--config", "/nonexistent/file.cfg"}, kExitConfig);
  cli({"spectrum", "--set", "cutoff=3"}, kExitOk);
  cli({"solve", "--set", "cutoff=100000"}, kExitConfig);
  cli({"solve", "--set", "noise.kind=kernel-gaussian", "--set", "quad.radial=200", "--set", "quad.angular=200"},
      kExitComputation);
  // Far from equilibrium after 200 tiny steps from X = 0.
  cli({"simulate", "--set", "sim.dt=1e-5", "--set", "sim.steps=200", "--set", "sim.burn_in=0"}, kExitVerification);
}

TEST_CASE("cli reads config files and writes output files") {
  const auto cfg_path = temp_path("run.cfg");
  const auto out_path = temp_path("out.csv");
  {
    std::ofstream f(cfg_path);
    f << "geometry = oscillator\nd = 1\ngamma = 1\ncutoff = 3\noutput.format = csv\n";
  }
  std::string text;
  CHECK(run_cli({"spectrum", "--config", cfg_path.string(), "--output", out_path.string()}, &text) == 0);
  CHECK(text.empty());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().rfind("field,row,col,value\n", 0) == 0);
  CHECK(ss.str().find("eigenvalues,2,,-3.5\n") != std::string::npos);
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(out_path);
}

TEST_CASE("custom kernel table round trip") {
  const QuadratureOrders tiny{4, 6, 10, 4};
  const auto grid = make_grid(Geometry::disk, 1, tiny);
  const auto table_path = temp_path("kernel.csv");
  {
    std::ofstream f(table_path);
    f << "row,col,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i; j < grid.size(); ++j) {
        const double dx = grid.points[i].x[0] - grid.points[j].x[0];
        const double dy = grid.points[i].x[1] - grid.points[j].x[1];
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", std::exp(-(dx * dx + dy * dy) / 0.25));
        f << i << ',' << j << ',' << buf << '\n';
      }
  }
  const std::vector<std::string> common{"cutoff=4", "quad.radial=4", "quad.angular=6"};
  auto o1 = common;
  o1.push_back("noise.kind=kernel-custom-table");
  o1.push_back("noise.table=" + table_path.string());
  auto o2 = common;
  o2.push_back("noise.kind=kernel-gaussian");
  const auto q1 = project_noise(make_noise_spec(cfg_of(o1)), Basis(Geometry::disk, {}, disk_spectrum({}, 4)), tiny).Q;
  const auto q2 = project_noise(make_noise_spec(cfg_of(o2)), Basis(Geometry::disk, {}, disk_spectrum({}, 4)), tiny).Q;
  CHECK(relative_frobenius(q1, q2) <= 1e-15);
  {
    std::ofstream f(table_path, std::ios::app);
    f << "0,0,123\n";
  }
  CHECK_THROWS_AS(make_noise_spec(cfg_of(o1)), ConfigError);
  std::filesystem::remove(table_path);
}

TEST_CASE("json and csv writers") {
  auto v = out::Value::object();
  v["x"] = 1.0;
  v["y"] = 0.1;
  v["s"] = "a\"b";
  v["n"] = std::nan("");
  const auto text = out::dump(v);
  CHECK(text.find("\"x\": 1.0") != std::string::npos);
  CHECK(text.find("\"y\": 0.10000000000000001") != std::string::npos);
  CHECK(text.find("\"s\": \"a\\\"b\"") != std::string::npos);
  CHECK(text.find("\"n\": null") != std::string::npos);
  auto m = out::Value::object();
  m["M"] = out::matrix(SymMatrix::from_rows({{1, 2}, {2, 3}}));
  CHECK(out::to_csv(m) == "field,row,col,value\nM,0,0,1.0\nM,0,1,2.0\nM,1,0,2.0\nM,1,1,3.0\n");
}
