#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "csvx/cli.hpp"
#include "csvx/error.hpp"
#include "csvx/field_io.hpp"

using namespace csvx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("csvx_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_text(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

fs::path write_config(const std::string& name, json j) {
  j["output"] = (scratch() / (name + "_out")).string();
  return write_text(name + ".json", j.dump(2));
}

json pair_config(double lambda) {
  return {{"grid", 32},
          {"coupling", "A2"},
          {"vortices", {{"z1", {{0.25, 0.5, 1}}}, {"z2", {{0.75, 0.5, 1}}}}},
          {"lambda", lambda}};
}

int run_bin(const std::string& args) {
  const char* bin = std::getenv("CSVX_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " > " +
                          (scratch() / "last_stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_stdout() {
  std::ifstream in(scratch() / "last_stdout.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("config round trip") {
  json j = pair_config(150);
  j["lattice"] = {{"e1", {1.0, 0.0}}, {"e2", {0.3, 1.2}}};
  j["solver"] = {{"grad_tol", 1e-9}, {"lbfgs_memory", 7}};
  j["seed"] = 42;
  j["write_csv"] = true;
  const cli::RunConfig c = cli::parse_config(j);
  CHECK(c.n1 == 32);
  CHECK(c.solver.lbfgs_memory == 7);
  CHECK(c.solver.seed == 42);
  CHECK(c.vortex_numbers() == VortexNumbers{1, 1});
  CHECK(cli::parse_config(cli::config_to_json(c)) == c);

  json custom = pair_config(150);
  custom["coupling"] = {{"a", 3.0}, {"b", 1.0}, {"c", 0.5}, {"d", 2.0}};
  const cli::RunConfig cc = cli::parse_config(custom);
  CHECK_FALSE(cc.preset);
  CHECK(cli::parse_config(cli::config_to_json(cc)) == cc);

  json kap = pair_config(1);
  kap.erase("lambda");
  kap["kappa"] = 0.2;
  kap["v"] = 2.0;
  const cli::RunConfig ck = cli::parse_config(kap);
  CHECK(ck.resolved_lambda() == doctest::Approx(4 * 16 / 0.04));

  cli::Overrides o;
  o.out = "elsewhere";
  o.seed = 9;
  const cli::RunConfig applied = cli::apply(c, o);
  CHECK(applied.output == "elsewhere");
  CHECK(applied.solver.seed == 9);
}

TEST_CASE("invalid configs are parse errors") {
  const auto code = [](const json& j) {
    try {
      cli::parse_config(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  json j = pair_config(100);
  j["bogus"] = 1;
  CHECK(code(j) == ErrorCode::Parse);
  j = pair_config(100);
  j["kappa"] = 1.0;
  CHECK(code(j) == ErrorCode::Parse);
  j = pair_config(100);
  j["grid"] = 31;
  CHECK(code(j) == ErrorCode::Parse);
  j = pair_config(100);
  j["coupling"] = "E8";
  CHECK(code(j) == ErrorCode::Parse);
  j = pair_config(100);
  j["sweep"] = json::array();
  CHECK(code(j) == ErrorCode::Parse);
  j = pair_config(-3);
  CHECK(code(j) == ErrorCode::Parse);
  j = pair_config(100);
  j["coupling"] = {{"a", 1.0}, {"b", 2.0}, {"c", 2.0}, {"d", 1.0}};
  CHECK(code(j) == ErrorCode::Parse);
  CHECK_THROWS_AS(cli::load_config(scratch() / "missing.json"), Error);
}

TEST_CASE("threshold subcommand in process") {
  std::ostringstream out;
  const cli::RunConfig c = cli::parse_config(pair_config(100));
  CHECK(cli::cmd_threshold(c, out) == cli::kPass);
  CHECK(out.str().find("lambda*") != std::string::npos);
}

TEST_CASE("exit codes of the executable") {
  SUBCASE("vacuum solve passes") {
    const fs::path cfg = write_config("vac", {{"grid", 32}, {"coupling", "B2"}, {"lambda", 100}});
    CHECK(run_bin("--config " + cfg.string() + " solve") == 0);
    const json summary = read_json(scratch() / "vac_out" / "summary.json");
    CHECK(summary.at("converged").get<bool>());
    CHECK(fs::exists(scratch() / "vac_out" / "report.json"));
  }
  SUBCASE("below the threshold: certificate") {
    const fs::path cfg = write_config("below", pair_config(8 * pi - 0.1));
    CHECK(run_bin("--config " + cfg.string() + " solve") == 2);
    const json cert = read_json(scratch() / "below_out" / "certificate.json");
    CHECK(cert.at("lambda_star").get<double>() == doctest::Approx(8 * pi));
  }
  SUBCASE("malformed JSON") {
    const fs::path cfg = write_text("broken.json", "{\"grid\": 32, ");
    CHECK(run_bin("--config " + cfg.string() + " solve") == 64);
  }
  SUBCASE("missing file") {
    CHECK(run_bin("--config " + (scratch() / "nope.json").string() + " solve") == 74);
  }
  SUBCASE("unknown subcommand or missing option") {
    CHECK(run_bin("solve") == 64);
  }
  SUBCASE("empty sweep rejected") {
    json j = pair_config(100);
    j["sweep"] = json::array();
    const fs::path cfg = write_config("empty_sweep", j);
    CHECK(run_bin("--config " + cfg.string() + " sweep") == 64);
  }
  SUBCASE("threshold with no vortices") {
    const fs::path cfg = write_config("thr", {{"grid", 32}, {"coupling", "A2"}, {"lambda", 10}});
    CHECK(run_bin("--config " + cfg.string() + " threshold") == 0);
    CHECK(last_stdout().find("no threshold") != std::string::npos);
  }
}

TEST_CASE("solve then verify, and tampering is detected") {
  const fs::path cfg = write_config("pair", pair_config(200));
  const fs::path out = scratch() / "pair_out";
  REQUIRE(run_bin("--config " + cfg.string() + " solve") == 0);
  CHECK(run_bin("--config " + cfg.string() + " verify") == 0);
  const json v = read_json(out / "verify.json");
  CHECK(v.at("pass").get<bool>());
  CHECK(v.at("branch_tag").get<std::string>() == "minimizer");

  const GridPtr g = TorusGrid::create(TorusLattice::unit_square(), 32, 32);
  ScalarField v1 = read_field(out / "v1.csvx", g);
  v1[100] += 0.5;
  write_field(out / "v1_tampered.csvx", v1);
  CHECK(run_bin("--config " + cfg.string() + " verify --v1 " + (out / "v1_tampered.csvx").string()) == 1);

  const GridPtr other = TorusGrid::create(TorusLattice::unit_square(), 16, 16);
  write_field(out / "v1_small.csvx", ScalarField(other));
  CHECK(run_bin("--config " + cfg.string() + " verify --v1 " + (out / "v1_small.csvx").string()) != 0);
}

TEST_CASE("sweep writes one entry per lambda") {
  json j = pair_config(1);
  j.erase("lambda");
  j["sweep"] = {32 * pi, 128 * pi};
  const fs::path cfg = write_config("sweep", j);
  CHECK(run_bin("--config " + cfg.string() + " --workers 2 sweep") == 0);
  const fs::path out = scratch() / "sweep_out";
  CHECK(fs::exists(out / "entry_0" / "summary.json"));
  CHECK(fs::exists(out / "entry_1" / "summary.json"));
  const json gaps = read_json(out / "gaps.json");
  CHECK(gaps.at("rows").size() == 2);
}
