#include "csvx/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "csvx/diagnostics.hpp"
#include "csvx/error.hpp"
#include "csvx/field_io.hpp"
#include "csvx/functional.hpp"

namespace csvx::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, what); }

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
  }
}

Vec2 vec2(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) bad(what + " must be a list of two numbers");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

std::vector<Vortex> vortex_list(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list of [s1, s2, multiplicity]");
  std::vector<Vortex> out;
  for (const json& e : j) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) {
      bad(what + " entries must be [s1, s2] or [s1, s2, multiplicity]");
    }
    Vortex p{e.at(0).get<double>(), e.at(1).get<double>(), 1};
    if (e.size() == 3) p.multiplicity = e.at(2).get<int>();
    out.push_back(p);
  }
  return out;
}

json vortex_json(const std::vector<Vortex>& z) {
  json out = json::array();
  for (const Vortex& p : z) out.push_back({p.s1, p.s2, p.multiplicity});
  return out;
}

void parse_solver(const json& j, SolveOptions& o) {
  only_keys(j,
            {"grad_tol", "max_iter", "backoff", "max_backoffs", "newton_switch_tol",
             "lbfgs_memory", "newton_tol", "newton_max_iter", "forcing", "gmres_restart",
             "gmres_max_iter"},
            "solver");
  const auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("grad_tol", o.grad_tol);
  get("max_iter", o.max_iter);
  get("backoff", o.backoff);
  get("max_backoffs", o.max_backoffs);
  get("newton_switch_tol", o.newton_switch_tol);
  get("lbfgs_memory", o.lbfgs_memory);
  get("newton_tol", o.newton_tol);
  get("newton_max_iter", o.newton_max_iter);
  get("forcing", o.forcing);
  get("gmres_restart", o.gmres_restart);
  get("gmres_max_iter", o.gmres_max_iter);
}

json solver_json(const SolveOptions& o) {
  return {{"grad_tol", o.grad_tol},           {"max_iter", o.max_iter},
          {"backoff", o.backoff},             {"max_backoffs", o.max_backoffs},
          {"newton_switch_tol", o.newton_switch_tol}, {"lbfgs_memory", o.lbfgs_memory},
          {"newton_tol", o.newton_tol},       {"newton_max_iter", o.newton_max_iter},
          {"forcing", o.forcing},             {"gmres_restart", o.gmres_restart},
          {"gmres_max_iter", o.gmres_max_iter}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

std::shared_ptr<const Background> make_background(const RunConfig& c, std::ostream& out) {
  const GridPtr grid = TorusGrid::create(c.lattice(), c.n1, c.n2);
  auto bg = std::make_shared<Background>(build_background(grid, VortexSet(c.z1), VortexSet(c.z2)));
  for (const std::string& w : bg->warnings) out << "warning: " << w << "\n";
  return bg;
}

json summary_json(const SolutionReport& r) {
  return {{"lambda", r.lambda},
          {"kappa", r.kappa},
          {"lambda_star", optional_number(r.lambda_star)},
          {"fluxes", r.fluxes},
          {"energy", r.energy},
          {"max_eu", r.max_principle.max_eu},
          {"residuals", r.residuals},
          {"constraint_residuals", r.constraint_residuals},
          {"branch_tag", r.branch_tag},
          {"converged", r.converged}};
}

void print_report(const SolutionReport& r, std::ostream& out) {
  out << std::setprecision(10);
  out << "lambda = " << r.lambda << "  kappa = " << r.kappa << "  v = " << r.v << "\n";
  if (r.lambda_star) out << "lambda* = " << *r.lambda_star << "  kappa* = " << *r.kappa_star << "\n";
  out << "fluxes = (" << r.fluxes[0] << ", " << r.fluxes[1] << ")  predicted ("
      << r.predicted_fluxes[0] << ", " << r.predicted_fluxes[1] << ")\n";
  out << "energy = " << r.energy << "  predicted " << r.predicted_energy << "\n";
  out << "charges = (" << r.charges[0] << ", " << r.charges[1] << ")\n";
  out << "max e^u = (" << r.max_principle.max_eu[0] << ", " << r.max_principle.max_eu[1] << ") "
      << to_string(r.max_principle.status) << "\n";
  out << "residuals = (" << r.residuals[0] << ", " << r.residuals[1] << ")  constraints ("
      << r.constraint_residuals[0] << ", " << r.constraint_residuals[1] << ")\n";
  out << "branch = " << r.branch_tag << "  converged = " << (r.converged ? "yes" : "no") << "\n";
  for (const std::string& n : r.notes) out << "note: " << n << "\n";
  for (const std::string& f : r.failures) out << "FAIL: " << f << "\n";
  out << (r.pass ? "PASS" : "FAIL") << "\n";
}

void dump_state(const fs::path& dir, const std::string& suffix, const SolutionState& s,
                bool csv) {
  const ScalarField v1 = s.v1(), v2 = s.v2();
  write_field(dir / ("v1" + suffix + ".csvx"), v1);
  write_field(dir / ("v2" + suffix + ".csvx"), v2);
  if (csv) {
    write_field_csv(dir / ("v1" + suffix + ".csv"), v1);
    write_field_csv(dir / ("v2" + suffix + ".csv"), v2);
  }
}

json certificate_json(const NonexistenceCertificate& cert) {
  return {{"lambda", cert.lambda},
          {"lambda_star", cert.lambda_star},
          {"coupling", {cert.a, cert.b, cert.c, cert.d}},
          {"vortex_numbers", {cert.n.n1, cert.n.n2}},
          {"area", cert.area},
          {"statement",
           "no solution exists: integrating both equations forces lambda >= lambda*"}};
}

void require_parameter(const RunConfig& c) {
  if (!c.lambda && !c.kappa) bad("this command needs 'lambda' or 'kappa'");
}

}  // namespace

CouplingMatrix RunConfig::coupling_matrix() const {
  if (preset) return from_preset(*preset);
  return {coupling[0], coupling[1], coupling[2], coupling[3]};
}

PhysicalParams RunConfig::params() const {
  if (lambda) return PhysicalParams::from_lambda(*lambda, v);
  if (kappa) return PhysicalParams::from_kappa(*kappa, v);
  throw Error(ErrorCode::Parse, "neither lambda nor kappa is set");
}

VortexNumbers RunConfig::vortex_numbers() const {
  return {VortexSet(z1).total(), VortexSet(z2).total()};
}

void RunConfig::validate() const {
  try {
    (void)lattice();
    if (n1 < 16 || n2 < 16 || n1 % 2 || n2 % 2) bad("grid sizes must be even and at least 16");
    (void)coupling_matrix();
    (void)VortexSet(z1);
    (void)VortexSet(z2);
    if (lambda && kappa) bad("give exactly one of 'lambda' and 'kappa'");
    if (!lambda && !kappa && sweep.empty()) bad("one of 'lambda', 'kappa' or 'sweep' is required");
    if (lambda && !(*lambda > 0.0)) bad("lambda must be positive");
    if (kappa && !(*kappa > 0.0)) bad("kappa must be positive");
    if (!(v > 0.0)) bad("v must be positive");
    for (double l : sweep) {
      if (!(l > 0.0)) bad("sweep values must be positive");
    }
    if (!std::is_sorted(sweep.begin(), sweep.end()) &&
        !std::is_sorted(sweep.rbegin(), sweep.rend())) {
      bad("sweep values must be sorted");
    }
    solver.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, std::string("invalid config: ") + e.what());
  }
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  try {
    only_keys(j,
              {"lattice", "grid", "coupling", "vortices", "lambda", "kappa", "v", "solver",
               "sweep", "second_solution", "write_csv", "output", "seed"},
              "config");
    if (j.contains("lattice")) {
      const json& l = j.at("lattice");
      only_keys(l, {"e1", "e2"}, "lattice");
      c.e1 = vec2(l.at("e1"), "lattice.e1");
      c.e2 = vec2(l.at("e2"), "lattice.e2");
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.is_number_integer()) {
        c.n1 = c.n2 = g.get<int>();
      } else if (g.is_array() && g.size() == 2) {
        c.n1 = g.at(0).get<int>();
        c.n2 = g.at(1).get<int>();
      } else {
        bad("grid must be an integer or [n1, n2]");
      }
    }
    if (!j.contains("coupling")) bad("'coupling' is required");
    const json& k = j.at("coupling");
    if (k.is_string()) {
      const auto p = parse_preset(k.get<std::string>());
      if (!p) bad("unknown coupling preset '" + k.get<std::string>() + "'");
      c.preset = *p;
      const CouplingMatrix m = from_preset(*p);
      c.coupling = {m.a(), m.b(), m.c(), m.d()};
    } else {
      only_keys(k, {"a", "b", "c", "d"}, "coupling");
      c.preset.reset();
      c.coupling = {k.at("a").get<double>(), k.at("b").get<double>(), k.at("c").get<double>(),
                    k.at("d").get<double>()};
    }
    if (j.contains("vortices")) {
      const json& z = j.at("vortices");
      only_keys(z, {"z1", "z2"}, "vortices");
      if (z.contains("z1")) c.z1 = vortex_list(z.at("z1"), "vortices.z1");
      if (z.contains("z2")) c.z2 = vortex_list(z.at("z2"), "vortices.z2");
    }
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("v")) c.v = j.at("v").get<double>();
    if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
    if (j.contains("seed")) c.solver.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      const json& list = s.is_object() ? s.at("lambdas") : s;
      if (s.is_object()) only_keys(s, {"lambdas"}, "sweep");
      c.sweep = list.get<std::vector<double>>();
      if (c.sweep.empty()) bad("sweep needs a non-empty lambda list");
    }
    if (j.contains("second_solution")) c.second_solution = j.at("second_solution").get<bool>();
    if (j.contains("write_csv")) c.write_csv = j.at("write_csv").get<bool>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const json::exception& e) {
    bad(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["lattice"] = {{"e1", {c.e1.x, c.e1.y}}, {"e2", {c.e2.x, c.e2.y}}};
  j["grid"] = {c.n1, c.n2};
  if (c.preset) {
    j["coupling"] = std::string(to_string(*c.preset));
  } else {
    j["coupling"] = {{"a", c.coupling[0]}, {"b", c.coupling[1]}, {"c", c.coupling[2]},
                     {"d", c.coupling[3]}};
  }
  j["vortices"] = {{"z1", vortex_json(c.z1)}, {"z2", vortex_json(c.z2)}};
  if (c.lambda) j["lambda"] = *c.lambda;
  if (c.kappa) j["kappa"] = *c.kappa;
  j["v"] = c.v;
  j["solver"] = solver_json(c.solver);
  j["seed"] = c.solver.seed;
  if (!c.sweep.empty()) j["sweep"] = {{"lambdas", c.sweep}};
  j["second_solution"] = c.second_solution;
  j["write_csv"] = c.write_csv;
  j["output"] = c.output;
  return j;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot read config " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

RunConfig apply(RunConfig c, const Overrides& o) {
  if (o.out) c.output = *o.out;
  if (o.seed) c.solver.seed = *o.seed;
  return c;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  require_parameter(c);
  const PhysicalParams params = c.params();
  const CouplingMatrix k = c.coupling_matrix();
  const VortexNumbers n = c.vortex_numbers();
  const fs::path dir = c.output;
  make_dir(dir);
  if (auto cert = nonexistence_gate(k, params.lambda, n, c.lattice().area())) {
    write_json(dir / "certificate.json", certificate_json(*cert));
    out << std::setprecision(12) << "nonexistent: lambda = " << cert->lambda
        << " is below the necessary threshold lambda* = " << cert->lambda_star
        << " (integrated equations)\n";
    return kNonexistent;
  }
  const auto bg = make_background(c, out);
  const Model m{k, params.lambda, bg};
  std::optional<SolutionState> solved;
  try {
    solved = solve(m, c.solver);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io || e.code() == ErrorCode::Parse) throw;
    out << "solver failed: " << e.what() << "\n";
    write_json(dir / "summary.json", {{"lambda", params.lambda},
                                      {"kappa", params.kappa},
                                      {"converged", false},
                                      {"error", e.what()}});
    return kFailure;
  }
  const SolutionState& s = *solved;
  const SolutionReport r = verify(m, s, params);
  dump_state(dir, "", s, c.write_csv);
  write_json(dir / "report.json", r);
  write_json(dir / "summary.json", summary_json(r));
  print_report(r, out);

  if (c.second_solution) {
    const SecondSolutionResult sec = find_second_solution(m, s, c.solver);
    json j{{"found", sec.found()},
           {"starts_tried", sec.report.starts_tried},
           {"newton_failures", sec.report.newton_failures},
           {"rejected", sec.report.rejected},
           {"log", sec.report.log},
           {"first_energy", sec.first_energy}};
    if (sec.found()) {
      j["second_energy"] = sec.second_energy;
      j["distance"] = sec.distance;
      dump_state(dir, "_second", *sec.state, c.write_csv);
      write_json(dir / "report_second.json", verify(m, *sec.state, params));
    }
    write_json(dir / "second_solution.json", j);
    out << "second solution: " << (sec.found() ? "found" : "not found") << " after "
        << sec.report.starts_tried << " starts\n";
  }
  return r.pass ? kPass : kFailure;
}

int cmd_sweep(const RunConfig& c, int workers, std::ostream& out) {
  if (c.sweep.empty()) bad("sweep needs a non-empty lambda list");
  const CouplingMatrix k = c.coupling_matrix();
  const fs::path dir = c.output;
  make_dir(dir);
  const auto bg = make_background(c, out);

  // Contiguous chunks keep warm starts within each worker.
  const std::size_t count = c.sweep.size();
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, count);
  std::vector<ContinuationEntry> entries(count);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = count * t / w, hi = count * (t + 1) / w;
    threads.emplace_back([&, lo, hi] {
      const std::vector<double> chunk(c.sweep.begin() + lo, c.sweep.begin() + hi);
      std::vector<ContinuationEntry> res = continuation(k, chunk, bg, c.solver);
      for (std::size_t i = 0; i < res.size(); ++i) entries[lo + i] = std::move(res[i]);
    });
  }
  for (auto& th : threads) th.join();

  bool all_pass = true;
  std::vector<SolutionState> good;
  json reports = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const ContinuationEntry& e = entries[i];
    const fs::path sub = dir / ("entry_" + std::to_string(i));
    make_dir(sub);
    if (!e.state) {
      all_pass = false;
      out << "lambda = " << e.lambda << ": failed (" << e.error << ")\n";
      write_json(sub / "summary.json", {{"lambda", e.lambda}, {"converged", false}, {"error", e.error}});
      continue;
    }
    const PhysicalParams params = PhysicalParams::from_lambda(e.lambda, c.v);
    const SolutionReport r = verify(Model{k, e.lambda, bg}, *e.state, params);
    dump_state(sub, "", *e.state, c.write_csv);
    write_json(sub / "report.json", r);
    write_json(sub / "summary.json", summary_json(r));
    if (!r.pass) {
      all_pass = false;
      out << "lambda = " << e.lambda << ": verification failed\n";
    }
    good.push_back(*e.state);
  }

  const GapTable table = asymptotic_gaps(k, bg, good);
  std::ostringstream tsv;
  tsv << std::setprecision(12);
  tsv << "# lambda\tl1_gap_1\tl1_gap_2\tl2_gap_1\tl2_gap_2\tenergy\tmax_eu_1\tmax_eu_2\n";
  json rows = json::array();
  for (const GapRow& row : table.rows) {
    const double energy = c.v * c.v * row.energy;
    tsv << row.lambda << '\t' << row.gaps.l1[0] << '\t' << row.gaps.l1[1] << '\t'
        << row.gaps.l2[0] << '\t' << row.gaps.l2[1] << '\t' << energy << '\t' << row.max_eu[0]
        << '\t' << row.max_eu[1] << '\n';
    rows.push_back({{"lambda", row.lambda},
                    {"l1_gaps", row.gaps.l1},
                    {"l2_gaps", row.gaps.l2},
                    {"energy", energy},
                    {"max_eu", row.max_eu}});
  }
  write_text(dir / "sweep.tsv", tsv.str());
  write_json(dir / "gaps.json",
             {{"rows", rows}, {"monotone_l1", table.monotone_l1}, {"monotone_l2", table.monotone_l2}});
  out << tsv.str();
  out << "monotone L1 gaps: " << (table.monotone_l1 ? "yes" : "no")
      << "  monotone L2 gaps: " << (table.monotone_l2 ? "yes" : "no") << "\n";
  return all_pass ? kPass : kFailure;
}

int cmd_threshold(const RunConfig& c, std::ostream& out) {
  const CouplingMatrix k = c.coupling_matrix();
  const VortexNumbers n = c.vortex_numbers();
  const double area = c.lattice().area();
  out << std::setprecision(12);
  out << "coupling (a, b, c, d) = (" << k.a() << ", " << k.b() << ", " << k.c() << ", " << k.d()
      << ")\n";
  out << "N = (" << n.n1 << ", " << n.n2 << ")  |Omega| = " << area << "  v = " << c.v << "\n";
  if (n.total() == 0) {
    out << "no threshold; vacuum exists\n";
  } else {
    const double ls = nonexistence_threshold(k, n, area);
    out << "lambda* = " << ls << "  kappa* = " << kappa_from_lambda(c.v, ls) << "\n";
    out << "admissible vacuum moments for lambda > " << admissibility_floor(k, n, area) << "\n";
  }
  const Pair mod = vacuum_moduli(k, c.v);
  out << "vacuum moduli |phi0|^2 = (" << mod[0] << ", " << mod[1] << ")\n";
  const Pair phi = predicted_flux(k, n);
  out << "predicted fluxes = (" << phi[0] << ", " << phi[1] << ")\n";
  out << "predicted energy = " << predicted_energy(k, n, c.v) << "\n";
  if (c.lambda || c.kappa) {
    const PhysicalParams p = c.params();
    const Pair q = predicted_charge(k, n, p.kappa);
    out << "lambda = " << p.lambda << "  kappa = " << p.kappa << "\n";
    out << "predicted charges = (" << q[0] << ", " << q[1] << ")\n";
    if (n.total() > 0) {
      out << (p.lambda < nonexistence_threshold(k, n, area) ? "below threshold: no solution\n"
                                                            : "at or above threshold\n");
    }
  }
  return kPass;
}

int cmd_verify(const RunConfig& c, const fs::path& v1_path, const fs::path& v2_path,
               std::ostream& out) {
  require_parameter(c);
  const PhysicalParams params = c.params();
  const auto bg = make_background(c, out);
  const Model m{c.coupling_matrix(), params.lambda, bg};
  const ScalarField v1 = read_field(v1_path, bg->grid_ptr());
  const ScalarField v2 = read_field(v2_path, bg->grid_ptr());
  SolutionState s = SolutionState::from_fields(v1, v2, params.lambda);
  const FieldPair f = system_residual(m, v1, v2);
  s.residual_norm = l2_norm(f);
  s.grad_norm = m.k.variational() ? l2_norm(gradient_i(m, v1, v2)) : s.residual_norm;
  s.converged = s.grad_norm <= c.solver.grad_tol * m.lambda;
  s.branch_tag = BranchTag::NewtonOnly;
  const fs::path summary = v1_path.parent_path() / "summary.json";
  if (std::ifstream sf(summary); sf) {
    try {
      const json j = json::parse(sf);
      if (auto tag = parse_branch_tag(j.at("branch_tag").get<std::string>())) s.branch_tag = *tag;
    } catch (const json::exception&) {
    }
  } else {
    s.notes.push_back("no summary next to the field files; branch tag unknown");
  }
  const SolutionReport r = verify(m, s, params);
  make_dir(c.output);
  write_json(fs::path(c.output) / "verify.json", r);
  print_report(r, out);
  return r.pass ? kPass : kFailure;
}

int run(int argc, char** argv) {
  CLI::App app{"Rank-2 Chern-Simons vortices on a torus"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--out", out, "output directory (overrides the config)");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--workers", workers, "concurrent sweep workers")->check(CLI::PositiveNumber);
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve at one lambda and verify");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "continuation over the sweep list");
  CLI::App* thr_cmd = app.add_subcommand("threshold", "print thresholds and predictions");
  CLI::App* ver_cmd = app.add_subcommand("verify", "re-verify dumped fields");
  std::string v1, v2;
  ver_cmd->add_option("--v1", v1, "first field dump (default <out>/v1.csvx)");
  ver_cmd->add_option("--v2", v2, "second field dump (default <out>/v2.csvx)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kParseError;
  }

  try {
    const RunConfig c = apply(load_config(config), Overrides{out, seed, workers});
    if (*solve_cmd) return cmd_solve(c, std::cout);
    if (*sweep_cmd) return cmd_sweep(c, workers, std::cout);
    if (*thr_cmd) return cmd_threshold(c, std::cout);
    if (*ver_cmd) {
      const fs::path dir = c.output;
      return cmd_verify(c, v1.empty() ? dir / "v1.csvx" : fs::path(v1),
                        v2.empty() ? dir / "v2.csvx" : fs::path(v2), std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::Parse) return kParseError;
    if (e.code() == ErrorCode::Io) return kIoError;
    return kFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace csvx::cli
