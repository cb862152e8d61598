#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "csvx/diagnostics.hpp"
#include "support/samples.hpp"

using namespace csvx;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

GridPtr square(int n) { return TorusGrid::create(TorusLattice::unit_square(), n, n); }

std::shared_ptr<const Background> pair_bg(const GridPtr& g, int n1 = 1, int n2 = 1) {
  std::vector<Vortex> z1, z2;
  if (n1) z1.push_back({0.25, 0.5, n1});
  if (n2) z2.push_back({0.75, 0.5, n2});
  return std::make_shared<Background>(build_background(g, VortexSet(z1), VortexSet(z2)));
}

struct Solved {
  Model m;
  SolutionState s;
};

Solved solved_a2(int n = 64, double lambda = 200) {
  const Model m{from_preset(GaugePreset::A2), lambda, pair_bg(square(n))};
  return {m, solve(m)};
}

}  // namespace

TEST_CASE("fluxes, charges and energy of an A2 pair") {
  const Solved x = solved_a2();
  REQUIRE(x.s.converged);
  const Pair phi = flux(x.m, x.s);
  const Pair phic = flux_from_constraints(x.m, x.s);
  for (int c = 0; c < 2; ++c) {
    CHECK(phi[c] == Approx(2 * pi).epsilon(1e-2));
    CHECK(phic[c] == Approx(phi[c]).epsilon(1e-8));
  }
  const PhysicalParams pp = PhysicalParams::from_lambda(200, 1.0);
  const EnergyCharge ec = energy_and_charge(phi, pp);
  CHECK(ec.energy == Approx(4 * pi).epsilon(1e-2));
  CHECK(ec.charge[0] == Approx(pp.kappa * phi[0]));

  const SolutionReport r = verify(x.m, x.s, pp);
  CHECK(r.pass);
  CHECK(r.failures.empty());
  CHECK(r.max_principle.status == MaxPrincipleStatus::Strict);
  CHECK(r.lambda_star.has_value());
  CHECK(*r.lambda_star == Approx(8 * pi));
  CHECK(r.admissibility_margins[0] > 0);
  CHECK(r.branch_tag == "minimizer");
}

TEST_CASE("the flux formula reproduces Gauss's law on a synthetic field") {
  // Flux from RHS integrals equals 2 pi K^-1 N when the integrated equations hold,
  // which the constraint route enforces by construction.
  const GridPtr g = square(32);
  Model m{from_preset(GaugePreset::G2), 1.0, pair_bg(g, 2, 1)};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0, 0.2);
  ScalarField w1(g), w2(g);
  for (std::size_t k = 0; k < w1.size(); ++k) {
    w1[k] = nd(rng);
    w2[k] = nd(rng);
  }
  w1 = project_mean_zero(w1);
  w2 = project_mean_zero(w2);
  const MomentSet mo = integrals(*m.bg, w1, w2);
  m.lambda = 2 * samples::admissible_lambda(m.k, m.n(), mo);
  const CPair c = solve_c_plus(m.k, m.lambda, m.n(), mo);
  SolutionState s(w1, w2);
  s.c1 = c.c1;
  s.c2 = c.c2;
  s.lambda = m.lambda;
  const Pair phi = flux_from_constraints(m, s);
  const Pair pred = predicted_flux(m.k, m.n());
  CHECK(phi[0] == Approx(pred[0]).epsilon(1e-10));
  CHECK(phi[1] == Approx(pred[1]).epsilon(1e-10));
  const Pair q = flux(m, s);
  CHECK(q[0] == Approx(pred[0]).epsilon(1e-10));
}

TEST_CASE("vacuum components are exempt from the margin") {
  const GridPtr g = square(32);
  const Model m{from_preset(GaugePreset::A1xA1), 100, pair_bg(g, 1, 0)};
  const SolutionState s = solve(m);
  REQUIRE(s.converged);
  const MaxPrincipleReport rep = max_principle_check(m, s);
  CHECK(rep.vacuum[1]);
  CHECK_FALSE(rep.vacuum[0]);
  CHECK(rep.max_eu[1] == Approx(1.0));
  CHECK(rep.status == MaxPrincipleStatus::Strict);
  const SolutionReport r = verify(m, s, PhysicalParams::from_lambda(100, 1.0));
  CHECK(r.pass);
}

TEST_CASE("overshoot classification") {
  const GridPtr g = square(32);
  const Model mv{from_preset(GaugePreset::A2), 100, pair_bg(g, 1, 0)};
  const auto state_with_max = [&](double level) {
    // e^u = 1/2 everywhere except one node, where it reaches `level`.
    ScalarField v1(g), v2(g, std::vector<double>(g->size(), std::log(0.5)));
    for (std::size_t k = 0; k < v1.size(); ++k) {
      const double e = mv.bg->e1[k];
      v1[k] = e > 0 ? std::log(0.5 / e) : 0.0;
    }
    const std::size_t k = 10 * 32 + 3;
    v1[k] = std::log(level / mv.bg->e1[k]);
    return SolutionState::from_fields(v1, v2, 100);
  };
  CHECK(max_principle_check(mv, state_with_max(1.01)).status == MaxPrincipleStatus::Violation);
  CHECK(max_principle_check(mv, state_with_max(1.0 + 1e-6)).status == MaxPrincipleStatus::Marginal);
  CHECK(to_string(MaxPrincipleStatus::Violation) == "violation");

  const SolutionReport r = verify(mv, state_with_max(1.01), PhysicalParams::from_lambda(100, 1.0));
  CHECK_FALSE(r.pass);
}

TEST_CASE("a random field fails verification on the residual") {
  const Solved x = solved_a2(32);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd(0, 0.1);
  ScalarField w1 = x.s.w1;
  for (double& v : w1.values()) v += nd(rng);
  SolutionState bad(project_mean_zero(w1), x.s.w2);
  bad.c1 = x.s.c1;
  bad.c2 = x.s.c2;
  bad.lambda = x.s.lambda;
  const SolutionReport r = verify(x.m, bad, PhysicalParams::from_lambda(200, 1.0));
  CHECK_FALSE(r.pass);
  REQUIRE_FALSE(r.failures.empty());
  CHECK(r.failures.front().find("residual") != std::string::npos);
}

TEST_CASE("report JSON round trip") {
  const Solved x = solved_a2(32);
  SolutionReport r = verify(x.m, x.s, PhysicalParams::from_lambda(200, 1.0));
  r.notes.push_back("note");
  const nlohmann::json j = r;
  const SolutionReport back = j.get<SolutionReport>();
  CHECK(back == r);
  CHECK(j.at("pass").get<bool>() == r.pass);

  SolutionReport nan_report;
  nan_report.energy = std::nan("");
  const nlohmann::json jn = nan_report;
  CHECK(jn.at("energy").is_null());
  CHECK(std::isnan(jn.get<SolutionReport>().energy));
}

TEST_CASE("swapping the components swaps the observables") {
  const GridPtr g = square(32);
  const CouplingMatrix b2 = from_preset(GaugePreset::B2);
  const Model m{b2, 300, pair_bg(g, 2, 1)};
  const auto bgs = std::make_shared<Background>(
      build_background(g, VortexSet({{0.75, 0.5, 1}}), VortexSet({{0.25, 0.5, 2}})));
  const Model ms{b2.swapped(), 300, bgs};
  const SolutionState s = solve(m), t = solve(ms);
  REQUIRE(s.converged);
  REQUIRE(t.converged);
  const Pair fs = flux(m, s), ft = flux(ms, t);
  CHECK(fs[0] == Approx(ft[1]).epsilon(1e-6));
  CHECK(fs[1] == Approx(ft[0]).epsilon(1e-6));
  const MaxPrincipleReport ps = max_principle_check(m, s), pt = max_principle_check(ms, t);
  CHECK(ps.max_eu[0] == Approx(pt.max_eu[1]).epsilon(1e-6));
}

TEST_CASE("gaps shrink as lambda grows") {
  // 64^2: at lambda = 512 pi the cores are narrower than a 32^2 spacing.
  const GridPtr g = square(64);
  const auto bg = pair_bg(g);
  const CouplingMatrix a2 = from_preset(GaugePreset::A2);
  const auto entries = continuation(a2, {32 * pi, 128 * pi, 512 * pi}, bg);
  std::vector<SolutionState> states;
  for (const auto& e : entries) {
    CAPTURE(e.lambda);
    CAPTURE(e.error);
    REQUIRE(e.state);
    states.push_back(*e.state);
  }
  std::swap(states[0], states[2]);
  const GapTable t = asymptotic_gaps(a2, bg, states);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].lambda < t.rows[2].lambda);
  CHECK(t.monotone_l1);
  CHECK(t.monotone_l2);
  for (const GapRow& row : t.rows) CHECK(row.energy == Approx(4 * pi).epsilon(1e-2));
}
