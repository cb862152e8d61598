#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "csvx/error.hpp"
#include "csvx/functional.hpp"
#include "support/samples.hpp"

using namespace csvx;
using doctest::Approx;

namespace {

GridPtr grid32() { return TorusGrid::create(TorusLattice::unit_square(), 32, 32); }

double inner(const FieldPair& g, const ScalarField& p1, const ScalarField& p2) {
  const TorusGrid& grid = p1.grid();
  return grid.inner(g.f1.values(), p1.values()) + grid.inner(g.f2.values(), p2.values());
}

}  // namespace

TEST_CASE("energy gradient matches directional differences") {
  std::mt19937_64 rng(21);
  const GridPtr g = grid32();
  for (int trial = 0; trial < 6; ++trial) {
    samples::Sample s = samples::field_sample(g, rng, true);
    const CPair c = solve_c_plus(s.model.k, s.model.lambda, s.model.n(), s.moments);
    const ScalarField v1 = shifted(s.w1, c.c1), v2 = shifted(s.w2, c.c2);
    // Include constant directions so the mean part of G is exercised too.
    ScalarField p1 = samples::smooth_field(g, rng, 1.0), p2 = samples::smooth_field(g, rng, 1.0);
    p1 += 0.3;
    p2 -= ScalarField(g, std::vector<double>(g->size(), 0.2));
    const double h = 1e-5;
    const double fd = (i_lambda(s.model, v1 + h * p1, v2 + h * p2).total -
                       i_lambda(s.model, v1 - h * p1, v2 - h * p2).total) /
                      (2 * h);
    const double an = inner(gradient_i(s.model, v1, v2), p1, p2);
    CHECK(an == Approx(fd).epsilon(1e-6).scale(1e-3 * s.model.lambda));
  }
}

TEST_CASE("reduced energy equals the energy at the ++ averages") {
  std::mt19937_64 rng(22);
  const GridPtr g = grid32();
  for (int trial = 0; trial < 8; ++trial) {
    const samples::Sample s = samples::field_sample(g, rng, true);
    const JPlusValue jp = j_plus(s.model, s.w1, s.w2);
    const FunctionalValue full = i_lambda(s.model, shifted(s.w1, jp.c.c1), shifted(s.w2, jp.c.c2));
    CHECK(jp.value.total == Approx(full.total).epsilon(1e-10));
    const Pair dc = c_derivatives(s.model, jp.moments, jp.c.c1, jp.c.c2);
    CHECK(std::abs(dc[0]) < 1e-8 * s.model.lambda * g->area());
    CHECK(std::abs(dc[1]) < 1e-8 * s.model.lambda * g->area());
  }
}

TEST_CASE("c-derivatives are the integrals of the gradient") {
  std::mt19937_64 rng(23);
  const GridPtr g = grid32();
  const samples::Sample s = samples::field_sample(g, rng, true);
  const double c1 = 0.1, c2 = -0.2;
  const FieldPair gr = gradient_i(s.model, shifted(s.w1, c1), shifted(s.w2, c2));
  const Pair dc = c_derivatives(s.model, s.moments, c1, c2);
  CHECK(dc[0] == Approx(gr.f1.integral()).epsilon(1e-10).scale(s.model.lambda));
  CHECK(dc[1] == Approx(gr.f2.integral()).epsilon(1e-10).scale(s.model.lambda));
}

TEST_CASE("reduced and projected gradients agree") {
  std::mt19937_64 rng(24);
  const GridPtr g = grid32();
  for (int trial = 0; trial < 6; ++trial) {
    const samples::Sample s = samples::field_sample(g, rng, true);
    const JPlusValue jp = j_plus(s.model, s.w1, s.w2);
    const FieldPair pg = projected_gradient(s.model, s.w1, s.w2, jp.c);
    const FieldPair rg = reduced_gradient(s.model, s.w1, s.w2, jp.c);
    const FieldPair diff{pg.f1 - rg.f1, pg.f2 - rg.f2};
    CHECK(l2_norm(diff) <= 1e-8 * std::max(1.0, l2_norm(pg)));

    // and both give the directional derivative of J+ along mean-zero directions
    const ScalarField p1 = samples::smooth_field(g, rng, 1.0), p2 = samples::smooth_field(g, rng, 1.0);
    const double h = 1e-5;
    const double fd = (j_plus(s.model, s.w1 + h * p1, s.w2 + h * p2).value.total -
                       j_plus(s.model, s.w1 - h * p1, s.w2 - h * p2).value.total) /
                      (2 * h);
    CHECK(inner(rg, p1, p2) == Approx(fd).epsilon(1e-6).scale(1e-3 * s.model.lambda));
  }
}

TEST_CASE("c-Hessian is positive definite at the ++ root and matches differences") {
  std::mt19937_64 rng(25);
  const GridPtr g = grid32();
  for (int trial = 0; trial < 8; ++trial) {
    const samples::Sample s = samples::field_sample(g, rng, true);
    const CPair c = solve_c_plus(s.model.k, s.model.lambda, s.model.n(), s.moments);
    const Mat2 h = hessian_c(s.model, s.moments, c);
    CHECK(h[0][0] > 0);
    CHECK(h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0);

    const double e = 1e-6;
    const Pair p1 = c_derivatives(s.model, s.moments, c.c1 + e, c.c2);
    const Pair m1 = c_derivatives(s.model, s.moments, c.c1 - e, c.c2);
    const Pair p2 = c_derivatives(s.model, s.moments, c.c1, c.c2 + e);
    const Pair m2 = c_derivatives(s.model, s.moments, c.c1, c.c2 - e);
    const double sc = std::abs(h[0][0]) + std::abs(h[1][1]);
    CHECK(h[0][0] == Approx((p1[0] - m1[0]) / (2 * e)).epsilon(1e-6).scale(sc));
    CHECK(h[0][1] == Approx((p2[0] - m2[0]) / (2 * e)).epsilon(1e-6).scale(sc));
    CHECK(h[1][0] == Approx((p1[1] - m1[1]) / (2 * e)).epsilon(1e-6).scale(sc));
    CHECK(h[1][1] == Approx((p2[1] - m2[1]) / (2 * e)).epsilon(1e-6).scale(sc));
  }
}

TEST_CASE("decoupled energy is a potential for the decoupled residual") {
  std::mt19937_64 rng(26);
  const GridPtr g = grid32();
  auto bg = samples::random_background(g, {1, 2}, rng);
  const Model m{from_preset(GaugePreset::A1xA1), 150.0, bg};
  const ScalarField v1 = samples::smooth_field(g, rng, 1.0), v2 = samples::smooth_field(g, rng, 1.0);
  ScalarField p1 = samples::smooth_field(g, rng, 1.0), p2 = samples::smooth_field(g, rng, 1.0);
  p1 += 0.5;
  const double h = 1e-5;
  const double fd =
      (decoupled_energy(m, v1 + h * p1, v2 + h * p2) - decoupled_energy(m, v1 - h * p1, v2 - h * p2)) /
      (2 * h);
  const FieldPair f = system_residual(m, v1, v2);
  CHECK(-inner(f, p1, p2) == Approx(fd).epsilon(1e-6).scale(1e-3 * m.lambda));
}

TEST_CASE("vacuum is a critical point for N = 0") {
  const GridPtr g = grid32();
  auto bg = std::make_shared<Background>(build_background(g, VortexSet(), VortexSet()));
  for (GaugePreset p : {GaugePreset::A2, GaugePreset::B2, GaugePreset::G2}) {
    const Model m{from_preset(p), 80.0, bg};
    const ScalarField zero(g);
    const FieldPair gr = gradient_i(m, zero, zero);
    CHECK(l2_norm(gr) < 1e-12);
    const FieldPair f = system_residual(m, zero, zero);
    CHECK(l2_norm(f) < 1e-12);
    CHECK(i_lambda(m, zero, zero).total == Approx(0.0).scale(1.0));
  }
}

TEST_CASE("energy rejects non-variational couplings and overflow") {
  const GridPtr g = grid32();
  auto bg = std::make_shared<Background>(build_background(g, VortexSet(), VortexSet()));
  const Model dec{from_preset(GaugePreset::A1xA1), 80.0, bg};
  const ScalarField zero(g);
  CHECK_THROWS_AS(i_lambda(dec, zero, zero), Error);
  ScalarField big(g);
  big[0] = 1e4;
  CHECK_THROWS_AS(densities(*bg, big, zero), Error);
}
