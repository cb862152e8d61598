#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "csvx/error.hpp"
#include "csvx/torus.hpp"

using namespace csvx;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

GridPtr square(int n) { return TorusGrid::create(TorusLattice::unit_square(), n, n); }

GridPtr skewed(int n) { return TorusGrid::create(TorusLattice({1.0, 0.0}, {0.3, 1.2}), n, n); }

ScalarField sample(const GridPtr& g, auto f) {
  ScalarField out(g);
  for (int i = 0; i < g->n1(); ++i) {
    for (int j = 0; j < g->n2(); ++j) out[static_cast<std::size_t>(i) * g->n2() + j] = f(g->s1(i), g->s2(j));
  }
  return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

ScalarField random_mean_zero(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ScalarField f(g);
  for (double& x : f.values()) x = n(rng);
  return project_mean_zero(f);
}

}  // namespace

TEST_CASE("lattice and grid validation") {
  CHECK_THROWS_AS(TorusLattice({1, 0}, {2, 0}), Error);
  CHECK_THROWS_AS(TorusGrid::create(TorusLattice::unit_square(), 15, 16), Error);
  CHECK_THROWS_AS(TorusGrid::create(TorusLattice::unit_square(), 8, 8), Error);
  const GridPtr g = skewed(32);
  CHECK(g->area() == Approx(1.2));
  CHECK(g->weight() == Approx(1.2 / 1024));
  const TorusLattice& l = g->lattice();
  CHECK(l.dual1().x * l.e1().x + l.dual1().y * l.e1().y == Approx(1.0));
  CHECK(l.dual1().x * l.e2().x + l.dual1().y * l.e2().y == Approx(0.0).epsilon(1e-15));
  CHECK(l.min_image_distance(0.9, 0.0) == Approx(0.1));
}

TEST_CASE("spectral Laplacian and Poisson solve") {
  const GridPtr g = square(32);
  ScalarField one(g);
  one += 1.0;
  CHECK(laplacian(one).max_abs() < 1e-12);

  const ScalarField c = sample(g, [](double s1, double) { return std::cos(2 * pi * s1); });
  ScalarField expect = c;
  expect *= -4 * pi * pi;
  CHECK(max_diff(laplacian(c), expect) < 1e-10);

  ScalarField u_expect = c;
  u_expect *= -1.0 / (4 * pi * pi);
  CHECK(max_diff(poisson_solve(c), u_expect) < 1e-14);
  CHECK(poisson_solve(ScalarField(g)).max_abs() == 0.0);

  for (const GridPtr& grid : {square(32), skewed(48)}) {
    const ScalarField f = random_mean_zero(grid, 3);
    const ScalarField u = poisson_solve(f);
    CHECK(std::abs(u.mean()) < 1e-14);
    CHECK(max_diff(laplacian(u), f) <= 1e-10 * f.max_abs());
  }

  ScalarField shifted = c;
  shifted += 1.0;
  CHECK_THROWS_AS(poisson_solve(shifted), Error);
}

TEST_CASE("plane waves on a skewed lattice use the dual-basis symbol") {
  const GridPtr g = skewed(32);
  const TorusLattice& l = g->lattice();
  // exp(2 pi i (2 s1 - s2)) has wave vector 2 pi (2 b1 - b2).
  const double kx = 2 * pi * (2 * l.dual1().x - l.dual2().x);
  const double ky = 2 * pi * (2 * l.dual1().y - l.dual2().y);
  const ScalarField f = sample(g, [](double s1, double s2) { return std::sin(2 * pi * (2 * s1 - s2)); });
  ScalarField expect = f;
  expect *= -(kx * kx + ky * ky);
  CHECK(max_diff(laplacian(f), expect) < 1e-9);
}

TEST_CASE("Poisson residual decays spectrally for an analytic field") {
  // f = exp(sin 2 pi s1 + cos 2 pi s2) - mean; compare u on n and 2n.
  double prev = 1.0;
  for (int n : {16, 32, 64}) {
    const GridPtr g = square(n);
    const GridPtr h = square(2 * n);
    const auto f = [](double s1, double s2) { return std::exp(std::sin(2 * pi * s1) + std::cos(2 * pi * s2)); };
    const ScalarField u = poisson_solve(project_mean_zero(sample(g, f)));
    const ScalarField v = poisson_solve(project_mean_zero(sample(h, f)));
    double err = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) err = std::max(err, std::abs(u.at(i, j) - v.at(2 * i, 2 * j)));
    }
    CAPTURE(n);
    CHECK((err < prev || err < 1e-15));
    prev = err;
  }
  CHECK(prev < 1e-13);
}

TEST_CASE("Green's function: closed form against the cutoff-Poisson route") {
  for (const GridPtr& g : {square(128), skewed(128)}) {
    const double p1 = 0.3, p2 = 0.55;
    const ScalarField G = green_function(g, p1, p2);
    const ScalarField R = green_regular_part(g, p1, p2);
    const Cutoff chi = Cutoff::for_lattice(g->lattice());
    double err = 0;
    for (int i = 0; i < g->n1(); ++i) {
      for (int j = 0; j < g->n2(); ++j) {
        const double r = g->lattice().min_image_distance(g->s1(i) - p1, g->s2(j) - p2);
        const double route = std::log(r) * chi.value(r) / (2 * pi) + R.at(i, j);
        err = std::max(err, std::abs(route - G.at(i, j)));
      }
    }
    CHECK(err < 5e-5);
  }
}

TEST_CASE("Green's function symmetry, periodicity and Laplacian") {
  const GridPtr g = skewed(64);
  const ScalarField G = green_function(g, 0.0, 0.0);
  CHECK(std::isinf(G.at(0, 0)));
  double sym = 0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      if (i == 0 && j == 0) continue;
      sym = std::max(sym, std::abs(G.at(i, j) - G.at((64 - i) % 64, (64 - j) % 64)));
    }
  }
  CHECK(sym < 1e-13);

  const ScalarField a = green_function(g, 0.3, 0.7);
  const ScalarField b = green_function(g, 1.3, -0.3);
  CHECK(max_diff(a, b) < 1e-12);
  const ScalarField ra = green_regular_part(g, 0.3, 0.7);
  const ScalarField rb = green_regular_part(g, 1.3, -0.3);
  CHECK(max_diff(ra, rb) < 1e-12);

  // Away from the cutoff support G is smooth and Laplacian G = -1/|Omega|.
  const GridPtr s = square(128);
  const double p1 = 0.5, p2 = 0.5;
  const ScalarField R = green_regular_part(s, p1, p2);
  const Cutoff chi = Cutoff::for_lattice(s->lattice());
  ScalarField full(s);
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < 128; ++j) {
      const double r = s->lattice().min_image_distance(s->s1(i) - p1, s->s2(j) - p2);
      full[static_cast<std::size_t>(i) * 128 + j] =
          R.at(i, j) + (r > 0 ? std::log(r) * chi.value(r) / (2 * pi) : 0.0);
    }
  }
  ScalarField lap(s);
  // Laplacian of R alone equals that of G outside the cutoff support. The
  // cutoff transition spans only a few nodes here, which bounds how well R's
  // nodal samples resolve it; the spectral Laplacian amplifies that error.
  s->laplacian(R.values(), lap.values());
  double worst = 0;
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < 128; ++j) {
      const double r = s->lattice().min_image_distance(s->s1(i) - p1, s->s2(j) - p2);
      if (r > chi.outer() * 1.05) worst = std::max(worst, std::abs(lap.at(i, j) + 1.0));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("cutoff derivatives match finite differences") {
  const Cutoff chi(0.05, 0.25);
  CHECK(chi.value(0.01) == 1.0);
  CHECK(chi.value(0.3) == 0.0);
  for (double r : {0.07, 0.12, 0.2, 0.24}) {
    const double h = 1e-5;
    CHECK(chi.derivative(r) == Approx((chi.value(r + h) - chi.value(r - h)) / (2 * h)).epsilon(1e-6));
    CHECK(chi.second_derivative(r) ==
          Approx((chi.derivative(r + h) - chi.derivative(r - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("backgrounds") {
  const GridPtr g = square(128);
  const Background vac = build_background(g, {}, {});
  CHECK(vac.e1.min() == 1.0);
  CHECK(vac.e2.max() == 1.0);
  CHECK(vac.n1 == 0);

  // A vortex at a node: exact zero, quadratic vanishing nearby.
  const Background bg = build_background(g, VortexSet({{0.5, 0.5, 1}}), VortexSet({{0.25, 0.25, 2}}));
  CHECK(bg.e1.min() >= 0.0);
  CHECK(bg.e1.at(64, 64) == 0.0);
  CHECK(bg.e1.at(65, 64) < 1e-3);
  CHECK(bg.e1.at(66, 64) / bg.e1.at(65, 64) == Approx(4.0).epsilon(0.01));
  CHECK(bg.e2.at(34, 32) / bg.e2.at(33, 32) == Approx(16.0).epsilon(0.02));
  CHECK(bg.n1 == 1);
  CHECK(bg.n2 == 2);

  // Off-node vortex: strictly positive everywhere.
  const Background off = build_background(g, VortexSet({{0.501, 0.5031, 1}}), {});
  CHECK(off.e1.min() > 0.0);

  // Laplacian of log E away from the core is -4 pi N / |Omega|, checked with a
  // fourth-order difference stencil on a fine grid (truncation ~3e-7 at r > 1/4).
  const int nf = 512;
  const GridPtr fine = square(nf);
  const Background fb = build_background(fine, VortexSet({{0.501, 0.5031, 1}}), {});
  const auto le = [&](int i, int j) { return std::log(fb.e1.at((i + nf) % nf, (j + nf) % nf)); };
  const double h2 = 1.0 / (nf * nf);
  double sum = 0, worst = 0;
  int count = 0;
  for (int i = 0; i < nf; i += 4) {
    for (int j = 0; j < nf; j += 4) {
      const double r = fine->lattice().min_image_distance(fine->s1(i) - 0.501, fine->s2(j) - 0.5031);
      if (r <= 0.25) continue;
      double lap = 0;
      for (int axis = 0; axis < 2; ++axis) {
        const auto at = [&](int o) { return axis == 0 ? le(i + o, j) : le(i, j + o); };
        lap += (-at(-2) + 16 * at(-1) - 30 * at(0) + 16 * at(1) - at(2)) / (12 * h2);
      }
      sum += lap;
      worst = std::max(worst, std::abs(lap + 4 * pi));
      ++count;
    }
  }
  CHECK(sum / count == Approx(-4 * pi).epsilon(0.01));
  CHECK(worst < 1e-6);

  const Background close = build_background(g, VortexSet({{0.5, 0.5, 1}, {0.505, 0.5, 1}}), {});
  CHECK_FALSE(close.warnings.empty());
}

TEST_CASE("moments") {
  const GridPtr g = square(32);
  const Background vac = build_background(g, {}, {});
  const ScalarField zero(g, true);
  const MomentSet m = integrals(vac, zero, zero);
  CHECK(m.i1 == Approx(1.0));
  CHECK(m.i2 == Approx(1.0));
  CHECK(m.j1 == Approx(1.0));
  CHECK(m.j2 == Approx(1.0));
  CHECK(m.x == Approx(1.0));

  const Background bg = build_background(g, VortexSet({{0.2, 0.3, 1}}), VortexSet({{0.7, 0.6, 2}}));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalarField w1 = random_mean_zero(g, seed), w2 = random_mean_zero(g, seed + 100);
    const MomentSet s = integrals(bg, w1, w2);
    CHECK(s.x * s.x <= s.j1 * s.j2);
    CHECK(s.i1 * s.i1 <= g->area() * s.j1);
    CHECK(s.i2 * s.i2 <= g->area() * s.j2);
  }

  // Relabeling and joint lattice translation leave the moments unchanged.
  const Background a = build_background(g, VortexSet({{0.2, 0.3, 1}, {0.6, 0.1, 1}}), {});
  const Background b = build_background(g, VortexSet({{1.6, 0.1, 1}, {0.2, -0.7, 1}}), {});
  const MomentSet ma = integrals(a, zero, zero), mb = integrals(b, zero, zero);
  CHECK(ma.i1 == Approx(mb.i1).epsilon(1e-12));
  CHECK(ma.j1 == Approx(mb.j1).epsilon(1e-12));

  ScalarField big(g);
  big[0] = 800.0;
  CHECK_THROWS_AS(integrals(vac, big, zero), Error);
}
