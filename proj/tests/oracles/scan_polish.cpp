#include "oracles/scan_polish.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

constexpr double pi = std::numbers::pi;

struct Terms {
  // Coefficients of p1, p2, p1^2, p1 p2, p2^2 in RHS_i.
  double c[2][5];
};

Terms coefficients(const csvx::CouplingMatrix& k) {
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d();
  const double det = a * d - b * c, det2 = det * det;
  Terms t{};
  t.c[0][0] = -a * (b + d) / det;
  t.c[0][1] = b * (a + c) / det;
  t.c[0][2] = a * a * (b + d) * (b + d) / det2;
  t.c[0][3] = -b * (b + d) * (a * a - c * c) / det2;
  t.c[0][4] = -b * d * (a + c) * (a + c) / det2;
  t.c[1][0] = c * (b + d) / det;
  t.c[1][1] = -d * (a + c) / det;
  t.c[1][2] = -a * c * (b + d) * (b + d) / det2;
  t.c[1][3] = -c * (a + c) * (d * d - b * b) / det2;
  t.c[1][4] = d * d * (a + c) * (a + c) / det2;
  return t;
}

struct Eval {
  double f[2];
  double scale[2];
  double jac[2][2];  // d f_i / d(ln X, ln Y)
};

Eval evaluate(const Terms& t, double lambda, csvx::VortexNumbers n, const csvx::MomentSet& m,
              double lx, double ly) {
  const double x = std::exp(lx), y = std::exp(ly);
  const double basis[5] = {x * m.i1, y * m.i2, x * x * m.j1, x * y * m.x, y * y * m.j2};
  const double dx[5] = {x * m.i1, 0.0, 2 * x * x * m.j1, x * y * m.x, 0.0};
  const double dy[5] = {0.0, y * m.i2, 0.0, x * y * m.x, 2 * y * y * m.j2};
  const int nn[2] = {n.n1, n.n2};
  Eval e{};
  for (int i = 0; i < 2; ++i) {
    double s = 0, sc = 4 * pi * nn[i], jx = 0, jy = 0;
    for (int q = 0; q < 5; ++q) {
      s += t.c[i][q] * basis[q];
      sc += std::abs(lambda * t.c[i][q] * basis[q]);
      jx += t.c[i][q] * dx[q];
      jy += t.c[i][q] * dy[q];
    }
    e.f[i] = lambda * s + 4 * pi * nn[i];
    e.scale[i] = sc;
    e.jac[i][0] = lambda * jx;
    e.jac[i][1] = lambda * jy;
  }
  return e;
}

double merit(const Eval& e) {
  return std::max(std::abs(e.f[0]) / e.scale[0], std::abs(e.f[1]) / e.scale[1]);
}

}  // namespace

csvx::Pair integrated_residuals(const csvx::CouplingMatrix& k, double lambda, csvx::VortexNumbers n,
                                const csvx::MomentSet& m, double c1, double c2) {
  const Eval e = evaluate(coefficients(k), lambda, n, m, c1, c2);
  return {e.f[0], e.f[1]};
}

std::vector<Root> constraint_roots(const csvx::CouplingMatrix& k, double lambda,
                                   csvx::VortexNumbers n, const csvx::MomentSet& m) {
  const Terms t = coefficients(k);
  const double cx = std::log(m.i1 / m.j1), cy = std::log(m.i2 / m.j2);
  constexpr int steps = 240;
  constexpr double lo = -16.0, hi = 6.0;
  const double h = (hi - lo) / steps;
  std::vector<double> grid((steps + 1) * (steps + 1));
  const auto at = [&](int i, int j) -> double& { return grid[i * (steps + 1) + j]; };
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      at(i, j) = merit(evaluate(t, lambda, n, m, cx + lo + i * h, cy + lo + j * h));
    }
  }

  std::vector<Root> roots;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      bool is_min = at(i, j) < 0.5;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && a <= steps && b >= 0 && b <= steps && at(a, b) < at(i, j)) {
            is_min = false;
            break;
          }
        }
      }
      if (!is_min) continue;

      double lx = cx + lo + i * h, ly = cy + lo + j * h;
      Eval e = evaluate(t, lambda, n, m, lx, ly);
      for (int it = 0; it < 100 && merit(e) > 1e-15; ++it) {
        const double det = e.jac[0][0] * e.jac[1][1] - e.jac[0][1] * e.jac[1][0];
        if (det == 0.0) break;
        double sx = -(e.jac[1][1] * e.f[0] - e.jac[0][1] * e.f[1]) / det;
        double sy = -(-e.jac[1][0] * e.f[0] + e.jac[0][0] * e.f[1]) / det;
        // Damped: halve until the merit drops.
        double step = 1.0;
        Eval trial{};
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
          trial = evaluate(t, lambda, n, m, lx + step * sx, ly + step * sy);
          if (merit(trial) < merit(e)) break;
        }
        if (!(merit(trial) < merit(e))) break;
        lx += step * sx;
        ly += step * sy;
        e = trial;
      }
      if (merit(e) > 1e-12) continue;
      const bool seen = std::any_of(roots.begin(), roots.end(), [&](const Root& r) {
        return std::abs(r.c1 - lx) < 1e-7 && std::abs(r.c2 - ly) < 1e-7;
      });
      if (!seen) roots.push_back({lx, ly, merit(e)});
    }
  }
  // Decreasing X, then decreasing Y: the decoupled case has pairs of roots
  // sharing X.
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    if (std::abs(a.c1 - b.c1) > 1e-6) return a.c1 > b.c1;
    return a.c2 > b.c2;
  });
  return roots;
}

}  // namespace oracle
