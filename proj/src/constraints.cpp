#include "csvx/constraints.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csvx/error.hpp"

namespace csvx {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-component data of one quadratic J x^2 - R(arg) x + beta = 0 with
// R(arg) = r0 + slope * arg.
struct Quadratic {
  double j, r0, slope, beta;

  double r(double arg) const { return r0 + slope * arg; }

  double discriminant(double arg) const {
    const double rr = r(arg);
    const double s = 2.0 * std::sqrt(beta * j);
    return (rr - s) * (rr + s);
  }
};

Quadratic component(int which, const CouplingMatrix& k, double lambda, VortexNumbers n,
                    const MomentSet& m) {
  const Pair beta = constraint_betas(k, lambda, n);
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d(), det = k.det();
  if (which == 1) {
    return {m.j1, det * m.i1 / (a * (b + d)), b * (a + c) / (a * (b + d)) * m.x, beta[0]};
  }
  if (which == 2) {
    return {m.j2, det * m.i2 / (d * (a + c)), c * (b + d) / (d * (a + c)) * m.x, beta[1]};
  }
  throw Error(ErrorCode::InvalidArgument, "component index must be 1 or 2");
}

double root(const Quadratic& q, Sign sign, double arg) {
  const double rr = q.r(arg);
  double disc = q.discriminant(arg);
  if (disc < 0.0) {
    // Rounding noise right at the boundary of the admissible set.
    if (disc >= -1e-13 * rr * rr) {
      disc = 0.0;
    } else {
      throw Error(ErrorCode::NegativeDiscriminant, "complex root of the constraint quadratic");
    }
  }
  const double sq = std::sqrt(disc);
  // The minus root in the cancellation-free form 2 beta / (R + sqrt D).
  return sign == Sign::Plus ? (rr + sq) / (2.0 * q.j) : 2.0 * q.beta / (rr + sq);
}

Sign first_sign(Branch b) {
  return (b == Branch::PlusPlus || b == Branch::PlusMinus) ? Sign::Plus : Sign::Minus;
}
Sign second_sign(Branch b) {
  return (b == Branch::PlusPlus || b == Branch::MinusPlus) ? Sign::Plus : Sign::Minus;
}

double relative_residual(double j, double r, double beta, double x) {
  const double num = j * x * x - r * x + beta;
  const double scale = j * x * x + std::abs(r * x) + std::abs(beta);
  return scale > 0.0 ? std::abs(num) / scale : 0.0;
}

}  // namespace

Pair constraint_betas(const CouplingMatrix& k, double lambda, VortexNumbers n) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d(), det = k.det();
  return {4.0 * kPi * det * (d * n.n1 + b * n.n2) / (lambda * a * (b + d) * (b + d)),
          4.0 * kPi * det * (c * n.n1 + a * n.n2) / (lambda * d * (a + c) * (a + c))};
}

AdmissibilityReport admissibility(const CouplingMatrix& k, double lambda, VortexNumbers n,
                                  const MomentSet& m) {
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d(), det = k.det();
  AdmissibilityReport rep;
  rep.margin1 = m.i1 * m.i1 - 16.0 * kPi * a * (d * n.n1 + b * n.n2) / (lambda * det) * m.j1;
  rep.margin2 = m.i2 * m.i2 - 16.0 * kPi * d * (c * n.n1 + a * n.n2) / (lambda * det) * m.j2;
  const double tol1 = 1e-10 * m.i1 * m.i1;
  const double tol2 = 1e-10 * m.i2 * m.i2;
  rep.interior = rep.margin1 > tol1 && rep.margin2 > tol2;
  rep.member = rep.margin1 >= -tol1 && rep.margin2 >= -tol2;
  rep.on_boundary = rep.member && !rep.interior;
  return rep;
}

double r1(const CouplingMatrix& k, const MomentSet& m, double y) {
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d();
  return k.det() * m.i1 / (a * (b + d)) + b * (a + c) / (a * (b + d)) * y * m.x;
}

double r2(const CouplingMatrix& k, const MomentSet& m, double x) {
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d();
  return k.det() * m.i2 / (d * (a + c)) + c * (b + d) / (d * (a + c)) * x * m.x;
}

double g_branch(int which, Sign sign, const CouplingMatrix& k, double lambda, VortexNumbers n,
                const MomentSet& m, double arg) {
  return root(component(which, k, lambda, n, m), sign, arg);
}

double g_branch_slope(int which, Sign sign, const CouplingMatrix& k, double lambda,
                      VortexNumbers n, const MomentSet& m, double arg) {
  const Quadratic q = component(which, k, lambda, n, m);
  const double g = root(q, sign, arg);
  const double sq = std::sqrt(std::max(q.discriminant(arg), 0.0));
  const double s = g * q.slope / sq;
  return sign == Sign::Plus ? s : -s;
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::PlusPlus: return "++";
    case Branch::MinusMinus: return "--";
    case Branch::PlusMinus: return "+-";
    case Branch::MinusPlus: return "-+";
  }
  return "?";
}

double f_star(Branch branch, const CouplingMatrix& k, double lambda, VortexNumbers n,
              const MomentSet& m, double x) {
  const Quadratic q1 = component(1, k, lambda, n, m);
  const Quadratic q2 = component(2, k, lambda, n, m);
  return x - root(q1, first_sign(branch), root(q2, second_sign(branch), x));
}

Pair constraint_residuals(const CouplingMatrix& k, double lambda, VortexNumbers n,
                          const MomentSet& m, double c1, double c2) {
  const Pair beta = constraint_betas(k, lambda, n);
  const double x = std::exp(c1), y = std::exp(c2);
  return {relative_residual(m.j1, r1(k, m, y), beta[0], x),
          relative_residual(m.j2, r2(k, m, x), beta[1], y)};
}

CPair solve_c_branch(Branch branch, const CouplingMatrix& k, double lambda, VortexNumbers n,
                     const MomentSet& m) {
  if (!(m.i1 > 0.0 && m.i2 > 0.0 && m.j1 > 0.0 && m.j2 > 0.0 && m.x > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "moments must be positive");
  }
  if (!admissibility(k, lambda, n, m).member) {
    throw Error(ErrorCode::NotAdmissible, "discriminant margins are negative");
  }
  const Quadratic q1 = component(1, k, lambda, n, m);
  const Quadratic q2 = component(2, k, lambda, n, m);
  const Sign s1 = first_sign(branch), s2 = second_sign(branch);
  if ((s1 == Sign::Minus && q1.beta == 0.0) || (s2 == Sign::Minus && q2.beta == 0.0)) {
    throw Error(ErrorCode::DegenerateBranch, "minus root is identically zero when beta = 0");
  }

  // In t = ln X, h(t) = 1 - g1(g2(e^t)) e^{-t} is negative for small X and
  // positive for large X with a single crossing.
  const auto h = [&](double t) { return 1.0 - root(q1, s1, root(q2, s2, std::exp(t))) * std::exp(-t); };

  const double x_hat = root(q1, s1, root(q2, s2, q1.r0 / q1.j));
  const double t0 = std::log(x_hat);
  double lo = t0 - 0.5, hi = t0 + 0.5;
  double hlo = h(lo), hhi = h(hi);
  for (double step = 1.0; hlo >= 0.0; step *= 2.0) {
    hi = lo;
    hhi = hlo;
    lo -= step;
    if (lo < -700.0) throw Error(ErrorCode::BracketFailure, "no lower bracket for the c-root");
    hlo = h(lo);
  }
  for (double step = 1.0; hhi <= 0.0; step *= 2.0) {
    lo = hi;
    hlo = hhi;
    hi += step;
    if (hi > 700.0) throw Error(ErrorCode::BracketFailure, "no upper bracket for the c-root");
    hhi = h(hi);
  }

  std::uintmax_t max_iter = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [a, b] = boost::math::tools::toms748_solve(h, lo, hi, hlo, hhi, tol, max_iter);
  if (max_iter >= 200) throw Error(ErrorCode::BracketFailure, "c-root iteration did not settle");
  const double t = std::abs(h(a)) <= std::abs(h(b)) ? a : b;

  const double x = std::exp(t);
  const double y = root(q2, s2, x);
  CPair out;
  out.c1 = t;
  out.c2 = std::log(y);
  out.branch = branch;
  out.residual1 = relative_residual(q1.j, q1.r(y), q1.beta, x);
  out.residual2 = relative_residual(q2.j, q2.r(x), q2.beta, y);
  return out;
}

CPair solve_c_plus(const CouplingMatrix& k, double lambda, VortexNumbers n, const MomentSet& m) {
  return solve_c_branch(Branch::PlusPlus, k, lambda, n, m);
}

}  // namespace csvx
