#include "csvx/functional.hpp"

#include <cmath>
#include <numbers>

#include "csvx/error.hpp"

namespace csvx {

namespace {

constexpr double kPi = std::numbers::pi;

void require_variational(const CouplingMatrix& k) {
  if (!k.variational()) {
    throw Error(ErrorCode::InvalidArgument, "the energy requires b > 0 and c > 0");
  }
}

// p1^2, p2^2 and p1 p2 as fields.
struct Products {
  std::vector<double> p11, p22, p12;
};

Products products(const FieldPair& p) {
  const std::size_t n = p.f1.size();
  const auto& k = kernels::active();
  Products out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  k.multiply(p.f1.values().data(), p.f1.values().data(), out.p11.data(), n);
  k.multiply(p.f2.values().data(), p.f2.values().data(), out.p22.data(), n);
  k.multiply(p.f1.values().data(), p.f2.values().data(), out.p12.data(), n);
  return out;
}

}  // namespace

double l2_norm(const FieldPair& f) {
  const double a = f.f1.l2_norm(), b = f.f2.l2_norm();
  return std::sqrt(a * a + b * b);
}

ScalarField shifted(const ScalarField& v, double s) {
  ScalarField out = v;
  out += s;
  return out;
}

std::pair<kernels::QuadraticCoeffs, kernels::QuadraticCoeffs> rhs_coefficients(
    const CouplingMatrix& k) {
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d(), det = k.det();
  const double det2 = det * det;
  const kernels::QuadraticCoeffs r1{-a * (b + d) / det,
                                    b * (a + c) / det,
                                    a * a * (b + d) * (b + d) / det2,
                                    -b * (b + d) * (a * a - c * c) / det2,
                                    -b * d * (a + c) * (a + c) / det2};
  const kernels::QuadraticCoeffs r2{c * (b + d) / det,
                                    -d * (a + c) / det,
                                    -a * c * (b + d) * (b + d) / det2,
                                    -c * (a + c) * (d * d - b * b) / det2,
                                    d * d * (a + c) * (a + c) / det2};
  return {r1, r2};
}

FieldPair densities(const Background& bg, const ScalarField& v1, const ScalarField& v2) {
  require_same_grid(bg.e1, v1);
  require_same_grid(bg.e1, v2);
  FieldPair p{ScalarField(bg.grid_ptr()), ScalarField(bg.grid_ptr())};
  exp_weighted(bg.e1.values(), v1.values(), 0.0, p.f1.values());
  exp_weighted(bg.e2.values(), v2.values(), 0.0, p.f2.values());
  return p;
}

FieldPair system_residual(const Model& m, const ScalarField& v1, const ScalarField& v2) {
  const FieldPair p = densities(*m.bg, v1, v2);
  const auto [c1, c2] = rhs_coefficients(m.k);
  const std::size_t n = v1.size();
  FieldPair f{laplacian(v1), laplacian(v2)};
  std::vector<double> r1(n), r2(n);
  kernels::active().quadratic_pair(c1, c2, p.f1.values().data(), p.f2.values().data(), r1.data(),
                                   r2.data(), n);
  const double area = m.grid().area();
  const double s1 = 4.0 * kPi * m.bg->n1 / area;
  const double s2 = 4.0 * kPi * m.bg->n2 / area;
  for (std::size_t i = 0; i < n; ++i) {
    f.f1[i] -= m.lambda * r1[i] + s1;
    f.f2[i] -= m.lambda * r2[i] + s2;
  }
  return f;
}

double dirichlet_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  return -f.grid().inner(f.values(), laplacian(g).values());
}

QTerms q_terms(const CouplingMatrix& k, const Background& bg, const ScalarField& v1,
               const ScalarField& v2) {
  require_variational(k);
  const FieldPair p = densities(bg, v1, v2);
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d(), det = k.det();
  QTerms out{ScalarField(bg.grid_ptr()), ScalarField(bg.grid_ptr()), ScalarField(bg.grid_ptr())};
  const double wq1 = 1.0 / (2.0 * a * b * det);
  const double wq2 = (a + c) * (a + c) / (2.0 * a * c);
  for (std::size_t i = 0; i < p.f1.size(); ++i) {
    const double q1 = a * (b + d) * p.f1[i] - b * (a + c) * p.f2[i] - det;
    const double q2 = p.f2[i] - 1.0;
    out.q1[i] = q1;
    out.q2[i] = q2;
    out.q[i] = wq1 * q1 * q1 + wq2 * q2 * q2;
  }
  return out;
}

Pair alphas(const CouplingMatrix& k, VortexNumbers n) {
  require_variational(k);
  return {4.0 * kPi * (k.d() * n.n1 / k.b() + n.n2), 4.0 * kPi * (n.n1 + k.a() * n.n2 / k.c())};
}

namespace {

double dirichlet_block(const CouplingMatrix& k, const ScalarField& v1, const ScalarField& v2) {
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d();
  return 0.5 * (d / b) * dirichlet_product(v1, v1) + 0.5 * (a / c) * dirichlet_product(v2, v2) +
         dirichlet_product(v1, v2);
}

}  // namespace

FunctionalValue i_lambda(const Model& m, const ScalarField& v1, const ScalarField& v2) {
  const QTerms q = q_terms(m.k, *m.bg, v1, v2);
  const Pair al = alphas(m.k, m.n());
  const double area = m.grid().area();
  FunctionalValue out;
  out.dirichlet_part = dirichlet_block(m.k, v1, v2);
  out.potential_part = m.lambda * q.q.integral();
  out.linear_part = al[0] / area * v1.integral() + al[1] / area * v2.integral();
  out.total = out.dirichlet_part + out.potential_part + out.linear_part;
  return out;
}

FieldPair gradient_i(const Model& m, const ScalarField& v1, const ScalarField& v2) {
  const QTerms q = q_terms(m.k, *m.bg, v1, v2);
  const FieldPair p = densities(*m.bg, v1, v2);
  const double a = m.k.a(), b = m.k.b(), c = m.k.c(), d = m.k.d(), det = m.k.det();
  const Pair al = alphas(m.k, m.n());
  const double area = m.grid().area();
  const ScalarField lap1 = laplacian(v1), lap2 = laplacian(v2);
  FieldPair g{ScalarField(m.grid_ptr()), ScalarField(m.grid_ptr())};
  const double lam = m.lambda;
  const double k1 = 1.0 / (a * b * det);
  const double k2 = (a + c) * (a + c) / (a * c);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    g.f1[i] = -(d / b) * lap1[i] - lap2[i] + lam * k1 * q.q1[i] * a * (b + d) * p.f1[i] +
              al[0] / area;
    g.f2[i] = -lap1[i] - (a / c) * lap2[i] +
              lam * (k1 * q.q1[i] * (-b * (a + c)) * p.f2[i] + k2 * q.q2[i] * p.f2[i]) +
              al[1] / area;
  }
  return g;
}

Pair c_derivatives(const Model& m, const MomentSet& mo, double c1, double c2) {
  require_variational(m.k);
  const double a = m.k.a(), b = m.k.b(), c = m.k.c(), d = m.k.d(), det = m.k.det();
  const Pair beta = constraint_betas(m.k, m.lambda, m.n());
  const double x = std::exp(c1), y = std::exp(c2);
  const double con1 = a * (b + d) * x * x * mo.j1 - det * x * mo.i1 - b * (a + c) * x * y * mo.x +
                      beta[0] * a * (b + d);
  const double con2 = d * (a + c) * y * y * mo.j2 - det * y * mo.i2 - c * (b + d) * x * y * mo.x +
                      beta[1] * d * (a + c);
  return {m.lambda * (b + d) / (b * det) * con1, m.lambda * (a + c) / (c * det) * con2};
}

Mat2 hessian_c(const Model& m, const MomentSet& mo, const CPair& cp) {
  require_variational(m.k);
  const double a = m.k.a(), b = m.k.b(), c = m.k.c(), d = m.k.d(), det = m.k.det();
  const double lam = m.lambda;
  const double x = std::exp(cp.c1), y = std::exp(cp.c2);
  const double xy = x * y * mo.x;
  const double h11 = lam * (b + d) / (b * det) *
                     (2.0 * a * (b + d) * x * x * mo.j1 - b * (a + c) * xy - det * x * mo.i1);
  const double h22 = lam * (a + c) / (c * det) *
                     (2.0 * d * (a + c) * y * y * mo.j2 - det * y * mo.i2 - c * (b + d) * xy);
  const double h12 = -lam * (a + c) * (b + d) / det * xy;
  return {{{h11, h12}, {h12, h22}}};
}

JPlusValue j_plus(const Model& m, const ScalarField& w1, const ScalarField& w2) {
  require_variational(m.k);
  JPlusValue out;
  out.moments = integrals(*m.bg, w1, w2);
  out.admissibility = admissibility(m.k, m.lambda, m.n(), out.moments);
  if (!out.admissibility.member) {
    throw Error(ErrorCode::NotAdmissible, "pair lies outside the admissible set");
  }
  out.c = solve_c_plus(m.k, m.lambda, m.n(), out.moments);
  const double a = m.k.a(), b = m.k.b(), c = m.k.c(), d = m.k.d();
  const Pair al = alphas(m.k, m.n());
  const double area = m.grid().area();
  const double x = std::exp(out.c.c1), y = std::exp(out.c.c2);
  FunctionalValue& v = out.value;
  v.dirichlet_part = dirichlet_block(m.k, w1, w2);
  v.potential_part = 0.5 * m.lambda *
                         ((1.0 + d / b) * (area - x * out.moments.i1) +
                          (1.0 + a / c) * (area - y * out.moments.i2)) -
                     0.5 * (al[0] + al[1]);
  v.linear_part = al[0] * out.c.c1 + al[1] * out.c.c2;
  v.total = v.dirichlet_part + v.potential_part + v.linear_part;
  return out;
}

FieldPair projected_gradient(const Model& m, const ScalarField& w1, const ScalarField& w2,
                             const CPair& c) {
  FieldPair g = gradient_i(m, shifted(w1, c.c1), shifted(w2, c.c2));
  return {project_mean_zero(std::move(g.f1)), project_mean_zero(std::move(g.f2))};
}

FieldPair reduced_gradient(const Model& m, const ScalarField& w1, const ScalarField& w2,
                           const CPair& c) {
  const ScalarField v1 = shifted(w1, c.c1), v2 = shifted(w2, c.c2);
  FieldPair g = gradient_i(m, v1, v2);
  const FieldPair p = densities(*m.bg, v1, v2);
  const Products pp = products(p);
  const double a = m.k.a(), b = m.k.b(), cc = m.k.c(), d = m.k.d(), det = m.k.det();
  const std::size_t n = w1.size();

  // Variations of the two constraint functionals with respect to v1, v2.
  std::vector<double> l11(n), l12(n), l21(n), l22(n);
  for (std::size_t i = 0; i < n; ++i) {
    l11[i] = 2.0 * a * (b + d) * pp.p11[i] - det * p.f1[i] - b * (a + cc) * pp.p12[i];
    l12[i] = -b * (a + cc) * pp.p12[i];
    l21[i] = -cc * (b + d) * pp.p12[i];
    l22[i] = 2.0 * d * (a + cc) * pp.p22[i] - det * p.f2[i] - cc * (b + d) * pp.p12[i];
  }
  const TorusGrid& grid = m.grid();
  const double a11 = grid.integrate(l11), a12 = grid.integrate(l12);
  const double a21 = grid.integrate(l21), a22 = grid.integrate(l22);
  const double jdet = a11 * a22 - a12 * a21;
  if (!(std::abs(jdet) > 0.0)) {
    throw Error(ErrorCode::SingularLinearization, "constraint Jacobian in c is singular");
  }
  // dc = -A^{-1} (int L psi); dI/dc_k = int G_k.
  const double dc1 = g.f1.integral(), dc2 = g.f2.integral();
  // Row vector (dI/dc)^T (-A^{-1}).
  const double y1 = -(dc1 * a22 - dc2 * a21) / jdet;
  const double y2 = -(-dc1 * a12 + dc2 * a11) / jdet;
  for (std::size_t i = 0; i < n; ++i) {
    g.f1[i] += y1 * l11[i] + y2 * l21[i];
    g.f2[i] += y1 * l12[i] + y2 * l22[i];
  }
  return {project_mean_zero(std::move(g.f1)), project_mean_zero(std::move(g.f2))};
}

double decoupled_energy(const Model& m, const ScalarField& v1, const ScalarField& v2) {
  const FieldPair p = densities(*m.bg, v1, v2);
  const double area = m.grid().area();
  double total = 0.0;
  const ScalarField* v[2] = {&v1, &v2};
  const ScalarField* pv[2] = {&p.f1, &p.f2};
  const int nn[2] = {m.bg->n1, m.bg->n2};
  for (int c = 0; c < 2; ++c) {
    std::vector<double> sq(v1.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
      const double t = (*pv[c])[i] - 1.0;
      sq[i] = t * t;
    }
    total += 0.5 * dirichlet_product(*v[c], *v[c]) + 0.5 * m.lambda * m.grid().integrate(sq) +
             4.0 * kPi * nn[c] / area * v[c]->integral();
  }
  return total;
}

}  // namespace csvx
