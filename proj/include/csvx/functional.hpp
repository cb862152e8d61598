#pragma once

// The energy I_lambda on pairs (v1, v2), its L^2 gradient, the pointwise
// residual of the elliptic system, and the reduced energy J+ on mean-zero
// pairs with the averages eliminated through the constraints.

#include <memory>

#include "csvx/algebra.hpp"
#include "csvx/constraints.hpp"
#include "csvx/kernels.hpp"
#include "csvx/torus.hpp"

namespace csvx {

/// Coupling, lambda and background of one problem instance.
struct Model {
  CouplingMatrix k;
  double lambda;
  std::shared_ptr<const Background> bg;

  VortexNumbers n() const noexcept { return {bg->n1, bg->n2}; }
  const GridPtr& grid_ptr() const noexcept { return bg->grid_ptr(); }
  const TorusGrid& grid() const noexcept { return bg->grid(); }
};

struct FieldPair {
  ScalarField f1, f2;
};

/// sqrt(|f1|^2 + |f2|^2) in L^2.
double l2_norm(const FieldPair& f);

struct FunctionalValue {
  double total = 0;
  double dirichlet_part = 0;
  double potential_part = 0;
  double linear_part = 0;
};

/// Coefficients of the two right-hand sides of
///   Laplacian v_i = lambda RHS_i(p1, p2) + 4 pi N_i / |Omega|,  p_i = E_i e^{v_i},
/// as quadratic forms in (p1, p2). Valid for every admissible coupling,
/// including b = 0 and/or c = 0.
std::pair<kernels::QuadraticCoeffs, kernels::QuadraticCoeffs> rhs_coefficients(
    const CouplingMatrix& k);

/// p_i = E_i e^{v_i}. Throws Error(Overflow) past the exponent guard.
FieldPair densities(const Background& bg, const ScalarField& v1, const ScalarField& v2);

/// F_i = Laplacian v_i - lambda RHS_i - 4 pi N_i / |Omega|.
FieldPair system_residual(const Model& m, const ScalarField& v1, const ScalarField& v2);

/// int grad f . grad g, evaluated spectrally.
double dirichlet_product(const ScalarField& f, const ScalarField& g);

struct QTerms {
  ScalarField q1, q2, q;
};

/// Pointwise Q1, Q2 and Q. Requires b > 0 and c > 0.
QTerms q_terms(const CouplingMatrix& k, const Background& bg, const ScalarField& v1,
               const ScalarField& v2);

/// alpha_1 = 4 pi (d N1 / b + N2), alpha_2 = 4 pi (N1 + a N2 / c).
Pair alphas(const CouplingMatrix& k, VortexNumbers n);

FunctionalValue i_lambda(const Model& m, const ScalarField& v1, const ScalarField& v2);

/// L^2 representatives (G1, G2) of the derivative of I_lambda.
FieldPair gradient_i(const Model& m, const ScalarField& v1, const ScalarField& v2);

/// Derivatives of I_lambda along constant shifts of v1 and v2, from the
/// integrated constraints.
Pair c_derivatives(const Model& m, const MomentSet& moments, double c1, double c2);

/// Hessian of I_lambda in (c1, c2) at fixed (w1, w2).
Mat2 hessian_c(const Model& m, const MomentSet& moments, const CPair& c);

struct JPlusValue {
  FunctionalValue value;
  CPair c;
  MomentSet moments;
  AdmissibilityReport admissibility;
};

/// J+(w) = I_lambda(w + c+(w)) through its closed form. Throws
/// Error(NotAdmissible) outside the admissible set.
JPlusValue j_plus(const Model& m, const ScalarField& w1, const ScalarField& w2);

/// Mean-zero projection of the full gradient at v = w + c.
FieldPair projected_gradient(const Model& m, const ScalarField& w1, const ScalarField& w2,
                             const CPair& c);

/// Gradient of J+ on mean-zero pairs by the chain rule, differentiating c+(w)
/// through the implicit function theorem on the constraints. Agrees with
/// projected_gradient because the c-derivatives vanish at c+.
FieldPair reduced_gradient(const Model& m, const ScalarField& w1, const ScalarField& w2,
                           const CPair& c);

/// Sum of the scalar energies 1/2|grad v_i|^2 + lambda/2 int (p_i - 1)^2
/// + (4 pi N_i/|Omega|) int v_i. For b = c = 0 its critical points are the
/// solutions of the decoupled system.
double decoupled_energy(const Model& m, const ScalarField& v1, const ScalarField& v2);

/// v + s
ScalarField shifted(const ScalarField& v, double s);

}  // namespace csvx
