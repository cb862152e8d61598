#pragma once

// Reduction to the averages: for mean-zero (w1, w2) the averages c_i solve two
// coupled quadratics in X = e^{c1}, Y = e^{c2},
//   J1 X^2 - R1(Y) X + beta1 = 0,   J2 Y^2 - R2(X) Y + beta2 = 0,
// whose roots are the branch maps g1^{+-}(Y), g2^{+-}(X).

#include <string_view>

#include "csvx/algebra.hpp"
#include "csvx/torus.hpp"

namespace csvx {

struct AdmissibilityReport {
  /// I_i^2 - (16 pi ...) J_i
  double margin1 = 0, margin2 = 0;
  bool interior = false;
  bool on_boundary = false;
  /// Both margins >= -tolerance.
  bool member = false;
};

/// Margins are "on the boundary" within 1e-10 * I_i^2.
AdmissibilityReport admissibility(const CouplingMatrix& k, double lambda, VortexNumbers n,
                                  const MomentSet& m);

/// Constant terms of the two quadratics.
Pair constraint_betas(const CouplingMatrix& k, double lambda, VortexNumbers n);

/// R1 = det I1 / (a(b+d)) + b(a+c) / (a(b+d)) Y X
double r1(const CouplingMatrix& k, const MomentSet& m, double y);
/// R2 = det I2 / (d(a+c)) + c(b+d) / (d(a+c)) X X
double r2(const CouplingMatrix& k, const MomentSet& m, double x);

enum class Sign { Plus, Minus };

/// g_which^sign(arg) = (R +- sqrt(R^2 - 4 beta J)) / (2 J), which in {1, 2}.
/// Throws Error(NegativeDiscriminant) when the root is complex.
double g_branch(int which, Sign sign, const CouplingMatrix& k, double lambda, VortexNumbers n,
                const MomentSet& m, double arg);

/// Closed-form derivative dg/darg = +- g * R' / sqrt(R^2 - 4 beta J).
double g_branch_slope(int which, Sign sign, const CouplingMatrix& k, double lambda,
                      VortexNumbers n, const MomentSet& m, double arg);

/// Sign choice for (g1, g2).
enum class Branch { PlusPlus, MinusMinus, PlusMinus, MinusPlus };

std::string_view to_string(Branch branch);

/// F(X) = X - g1(g2(X)) for the given branch.
double f_star(Branch branch, const CouplingMatrix& k, double lambda, VortexNumbers n,
              const MomentSet& m, double x);

struct CPair {
  double c1 = 0, c2 = 0;
  Branch branch = Branch::PlusPlus;
  /// Relative residuals of the two quadratics.
  double residual1 = 0, residual2 = 0;
};

/// Relative residuals of both quadratics at (c1, c2).
Pair constraint_residuals(const CouplingMatrix& k, double lambda, VortexNumbers n,
                          const MomentSet& m, double c1, double c2);

/// The ++ root used by the solver. Throws Error(NotAdmissible) outside the
/// admissible set and Error(BracketFailure) if no sign change is found.
CPair solve_c_plus(const CouplingMatrix& k, double lambda, VortexNumbers n, const MomentSet& m);

/// Any branch. A minus sign on a component with beta = 0 has the root 0
/// (c = -infinity) and raises Error(DegenerateBranch).
CPair solve_c_branch(Branch branch, const CouplingMatrix& k, double lambda, VortexNumbers n,
                     const MomentSet& m);

}  // namespace csvx
