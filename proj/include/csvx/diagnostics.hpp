#pragma once

// Observables of a computed state (fluxes, charges, energy) and the checks a
// solution must pass: residuals, constraints, the bound e^u < 1 and the
// approach to the vacuum as lambda grows.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csvx/algebra.hpp"
#include "csvx/functional.hpp"
#include "csvx/solver.hpp"

namespace csvx {

/// Phi^b = int -(lambda/2) sum_a (K^-1)_ab RHS_a, by nodal quadrature of the
/// pointwise densities.
Pair flux(const Model& m, const SolutionState& s);

/// The same fluxes from the moments of (w1, w2) and the averages, i.e. from
/// the integrated constraints.
Pair flux_from_constraints(const Model& m, const SolutionState& s);

struct EnergyCharge {
  double energy = 0;
  Pair charge{};
};

/// E = v^2 (Phi1 + Phi2), Q_a = kappa Phi_a.
EnergyCharge energy_and_charge(const Pair& flux, const PhysicalParams& params);

enum class MaxPrincipleStatus { Strict, Marginal, Violation };

std::string_view to_string(MaxPrincipleStatus status);

/// Overshoot above 1 still attributed to discretization.
inline constexpr double kMaxPrincipleSlack = 1e-4;

struct MaxPrincipleReport {
  Pair max_eu{};
  /// Node (i, j) of each maximum.
  std::array<std::array<int, 2>, 2> location{};
  /// Components with e^u == 1 identically (no vortices and no coupling to any).
  std::array<bool, 2> vacuum{};
  MaxPrincipleStatus status = MaxPrincipleStatus::Strict;

  bool pass() const noexcept { return status != MaxPrincipleStatus::Violation; }
  bool operator==(const MaxPrincipleReport&) const = default;
};

/// Strict when every non-vacuum component has max e^u <= 1 - margin,
/// Marginal below 1 + kMaxPrincipleSlack, Violation otherwise.
MaxPrincipleReport max_principle_check(const Model& m, const SolutionState& s,
                                       double margin = 1e-8);

/// ||e^{u_i} - 1||_p for p = 1 and p = 2.
struct LpGaps {
  Pair l1{}, l2{};
  bool operator==(const LpGaps&) const = default;
};

LpGaps lp_gaps(const Model& m, const SolutionState& s);

struct GapRow {
  double lambda = 0;
  LpGaps gaps;
  /// Phi1 + Phi2, the energy at v = 1.
  double energy = 0;
  Pair max_eu{};
};

struct GapTable {
  std::vector<GapRow> rows;
  /// Gaps strictly decrease along increasing lambda (identically zero gaps
  /// count as decreasing).
  bool monotone_l1 = true;
  bool monotone_l2 = true;
};

/// States share the background; rows are sorted by lambda.
GapTable asymptotic_gaps(const CouplingMatrix& k, std::shared_ptr<const Background> bg,
                         const std::vector<SolutionState>& states);

struct VerifyTolerances {
  /// On ||F||_2 / lambda.
  double residual = 1e-8;
  double constraint = 1e-8;
  /// Relative to max(|predicted|, 1).
  double flux = 1e-2;
  double max_principle_margin = 1e-8;
};

struct SolutionReport {
  double lambda = 0, kappa = 0, v = 1;
  double a = 0, b = 0, c = 0, d = 0;
  int n1 = 0, n2 = 0;
  Pair fluxes{}, fluxes_constraint{}, predicted_fluxes{}, flux_errors{};
  Pair charges{};
  double energy = 0, predicted_energy = 0;
  MaxPrincipleReport max_principle;
  /// L^2 norms of the two system residuals.
  Pair residuals{};
  double grad_norm = 0;
  Pair constraint_residuals{};
  LpGaps gaps;
  std::optional<double> lambda_star, kappa_star;
  Pair admissibility_margins{};
  std::string branch_tag;
  bool converged = false;
  bool pass = false;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool operator==(const SolutionReport&) const = default;
};

SolutionReport verify(const Model& m, const SolutionState& s, const PhysicalParams& params,
                      const VerifyTolerances& tol = {});

void to_json(nlohmann::json& j, const SolutionReport& r);
void from_json(const nlohmann::json& j, SolutionReport& r);

}  // namespace csvx
