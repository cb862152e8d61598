#pragma once

// Solution procedures: the scalar problem used for initialization, the
// non-existence gate, constrained minimization of J+, Newton-Krylov refinement
// of the full system, lambda continuation and a deflated search for a second
// solution.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csvx/functional.hpp"

namespace csvx {

struct SolveOptions {
  /// Converged states satisfy |G| <= grad_tol * lambda.
  double grad_tol = 1e-8;
  int max_iter = 2000;
  /// Step factor after a trial step leaves the admissible set.
  double backoff = 0.5;
  int max_backoffs = 10;
  /// Minimization hands over to Newton once |G| <= newton_switch_tol * lambda.
  double newton_switch_tol = 1e-3;
  int lbfgs_memory = 10;
  /// L^2 residual target of the full system, relative to lambda.
  double newton_tol = 1e-10;
  int newton_max_iter = 60;
  /// Relative GMRES tolerance per Newton step.
  double forcing = 1e-3;
  int gmres_restart = 60;
  int gmres_max_iter = 600;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidArgument) on out-of-range values.
  void validate() const;

  bool operator==(const SolveOptions&) const = default;
};

enum class BranchTag { Minimizer, Secondary, NewtonOnly };

std::string_view to_string(BranchTag tag);
std::optional<BranchTag> parse_branch_tag(std::string_view s);

struct SolutionState {
  SolutionState(ScalarField w1_, ScalarField w2_) : w1(std::move(w1_)), w2(std::move(w2_)) {}

  ScalarField w1, w2;
  double c1 = 0, c2 = 0;
  double lambda = 0;
  bool converged = false;
  /// L^2 norm of the energy gradient (of the system residual when b c = 0).
  double grad_norm = 0;
  /// L^2 norm of the system residual.
  double residual_norm = 0;
  int iterations = 0;
  BranchTag branch_tag = BranchTag::Minimizer;
  /// J+ after every accepted minimization step.
  std::vector<double> objective_history;
  std::vector<std::string> notes;

  ScalarField v1() const { return shifted(w1, c1); }
  ScalarField v2() const { return shifted(w2, c2); }

  /// Splits full fields into mean-zero parts and averages.
  static SolutionState from_fields(const ScalarField& v1, const ScalarField& v2, double lambda);
};

struct ProgressEvent {
  std::string_view stage;
  int iteration;
  double objective;
  double norm;
};

using ProgressSink = std::function<void(const ProgressEvent&)>;

struct ScalarSolution {
  ScalarField v;
  bool converged = false;
  double residual = 0;
  int iterations = 0;
};

/// Maximal solution of Laplacian v = mu E e^v (E e^v - 1) + 4 pi N / |Omega|.
/// Throws Error(BelowThreshold) when mu < 16 pi N / |Omega| and Error(Diverged)
/// when the iteration collapses.
ScalarSolution solve_scalar_mu(const ScalarField& e, double mu, int n,
                               const SolveOptions& opts = {});

struct NonexistenceCertificate {
  double lambda = 0;
  double lambda_star = 0;
  double a = 0, b = 0, c = 0, d = 0;
  VortexNumbers n;
  double area = 0;
};

/// Empty when the necessary condition lambda >= lambda* holds (or N = 0).
std::optional<NonexistenceCertificate> nonexistence_gate(const CouplingMatrix& k, double lambda,
                                                         VortexNumbers n, double area);

/// Component-wise scalar solutions with mu_i matched to the diagonal of the
/// linearized system at the vacuum; mu is raised until the pair is admissible.
SolutionState default_initial_state(const Model& m, const SolveOptions& opts = {});

/// Descent on J+ over mean-zero pairs, followed by refine_newton. Throws
/// Error(StalledOnBoundary), Error(MaxIterations), Error(NotAdmissible) for an
/// inadmissible start.
SolutionState minimize_j_plus(const Model& m, const SolutionState& init,
                              const SolveOptions& opts = {}, const ProgressSink& sink = {});

/// Damped inexact Newton-GMRES on the full system. Returns the input
/// unchanged when it already meets the residual target. Throws
/// Error(SingularLinearization) or Error(Diverged).
SolutionState refine_newton(const Model& m, const SolutionState& state,
                            const SolveOptions& opts = {}, const ProgressSink& sink = {});

/// Smoothed -log(E_i + delta): a cheap start near the topological branch.
SolutionState newton_initial_state(const Model& m);

/// Full pipeline for one lambda: minimization when the coupling is variational
/// and the default start is admissible, otherwise (or on failure) Newton from
/// newton_initial_state with lambda continuation from above. Throws on failure.
SolutionState solve(const Model& m, const SolveOptions& opts = {}, const ProgressSink& sink = {});

/// Solve at m.lambda starting from a nearby state, sub-stepping lambda when a
/// direct attempt fails.
SolutionState solve_from(const Model& m, const SolutionState& start,
                         const SolveOptions& opts = {}, const ProgressSink& sink = {});

struct ContinuationEntry {
  double lambda = 0;
  std::optional<SolutionState> state;
  std::string error;
};

/// Warm-started sweep over a sorted lambda list; failures are recorded per entry.
std::vector<ContinuationEntry> continuation(const CouplingMatrix& k,
                                            const std::vector<double>& lambdas,
                                            std::shared_ptr<const Background> bg,
                                            const SolveOptions& opts = {},
                                            const ProgressSink& sink = {});

struct SecondSolutionReport {
  int starts_tried = 0;
  int newton_failures = 0;
  /// Candidates rejected as copies of the known solution or as lower in energy.
  int rejected = 0;
  std::vector<std::string> log;
};

struct SecondSolutionResult {
  std::optional<SolutionState> state;
  SecondSolutionReport report;
  /// Energies used for the comparison (I_lambda, or the decoupled energy when b c = 0).
  double first_energy = 0;
  double second_energy = 0;
  double distance = 0;

  bool found() const noexcept { return state.has_value(); }
};

/// Best-effort deflated Newton search for a second, higher-energy solution.
SecondSolutionResult find_second_solution(const Model& m, const SolutionState& first,
                                          const SolveOptions& opts = {});

/// Energy used to order solutions: I_lambda when b c > 0, else the decoupled energy.
double comparison_energy(const Model& m, const SolutionState& s);

}  // namespace csvx
