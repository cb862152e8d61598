#pragma once

// Coupling-matrix algebra for rank-2 self-dual Chern-Simons vortices:
// vacuum moduli, quantized flux/charge/energy and the existence thresholds.

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace csvx {

using Pair = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// The 2x2 coupling K = (a, -b; -c, d) with a, d > 0, b, c >= 0 and ad - bc > 0.
class CouplingMatrix {
 public:
  /// Validates the invariants; throws Error(InvalidArgument) otherwise.
  CouplingMatrix(double a, double b, double c, double d);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  double det() const noexcept { return a_ * d_ - b_ * c_; }

  /// The variational formulation divides by b and c.
  bool variational() const noexcept { return b_ > 0.0 && c_ > 0.0; }
  bool decoupled() const noexcept { return b_ == 0.0 && c_ == 0.0; }

  /// Entries of K itself, K(0,1) = -b.
  Mat2 matrix() const noexcept { return {{{a_, -b_}, {-c_, d_}}}; }

  /// Closed form (d, b; c, a) / (ad - bc).
  Mat2 inverse() const noexcept;

  /// Component swap (a,b,c,d) -> (d,c,b,a).
  CouplingMatrix swapped() const { return {d_, c_, b_, a_}; }

  bool operator==(const CouplingMatrix&) const = default;

 private:
  double a_, b_, c_, d_;
};

enum class GaugePreset { A2, B2, G2, A1xA1 };

CouplingMatrix from_preset(GaugePreset preset);
std::optional<GaugePreset> parse_preset(std::string_view name);
std::string_view to_string(GaugePreset preset);

struct VortexNumbers {
  int n1 = 0;
  int n2 = 0;

  int total() const noexcept { return n1 + n2; }
  bool operator==(const VortexNumbers&) const = default;
};

/// kappa, v and the derived lambda = 4 v^4 / kappa^2.
struct PhysicalParams {
  double kappa;
  double v;
  double lambda;

  static PhysicalParams from_kappa(double kappa, double v);
  static PhysicalParams from_lambda(double lambda, double v);
};

double lambda_from_kappa(double v, double kappa);
double kappa_from_lambda(double v, double lambda);

/// |phi_(0)^i|^2 = v^2 sum_j (K^-1)_ij.
Pair vacuum_moduli(const CouplingMatrix& k, double v);

/// Phi_a = 2 pi sum_b (K^-1)_ba N_b.
Pair predicted_flux(const CouplingMatrix& k, VortexNumbers n);

/// Q_a = kappa Phi_a; kappa must be positive.
Pair predicted_charge(const CouplingMatrix& k, VortexNumbers n, double kappa);

/// E = v^2 (Phi_1 + Phi_2) = 2 pi sum_b |phi_(0)^b|^2 N_b.
double predicted_energy(const CouplingMatrix& k, VortexNumbers n, double v);

/// Necessary-condition threshold lambda*: no solution exists for lambda < lambda*.
/// Throws Error(ThresholdUndefined) for N = (0, 0).
double nonexistence_threshold(const CouplingMatrix& k, VortexNumbers n, double area);

/// kappa* = 2 v^2 / sqrt(lambda*); no solution exists for kappa > kappa*.
double kappa_threshold(const CouplingMatrix& k, VortexNumbers n, double area, double v);

/// Smallest lambda for which vacuum-like moments are admissible,
/// 16 pi max{a(dN1 + bN2), d(cN1 + aN2)} / ((ad - bc)|Omega|). Below it the
/// admissible set is empty (Cauchy-Schwarz), so only Newton paths apply.
double admissibility_floor(const CouplingMatrix& k, VortexNumbers n, double area);

/// |phi^1|^2 = v^2 (b+d)/(ad-bc) e^{u1}, |phi^2|^2 = v^2 (a+c)/(ad-bc) e^{u2}.
Pair phi_squared_from_u(const CouplingMatrix& k, double v, double eu1, double eu2);

}  // namespace csvx
