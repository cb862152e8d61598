#include "csvx/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "csvx/error.hpp"

namespace csvx {

namespace {
constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}
}  // namespace

CouplingMatrix::CouplingMatrix(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d),
          "coupling entries must be finite");
  require(a > 0.0 && d > 0.0, "coupling requires a > 0 and d > 0");
  require(b >= 0.0 && c >= 0.0, "coupling requires b >= 0 and c >= 0");
  require(a * d - b * c > 0.0, "coupling requires ad - bc > 0");
}

Mat2 CouplingMatrix::inverse() const noexcept {
  const double det = this->det();
  return {{{d_ / det, b_ / det}, {c_ / det, a_ / det}}};
}

CouplingMatrix from_preset(GaugePreset preset) {
  switch (preset) {
    case GaugePreset::A2: return {2.0, 1.0, 1.0, 2.0};
    // B2 = C2; (a12, a21) = (1, 2) as displayed, the transpose describes the same algebra.
    case GaugePreset::B2: return {2.0, 1.0, 2.0, 2.0};
    case GaugePreset::G2: return {2.0, 1.0, 3.0, 2.0};
    case GaugePreset::A1xA1: return {2.0, 0.0, 0.0, 2.0};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown preset");
}

std::optional<GaugePreset> parse_preset(std::string_view name) {
  if (name == "A2" || name == "SU3") return GaugePreset::A2;
  if (name == "B2" || name == "C2") return GaugePreset::B2;
  if (name == "G2") return GaugePreset::G2;
  if (name == "A1xA1") return GaugePreset::A1xA1;
  return std::nullopt;
}

std::string_view to_string(GaugePreset preset) {
  switch (preset) {
    case GaugePreset::A2: return "A2";
    case GaugePreset::B2: return "B2";
    case GaugePreset::G2: return "G2";
    case GaugePreset::A1xA1: return "A1xA1";
  }
  return "?";
}

double lambda_from_kappa(double v, double kappa) {
  require(kappa > 0.0 && v > 0.0, "kappa and v must be positive");
  return 4.0 * v * v * v * v / (kappa * kappa);
}

double kappa_from_lambda(double v, double lambda) {
  require(lambda > 0.0 && v > 0.0, "lambda and v must be positive");
  return 2.0 * v * v / std::sqrt(lambda);
}

PhysicalParams PhysicalParams::from_kappa(double kappa, double v) {
  return {kappa, v, lambda_from_kappa(v, kappa)};
}

PhysicalParams PhysicalParams::from_lambda(double lambda, double v) {
  return {kappa_from_lambda(v, lambda), v, lambda};
}

Pair vacuum_moduli(const CouplingMatrix& k, double v) {
  const Mat2 inv = k.inverse();
  const double v2 = v * v;
  return {v2 * (inv[0][0] + inv[0][1]), v2 * (inv[1][0] + inv[1][1])};
}

Pair predicted_flux(const CouplingMatrix& k, VortexNumbers n) {
  const Mat2 inv = k.inverse();
  const double n1 = n.n1, n2 = n.n2;
  return {2.0 * kPi * (inv[0][0] * n1 + inv[1][0] * n2),
          2.0 * kPi * (inv[0][1] * n1 + inv[1][1] * n2)};
}

Pair predicted_charge(const CouplingMatrix& k, VortexNumbers n, double kappa) {
  require(kappa > 0.0, "kappa must be positive");
  const Pair flux = predicted_flux(k, n);
  return {kappa * flux[0], kappa * flux[1]};
}

double predicted_energy(const CouplingMatrix& k, VortexNumbers n, double v) {
  require(v > 0.0, "v must be positive");
  const Pair flux = predicted_flux(k, n);
  return v * v * (flux[0] + flux[1]);
}

double nonexistence_threshold(const CouplingMatrix& k, VortexNumbers n, double area) {
  require(area > 0.0, "area must be positive");
  require(n.n1 >= 0 && n.n2 >= 0, "vortex numbers must be non-negative");
  if (n.total() == 0) {
    throw Error(ErrorCode::ThresholdUndefined, "N = (0,0): the vacuum exists for every lambda");
  }
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d();
  const double n1 = n.n1, n2 = n.n2;
  const double first = (d * n1 + b * n2) / (a * (b + d) * (b + d));
  const double second = (c * n1 + a * n2) / (d * (a + c) * (a + c));
  return 16.0 * kPi * k.det() / area * std::max(first, second);
}

double kappa_threshold(const CouplingMatrix& k, VortexNumbers n, double area, double v) {
  return kappa_from_lambda(v, nonexistence_threshold(k, n, area));
}

double admissibility_floor(const CouplingMatrix& k, VortexNumbers n, double area) {
  require(area > 0.0, "area must be positive");
  const double a = k.a(), b = k.b(), c = k.c(), d = k.d();
  const double first = a * (d * n.n1 + b * n.n2);
  const double second = d * (c * n.n1 + a * n.n2);
  return 16.0 * kPi * std::max(first, second) / (k.det() * area);
}

Pair phi_squared_from_u(const CouplingMatrix& k, double v, double eu1, double eu2) {
  const double v2 = v * v;
  return {v2 * (k.b() + k.d()) / k.det() * eu1, v2 * (k.a() + k.c()) / k.det() * eu2};
}

}  // namespace csvx
