#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "csvx/error.hpp"
#include "csvx/kernels.hpp"
#include "csvx/torus.hpp"

namespace csvx {

namespace {

constexpr double kPi = std::numbers::pi;

// Logistic smooth step on (0,1): s(t) = 1 / (1 + exp(1/t - 1/(1-t))), rising
// from 0 to 1 with all derivatives vanishing at both ends. Returns s and 1-s
// without cancellation.
struct Step {
  double s, sc;
};

Step smooth_step(double t) {
  const double q = 1.0 / t - 1.0 / (1.0 - t);
  if (q > 0.0) {
    const double e = std::exp(-q);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
  }
  const double e = std::exp(q);
  return {1.0 / (1.0 + e), e / (1.0 + e)};
}

}  // namespace

Cutoff::Cutoff(double inner, double outer) : inner_(inner), outer_(outer) {
  if (!(inner > 0.0) || !(outer > inner)) {
    throw Error(ErrorCode::InvalidArgument, "cutoff radii must satisfy 0 < inner < outer");
  }
}

Cutoff Cutoff::for_lattice(const TorusLattice& lattice) {
  const double outer = 0.25 * lattice.shortest_vector();
  return Cutoff(0.25 * outer, outer);
}

// chi = 1 - s(t), t = (r - inner) / (outer - inner).
double Cutoff::value(double r) const noexcept {
  if (r <= inner_) return 1.0;
  if (r >= outer_) return 0.0;
  return smooth_step((r - inner_) / (outer_ - inner_)).sc;
}

double Cutoff::derivative(double r) const noexcept {
  if (r <= inner_ || r >= outer_) return 0.0;
  const double len = outer_ - inner_;
  const double t = (r - inner_) / len;
  const Step st = smooth_step(t);
  const double a = 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
  return -st.s * st.sc * a / len;
}

double Cutoff::second_derivative(double r) const noexcept {
  if (r <= inner_ || r >= outer_) return 0.0;
  const double len = outer_ - inner_;
  const double t = (r - inner_) / len;
  const Step st = smooth_step(t);
  const double a = 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
  const double da = -2.0 / (t * t * t) + 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t));
  const double s1 = st.s * st.sc * a;
  const double s2 = s1 * (st.sc - st.s) * a + st.s * st.sc * da;
  return -s2 / (len * len);
}

double Cutoff::log_moment() const {
  // int_0^inf r ln(r) chi(r) dr; the 2 pi of the polar measure cancels the 1/(2 pi).
  const double core = 0.5 * inner_ * inner_ * (std::log(inner_) - 0.5);
  const auto f = [this](double r) { return r * std::log(r) * value(r); };
  const double shell =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, inner_, outer_, 15, 1e-14);
  return core + shell;
}

namespace {

// Smooth remainder of Laplacian[(1/2pi) ln r chi(r)] away from the origin.
double log_cutoff_laplacian(const Cutoff& chi, double r) {
  if (r <= chi.inner() || r >= chi.outer()) return 0.0;
  const double d1 = chi.derivative(r);
  const double d2 = chi.second_derivative(r);
  return (2.0 * d1 / r + std::log(r) * (d2 + d1 / r)) / (2.0 * kPi);
}

}  // namespace

ScalarField green_regular_part(const GridPtr& grid, double p1, double p2) {
  const TorusLattice& lat = grid->lattice();
  const Cutoff chi = Cutoff::for_lattice(lat);
  const int n1 = grid->n1(), n2 = grid->n2();
  std::vector<double> rhs(grid->size());
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const double r = lat.min_image_distance(grid->s1(i) - p1, grid->s2(j) - p2);
      rhs[static_cast<std::size_t>(i) * n2 + j] = -log_cutoff_laplacian(chi, r);
    }
  }
  // The exact right-hand side -h - 1/|Omega| integrates to zero; projecting
  // the discrete mean out absorbs the quadrature error of h.
  const double m = grid->mean(rhs);
  for (double& x : rhs) x -= m;
  ScalarField out(grid, true);
  grid->inverse_laplacian(rhs, out.values());
  const double shift = -chi.log_moment() / grid->area();
  for (double& x : out.values()) x += shift;
  return out;
}

namespace {

// Closed form of the zero-mean Green's function through the Jacobi theta
// function. With the lattice reduced so that omega1 is a shortest vector and
// tau = omega2 / omega1 has Im tau >= sqrt(3)/2, for zeta = z / omega1:
//   2 pi G = ln|theta1(pi zeta | tau)| - pi (Im zeta)^2 / Im tau - mean,
// and the mean over a cell is -pi Im tau / 12 + sum_n ln|1 - q^{2n}|.
class ThetaGreen {
 public:
  explicit ThetaGreen(const TorusLattice& lat) : lat_(lat) {
    // Lagrange-Gauss reduction of (e1, e2).
    Vec2 u = lat.e1(), v = lat.e2();
    const auto dot = [](Vec2 x, Vec2 y) { return x.x * y.x + x.y * y.y; };
    for (int guard = 0; guard < 100; ++guard) {
      if (dot(u, u) > dot(v, v)) std::swap(u, v);
      const double mu = std::round(dot(u, v) / dot(u, u));
      if (mu == 0.0) break;
      v = {v.x - mu * u.x, v.y - mu * u.y};
    }
    omega1_ = {u.x, u.y};
    tau_ = std::complex<double>(v.x, v.y) / omega1_;
    if (tau_.imag() < 0.0) tau_ = -tau_;
    q_ = std::exp(std::complex<double>(0.0, kPi) * tau_);
    const double im = tau_.imag();
    double s = -kPi * im / 12.0;
    for (int n = 1; n < 64; ++n) {
      const std::complex<double> q2n = std::pow(q_, 2 * n);
      if (std::abs(q2n) < 1e-18) break;
      s += std::log(std::abs(1.0 - q2n));
    }
    mean_ = s;
  }

  /// 2 pi G at the displacement (ds1, ds2) in lattice coordinates; -inf at 0.
  double two_pi_g(double ds1, double ds2) const {
    const Vec2 z = lat_.to_cartesian(ds1, ds2);
    std::complex<double> zeta = std::complex<double>(z.x, z.y) / omega1_;
    const double im = tau_.imag();
    zeta -= std::round(zeta.imag() / im) * tau_;
    zeta -= std::round(zeta.real());
    if (zeta == std::complex<double>(0.0, 0.0)) return -std::numeric_limits<double>::infinity();
    const std::complex<double> w = kPi * zeta;
    const std::complex<double> e2 = std::exp(std::complex<double>(0.0, 2.0) * w);
    double lt = std::log(2.0) - kPi * im / 4.0 + std::log(std::abs(std::sin(w)));
    for (int n = 1; n < 64; ++n) {
      const std::complex<double> q2n = std::pow(q_, 2 * n);
      const double scale = std::abs(q2n) * std::max(std::abs(e2), 1.0 / std::abs(e2));
      lt += std::log(std::abs(1.0 - q2n)) + std::log(std::abs(1.0 - q2n * e2)) +
            std::log(std::abs(1.0 - q2n / e2));
      if (scale < 1e-18) break;
    }
    return lt - kPi * zeta.imag() * zeta.imag() / im - mean_;
  }

 private:
  const TorusLattice& lat_;
  std::complex<double> omega1_, tau_, q_;
  double mean_;
};

}  // namespace

ScalarField green_function(const GridPtr& grid, double p1, double p2) {
  const ThetaGreen theta(grid->lattice());
  ScalarField g(grid, true);
  const int n1 = grid->n1(), n2 = grid->n2();
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      g[static_cast<std::size_t>(i) * n2 + j] =
          theta.two_pi_g(grid->s1(i) - p1, grid->s2(j) - p2) / (2.0 * kPi);
    }
  }
  return g;
}

namespace {

// log E on the grid for one vortex set: 4 pi sum_p m_p G(x - p), -inf at
// coincident nodes.
std::vector<double> log_background(const GridPtr& grid, const VortexSet& z) {
  const ThetaGreen theta(grid->lattice());
  const int n1 = grid->n1(), n2 = grid->n2();
  std::vector<double> logs(grid->size(), 0.0);
  for (const Vortex& p : z.points()) {
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        logs[static_cast<std::size_t>(i) * n2 + j] +=
            2.0 * p.multiplicity * theta.two_pi_g(grid->s1(i) - p.s1, grid->s2(j) - p.s2);
      }
    }
  }
  return logs;
}

void check_separation(const TorusGrid& grid, const VortexSet& a, const VortexSet& b, bool same,
                      const char* label, std::vector<std::string>& warnings) {
  const double h = grid.spacing();
  const auto& pa = a.points();
  const auto& pb = b.points();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = same ? i + 1 : 0; j < pb.size(); ++j) {
      const double r = grid.lattice().min_image_distance(pa[i].s1 - pb[j].s1, pa[i].s2 - pb[j].s2);
      if (r > 0.0 && r < 2.0 * h) {
        std::ostringstream msg;
        msg << label << ": vortices at (" << pa[i].s1 << ", " << pa[i].s2 << ") and (" << pb[j].s1
            << ", " << pb[j].s2 << ") are closer than two grid spacings";
        warnings.push_back(msg.str());
      }
    }
  }
}

}  // namespace

Background build_background(const GridPtr& grid, const VortexSet& z1, const VortexSet& z2) {
  const auto make = [&](const VortexSet& z) {
    std::vector<double> e = log_background(grid, z);
    for (double& x : e) x = std::exp(x);
    return ScalarField(grid, std::move(e));
  };
  ScalarField e1 = make(z1);
  ScalarField e2 = make(z2);
  const auto& k = kernels::active();
  ScalarField e1_sq(grid), e2_sq(grid), e12(grid);
  k.multiply(e1.values().data(), e1.values().data(), e1_sq.values().data(), grid->size());
  k.multiply(e2.values().data(), e2.values().data(), e2_sq.values().data(), grid->size());
  k.multiply(e1.values().data(), e2.values().data(), e12.values().data(), grid->size());

  Background bg{std::move(e1), std::move(e2), std::move(e1_sq), std::move(e2_sq), std::move(e12),
                z1.total(), z2.total(), z1, z2, {}};
  check_separation(*grid, z1, z1, true, "Z1", bg.warnings);
  check_separation(*grid, z2, z2, true, "Z2", bg.warnings);
  check_separation(*grid, z1, z2, false, "Z1/Z2", bg.warnings);
  return bg;
}

void exp_weighted(std::span<const double> e, std::span<const double> w, double shift,
                  std::span<double> out) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double x = w[k] + shift;
    if (!(x <= kExpGuard)) {
      throw Error(ErrorCode::Overflow, "exponent exceeds the overflow guard");
    }
    out[k] = e[k] * std::exp(x);
  }
}

MomentSet integrals(const Background& bg, const ScalarField& w1, const ScalarField& w2) {
  require_same_grid(bg.e1, w1);
  require_same_grid(bg.e1, w2);
  const std::size_t n = w1.size();
  std::vector<double> p1(n), p2(n);
  exp_weighted(bg.e1.values(), w1.values(), 0.0, p1);
  exp_weighted(bg.e2.values(), w2.values(), 0.0, p2);
  const kernels::MomentSums s = kernels::active().moment_sums(p1.data(), p2.data(), n);
  const double wt = bg.grid().weight();
  return {s.s1 * wt, s.s2 * wt, s.s11 * wt, s.s22 * wt, s.s12 * wt};
}

}  // namespace csvx
