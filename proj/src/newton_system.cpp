#include "internal/newton_system.hpp"

#include <algorithm>
#include <cmath>

#include "csvx/error.hpp"

namespace csvx::detail {

NewtonSystem::NewtonSystem(const Model& m) : m_(m), n_(m.grid().size()) {}

double NewtonSystem::l2(std::span<const double> x) const { return std::sqrt(inner(x, x)); }

double NewtonSystem::inner(std::span<const double> x, std::span<const double> y) const {
  return kernels::active().dot(x.data(), y.data(), x.size()) * m_.grid().weight();
}

std::vector<double> NewtonSystem::pack(const ScalarField& v1, const ScalarField& v2) const {
  std::vector<double> v(size());
  std::copy(v1.values().begin(), v1.values().end(), v.begin());
  std::copy(v2.values().begin(), v2.values().end(), v.begin() + n_);
  return v;
}

FieldPair NewtonSystem::unpack(std::span<const double> v) const {
  return {ScalarField(m_.grid_ptr(), std::vector<double>(v.begin(), v.begin() + n_)),
          ScalarField(m_.grid_ptr(), std::vector<double>(v.begin() + n_, v.end()))};
}

double NewtonSystem::residual(std::span<const double> v, std::span<double> f) const {
  const FieldPair vv = unpack(v);
  const FieldPair r = system_residual(m_, vv.f1, vv.f2);
  std::copy(r.f1.values().begin(), r.f1.values().end(), f.begin());
  std::copy(r.f2.values().begin(), r.f2.values().end(), f.begin() + n_);
  return l2(f);
}

void NewtonSystem::linearize(std::span<const double> v) {
  const FieldPair vv = unpack(v);
  const FieldPair p = densities(*m_.bg, vv.f1, vv.f2);
  const auto [c1, c2] = rhs_coefficients(m_.k);
  j11_.assign(n_, 0.0);
  j12_.assign(n_, 0.0);
  j21_.assign(n_, 0.0);
  j22_.assign(n_, 0.0);
  kernels::active().quadratic_jacobian(c1, c2, p.f1.values().data(), p.f2.values().data(),
                                       j11_.data(), j12_.data(), j21_.data(), j22_.data(), n_);
  const double lam = m_.lambda;
  for (std::size_t i = 0; i < n_; ++i) {
    j11_[i] *= lam;
    j12_[i] *= lam;
    j21_[i] *= lam;
    j22_[i] *= lam;
  }

  // Spatial mean of the multiplier, shifted so both eigenvalues have real
  // part bounded away from zero; then per mode P = -(|k|^2 + S)^{-1}.
  const TorusGrid& g = m_.grid();
  double s11 = g.mean(j11_), s12 = g.mean(j12_), s21 = g.mean(j21_), s22 = g.mean(j22_);
  const double tr = s11 + s22, det = s11 * s22 - s12 * s21;
  const double disc = 0.25 * tr * tr - det;
  const double re_min = disc >= 0.0 ? 0.5 * tr - std::sqrt(disc) : 0.5 * tr;
  const double rho = std::max({std::abs(0.5 * tr) + std::sqrt(std::abs(disc)), 1e-3 * lam, 1e-12});
  const double floor = 0.05 * rho;
  if (re_min < floor) {
    s11 += floor - re_min;
    s22 += floor - re_min;
  }
  const auto k2 = g.wavenumber_sq();
  p11_.resize(k2.size());
  p12_.resize(k2.size());
  p21_.resize(k2.size());
  p22_.resize(k2.size());
  for (std::size_t q = 0; q < k2.size(); ++q) {
    const double a11 = k2[q] + s11, a22 = k2[q] + s22;
    const double dd = a11 * a22 - s12 * s21;
    p11_[q] = -a22 / dd;
    p12_[q] = s12 / dd;
    p21_[q] = s21 / dd;
    p22_[q] = -a11 / dd;
  }
}

void NewtonSystem::apply_jacobian(std::span<const double> in, std::span<double> out) const {
  const TorusGrid& g = m_.grid();
  const auto x1 = in.subspan(0, n_), x2 = in.subspan(n_, n_);
  auto y1 = out.subspan(0, n_), y2 = out.subspan(n_, n_);
  g.laplacian(x1, y1);
  g.laplacian(x2, y2);
  for (std::size_t i = 0; i < n_; ++i) {
    y1[i] -= j11_[i] * x1[i] + j12_[i] * x2[i];
    y2[i] -= j21_[i] * x1[i] + j22_[i] * x2[i];
  }
}

void NewtonSystem::apply_preconditioner(std::span<const double> in, std::span<double> out) const {
  const TorusGrid& g = m_.grid();
  std::vector<std::complex<double>> z1(g.modes()), z2(g.modes());
  g.forward(in.subspan(0, n_), z1);
  g.forward(in.subspan(n_, n_), z2);
  kernels::active().apply_mode_matrices(p11_.data(), p12_.data(), p21_.data(), p22_.data(),
                                        z1.data(), z2.data(), z1.size());
  g.backward(z1, out.subspan(0, n_));
  g.backward(z2, out.subspan(n_, n_));
}

GmresResult NewtonSystem::newton_step(std::span<const double> f, std::span<double> dv,
                                      double rtol, int restart, int max_iter) const {
  std::vector<double> rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
  const LinearMap a = [this](std::span<const double> x, std::span<double> y) {
    apply_jacobian(x, y);
  };
  const LinearMap p = [this](std::span<const double> x, std::span<double> y) {
    apply_preconditioner(x, y);
  };
  return gmres(a, p, rhs, dv, rtol, restart, max_iter);
}

}  // namespace csvx::detail
