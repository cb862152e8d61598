#pragma once

// Discretized full system on the stacked unknown [v1; v2] (2n doubles):
// residual, Jacobian-vector products and a constant-coefficient spectral
// preconditioner.

#include <complex>
#include <span>
#include <vector>

#include "csvx/functional.hpp"
#include "internal/krylov.hpp"

namespace csvx::detail {

class NewtonSystem {
 public:
  explicit NewtonSystem(const Model& m);

  std::size_t nodes() const noexcept { return n_; }
  std::size_t size() const noexcept { return 2 * n_; }

  /// Writes F(v) and returns its L^2 norm. Throws Error(Overflow).
  double residual(std::span<const double> v, std::span<double> f) const;

  /// Pointwise Jacobian at v and the matching preconditioner.
  void linearize(std::span<const double> v);

  void apply_jacobian(std::span<const double> in, std::span<double> out) const;
  /// Approximate inverse of the Jacobian.
  void apply_preconditioner(std::span<const double> in, std::span<double> out) const;

  /// Solves J(v) dv = -f to relative tolerance `rtol`.
  GmresResult newton_step(std::span<const double> f, std::span<double> dv, double rtol,
                          int restart, int max_iter) const;

  double l2(std::span<const double> x) const;
  double inner(std::span<const double> x, std::span<const double> y) const;

  std::vector<double> pack(const ScalarField& v1, const ScalarField& v2) const;
  FieldPair unpack(std::span<const double> v) const;

 private:
  const Model& m_;
  std::size_t n_;
  std::vector<double> j11_, j12_, j21_, j22_;
  std::vector<double> p11_, p12_, p21_, p22_;
};

}  // namespace csvx::detail
