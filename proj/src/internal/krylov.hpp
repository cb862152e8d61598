#pragma once

#include <functional>
#include <span>

namespace csvx::detail {

using LinearMap = std::function<void(std::span<const double> in, std::span<double> out)>;

struct GmresResult {
  int iterations = 0;
  /// Final true residual |b - A x| relative to |b|.
  double relative_residual = 0;
  bool converged = false;
};

/// Restarted GMRES with right preconditioning: solves A x = b through
/// A M^{-1} y = b, x = M^{-1} y. x is overwritten (zero initial guess).
GmresResult gmres(const LinearMap& a, const LinearMap& m_inv, std::span<const double> b,
                  std::span<double> x, double rtol, int restart, int max_iter);

}  // namespace csvx::detail
