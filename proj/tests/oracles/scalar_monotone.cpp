#include "oracles/scalar_monotone.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

ScalarFixedPoint scalar_monotone(const csvx::ScalarField& e, double mu, int n, double tol,
                                 int max_iter) {
  const csvx::GridPtr& g = e.grid_ptr();
  const std::size_t size = g->size();
  const double source = 4 * std::numbers::pi * n / g->area();
  const auto k2 = g->wavenumber_sq();

  // Start from the supersolution -ln E (clipped at the vortices).
  std::vector<double> v(size), rhs(size), next(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = -std::log(e[i] + 1e-3);
  std::vector<std::complex<double>> spec(g->modes());
  ScalarFixedPoint out{csvx::ScalarField(g)};
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < size; ++i) {
      const double p = e[i] * std::exp(v[i]);
      rhs[i] = mu * p * (p - 1) + source - mu * v[i];
    }
    g->forward(rhs, spec);
    for (std::size_t q = 0; q < spec.size(); ++q) spec[q] /= -(k2[q] + mu);
    g->backward(spec, next);
    double change = 0, scale = 1;
    for (std::size_t i = 0; i < size; ++i) {
      change = std::max(change, std::abs(next[i] - v[i]));
      scale = std::max(scale, std::abs(next[i]));
    }
    v.swap(next);
    out.iterations = it + 1;
    out.last_change = change;
    if (change <= tol * scale) break;
  }
  out.v = csvx::ScalarField(g, v);
  return out;
}

}  // namespace oracle
