#include "internal/krylov.hpp"

#include <cmath>
#include <vector>

namespace csvx::detail {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

GmresResult gmres(const LinearMap& a, const LinearMap& m_inv, std::span<const double> b,
                  std::span<double> x, double rtol, int restart, int max_iter) {
  const std::size_t n = b.size();
  std::fill(x.begin(), x.end(), 0.0);
  GmresResult res;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const int m = restart;
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<double> h(static_cast<std::size_t>(m + 1) * m);
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  std::vector<double> r(b.begin(), b.end()), w(n), z(n), ax(n);
  const auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * m + j]; };

  double rnorm = bnorm;
  while (res.iterations < max_iter) {
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;
    int k = 0;
    for (; k < m && res.iterations < max_iter; ++k) {
      ++res.iterations;
      m_inv(v[k], z);
      a(z, w);
      // Modified Gram-Schmidt, one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= k; ++i) {
          const double hij = dot(w, v[i]);
          if (pass == 0) H(i, k) = hij; else H(i, k) += hij;
          for (std::size_t l = 0; l < n; ++l) w[l] -= hij * v[i][l];
        }
      }
      const double hn = std::sqrt(dot(w, w));
      H(k + 1, k) = hn;
      if (hn > 0.0) {
        for (std::size_t l = 0; l < n; ++l) v[k + 1][l] = w[l] / hn;
      }
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double den = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = den > 0.0 ? H(k, k) / den : 1.0;
      sn[k] = den > 0.0 ? H(k + 1, k) / den : 0.0;
      H(k, k) = den;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) <= rtol * bnorm || hn == 0.0) {
        ++k;
        break;
      }
    }
    // Back substitution and update x += M^{-1} V y.
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = H(i, i) != 0.0 ? s / H(i, i) : 0.0;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < n; ++l) w[l] += y[j] * v[j][l];
    }
    m_inv(w, z);
    for (std::size_t l = 0; l < n; ++l) x[l] += z[l];
    a(x, ax);
    for (std::size_t l = 0; l < n; ++l) r[l] = b[l] - ax[l];
    rnorm = std::sqrt(dot(r, r));
    res.relative_residual = rnorm / bnorm;
    if (res.relative_residual <= rtol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace csvx::detail
