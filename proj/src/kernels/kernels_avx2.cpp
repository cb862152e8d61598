// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace csvx::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// [s0, s1] -> [s0, s0, s1, s1]
inline __m256d spread2(const double* s) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(s)), 0x50);
}

MomentSums moment_sums(const double* p1, const double* p2, std::size_t n) {
  __m256d a1 = _mm256_setzero_pd(), a2 = a1, a11 = a1, a22 = a1, a12 = a1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(p1 + i);
    const __m256d y = _mm256_loadu_pd(p2 + i);
    a1 = _mm256_add_pd(a1, x);
    a2 = _mm256_add_pd(a2, y);
    a11 = _mm256_fmadd_pd(x, x, a11);
    a22 = _mm256_fmadd_pd(y, y, a22);
    a12 = _mm256_fmadd_pd(x, y, a12);
  }
  MomentSums m{hsum(a1), hsum(a2), hsum(a11), hsum(a22), hsum(a12)};
  for (; i < n; ++i) {
    const double x = p1[i], y = p2[i];
    m.s1 += x;
    m.s2 += y;
    m.s11 += x * x;
    m.s22 += y * y;
    m.s12 += x * y;
  }
  return m;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = acc0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void multiply(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

inline __m256d quad(const QuadraticCoeffs& c, __m256d a, __m256d b) {
  // ((q11 a + q12 b + l1) a) + ((q22 b + l2) b)
  const __m256d t1 = _mm256_fmadd_pd(_mm256_set1_pd(c.q11), a,
                                     _mm256_fmadd_pd(_mm256_set1_pd(c.q12), b,
                                                     _mm256_set1_pd(c.l1)));
  const __m256d t2 = _mm256_fmadd_pd(_mm256_set1_pd(c.q22), b, _mm256_set1_pd(c.l2));
  return _mm256_fmadd_pd(t1, a, _mm256_mul_pd(t2, b));
}

void quadratic_pair(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                    const double* p2, double* r1, double* r2, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p1 + i);
    const __m256d b = _mm256_loadu_pd(p2 + i);
    _mm256_storeu_pd(r1 + i, quad(c1, a, b));
    _mm256_storeu_pd(r2 + i, quad(c2, a, b));
  }
  for (; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    r1[i] = c1.l1 * a + c1.l2 * b + c1.q11 * a * a + c1.q12 * a * b + c1.q22 * b * b;
    r2[i] = c2.l1 * a + c2.l2 * b + c2.q11 * a * a + c2.q12 * a * b + c2.q22 * b * b;
  }
}

void quadratic_jacobian(const QuadraticCoeffs& c1, const QuadraticCoeffs& c2, const double* p1,
                        const double* p2, double* j11, double* j12, double* j21, double* j22,
                        std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p1 + i);
    const __m256d b = _mm256_loadu_pd(p2 + i);
    const __m256d a2 = _mm256_mul_pd(two, a);
    const __m256d b2 = _mm256_mul_pd(two, b);
    auto row = [&](const QuadraticCoeffs& c, double* out_a, double* out_b) {
      const __m256d da = _mm256_fmadd_pd(_mm256_set1_pd(c.q11), a2,
                                         _mm256_fmadd_pd(_mm256_set1_pd(c.q12), b,
                                                         _mm256_set1_pd(c.l1)));
      const __m256d db = _mm256_fmadd_pd(_mm256_set1_pd(c.q22), b2,
                                         _mm256_fmadd_pd(_mm256_set1_pd(c.q12), a,
                                                         _mm256_set1_pd(c.l2)));
      _mm256_storeu_pd(out_a + i, _mm256_mul_pd(da, a));
      _mm256_storeu_pd(out_b + i, _mm256_mul_pd(db, b));
    };
    row(c1, j11, j12);
    row(c2, j21, j22);
  }
  for (; i < n; ++i) {
    const double a = p1[i], b = p2[i];
    j11[i] = (c1.l1 + 2.0 * c1.q11 * a + c1.q12 * b) * a;
    j12[i] = (c1.l2 + c1.q12 * a + 2.0 * c1.q22 * b) * b;
    j21[i] = (c2.l1 + 2.0 * c2.q11 * a + c2.q12 * b) * a;
    j22[i] = (c2.l2 + c2.q12 * a + 2.0 * c2.q22 * b) * b;
  }
}

void scale_modes(const double* symbol, std::complex<double>* data, std::size_t n) {
  auto* raw = reinterpret_cast<double*>(data);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    double* z = raw + 2 * i;
    _mm256_storeu_pd(z, _mm256_mul_pd(spread2(symbol + i), _mm256_loadu_pd(z)));
  }
  for (; i < n; ++i) data[i] *= symbol[i];
}

void apply_mode_matrices(const double* m11, const double* m12, const double* m21,
                         const double* m22, std::complex<double>* z1, std::complex<double>* z2,
                         std::size_t n) {
  auto* r1 = reinterpret_cast<double*>(z1);
  auto* r2 = reinterpret_cast<double*>(z2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(r1 + 2 * i);
    const __m256d b = _mm256_loadu_pd(r2 + 2 * i);
    const __m256d out1 = _mm256_fmadd_pd(spread2(m11 + i), a, _mm256_mul_pd(spread2(m12 + i), b));
    const __m256d out2 = _mm256_fmadd_pd(spread2(m21 + i), a, _mm256_mul_pd(spread2(m22 + i), b));
    _mm256_storeu_pd(r1 + 2 * i, out1);
    _mm256_storeu_pd(r2 + 2 * i, out2);
  }
  for (; i < n; ++i) {
    const std::complex<double> a = z1[i], b = z2[i];
    z1[i] = m11[i] * a + m12[i] * b;
    z2[i] = m21[i] * a + m22[i] * b;
  }
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2,         moment_sums,       dot,
                             axpy,              multiply,          quadratic_pair,
                             quadratic_jacobian, scale_modes,      apply_mode_matrices};

}  // namespace csvx::kernels::detail
