// AVX2/FMA kernels: four measurements per ymm register. Built with -mavx2 -mfma
// and only called after a runtime CPU check. Remainders fall through to the
// scalar reference so results match it to rounding.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace ququart::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

BatchView tail(const BatchView& batch, std::size_t start) {
  BatchView rest;
  rest.size = batch.size - start;
  for (int i = 0; i < 4; ++i) {
    rest.re[i] = batch.re[i] + start;
    rest.im[i] = batch.im[i] + start;
  }
  return rest;
}

}  // namespace

void amplitudes(const BatchView& batch, const Packed& y, double* m_re, double* m_im) {
  __m256d ya[4];
  __m256d yb[4];
  for (int i = 0; i < 4; ++i) {
    ya[i] = _mm256_set1_pd(y[i]);
    yb[i] = _mm256_set1_pd(y[i + 4]);
  }
  std::size_t nu = 0;
  for (; nu + 4 <= batch.size; nu += 4) {
    __m256d re = _mm256_setzero_pd();
    __m256d im = _mm256_setzero_pd();
    for (int i = 0; i < 4; ++i) {
      const __m256d wr = _mm256_loadu_pd(batch.re[i] + nu);
      const __m256d wi = _mm256_loadu_pd(batch.im[i] + nu);
      re = _mm256_fmadd_pd(wr, ya[i], re);
      re = _mm256_fnmadd_pd(wi, yb[i], re);
      im = _mm256_fmadd_pd(wi, ya[i], im);
      im = _mm256_fmadd_pd(wr, yb[i], im);
    }
    _mm256_storeu_pd(m_re + nu, re);
    _mm256_storeu_pd(m_im + nu, im);
  }
  if (nu < batch.size) scalar::amplitudes(tail(batch, nu), y, m_re + nu, m_im + nu);
}

void gradient(const BatchView& batch, const double* cr, const double* ci, Packed& out) {
  __m256d acc[8];
  for (auto& a : acc) a = _mm256_setzero_pd();
  std::size_t nu = 0;
  for (; nu + 4 <= batch.size; nu += 4) {
    const __m256d r = _mm256_loadu_pd(cr + nu);
    const __m256d c = _mm256_loadu_pd(ci + nu);
    for (int i = 0; i < 4; ++i) {
      const __m256d wr = _mm256_loadu_pd(batch.re[i] + nu);
      const __m256d wi = _mm256_loadu_pd(batch.im[i] + nu);
      acc[i] = _mm256_fmadd_pd(r, wr, acc[i]);
      acc[i] = _mm256_fmadd_pd(c, wi, acc[i]);
      acc[i + 4] = _mm256_fnmadd_pd(r, wi, acc[i + 4]);
      acc[i + 4] = _mm256_fmadd_pd(c, wr, acc[i + 4]);
    }
  }
  Packed rest{};
  if (nu < batch.size) scalar::gradient(tail(batch, nu), cr + nu, ci + nu, rest);
  for (int k = 0; k < 8; ++k) out[k] = hsum(acc[k]) + rest[k];
}

void hessian(const BatchView& batch, const double* a, const double* b, const double* g,
             Hessian8& out) {
  // upper triangle, 36 entries
  __m256d acc[36];
  for (auto& x : acc) x = _mm256_setzero_pd();
  std::size_t nu = 0;
  for (; nu + 4 <= batch.size; nu += 4) {
    const __m256d va = _mm256_loadu_pd(a + nu);
    const __m256d vb = _mm256_loadu_pd(b + nu);
    const __m256d vg = _mm256_loadu_pd(g + nu);
    __m256d u[8];
    __m256d v[8];
    for (int i = 0; i < 4; ++i) {
      const __m256d wr = _mm256_loadu_pd(batch.re[i] + nu);
      const __m256d wi = _mm256_loadu_pd(batch.im[i] + nu);
      u[i] = wr;
      u[i + 4] = _mm256_sub_pd(_mm256_setzero_pd(), wi);
      v[i] = wi;
      v[i + 4] = wr;
    }
    // a u_k u_l + b (u_k v_l + v_k u_l) + g v_k v_l
    //   = u_l (a u_k + b v_k) + v_l (b u_k + g v_k)
    int idx = 0;
    for (int k = 0; k < 8; ++k) {
      const __m256d p = _mm256_fmadd_pd(va, u[k], _mm256_mul_pd(vb, v[k]));
      const __m256d q = _mm256_fmadd_pd(vb, u[k], _mm256_mul_pd(vg, v[k]));
      for (int l = k; l < 8; ++l, ++idx) {
        acc[idx] = _mm256_fmadd_pd(u[l], p, acc[idx]);
        acc[idx] = _mm256_fmadd_pd(v[l], q, acc[idx]);
      }
    }
  }
  Hessian8 rest{};
  if (nu < batch.size) scalar::hessian(tail(batch, nu), a + nu, b + nu, g + nu, rest);
  int idx = 0;
  for (int k = 0; k < 8; ++k) {
    for (int l = k; l < 8; ++l, ++idx) {
      out[k * 8 + l] = hsum(acc[idx]) + rest[k * 8 + l];
      out[l * 8 + k] = out[k * 8 + l];
    }
  }
}

}  // namespace ququart::kernels::avx2
