// Reference kernels. The AVX2 variants are checked against these.

#include "kernels_impl.hpp"

namespace ququart::kernels::scalar {

void amplitudes(const BatchView& batch, const Packed& y, double* m_re, double* m_im) {
  for (std::size_t nu = 0; nu < batch.size; ++nu) {
    double re = 0.0;
    double im = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double wr = batch.re[i][nu];
      const double wi = batch.im[i][nu];
      re += wr * y[i] - wi * y[i + 4];
      im += wi * y[i] + wr * y[i + 4];
    }
    m_re[nu] = re;
    m_im[nu] = im;
  }
}

void gradient(const BatchView& batch, const double* cr, const double* ci, Packed& out) {
  out.fill(0.0);
  for (std::size_t nu = 0; nu < batch.size; ++nu) {
    for (int i = 0; i < 4; ++i) {
      const double wr = batch.re[i][nu];
      const double wi = batch.im[i][nu];
      out[i] += cr[nu] * wr + ci[nu] * wi;
      out[i + 4] += -cr[nu] * wi + ci[nu] * wr;
    }
  }
}

void hessian(const BatchView& batch, const double* a, const double* b, const double* g,
             Hessian8& out) {
  out.fill(0.0);
  for (std::size_t nu = 0; nu < batch.size; ++nu) {
    double u[8];
    double v[8];
    for (int i = 0; i < 4; ++i) {
      u[i] = batch.re[i][nu];
      u[i + 4] = -batch.im[i][nu];
      v[i] = batch.im[i][nu];
      v[i + 4] = batch.re[i][nu];
    }
    for (int k = 0; k < 8; ++k) {
      for (int l = k; l < 8; ++l) {
        out[k * 8 + l] += a[nu] * u[k] * u[l] + b[nu] * (u[k] * v[l] + v[k] * u[l]) +
                          g[nu] * v[k] * v[l];
      }
    }
  }
  for (int k = 0; k < 8; ++k) {
    for (int l = 0; l < k; ++l) out[k * 8 + l] = out[l * 8 + k];
  }
}

}  // namespace ququart::kernels::scalar
