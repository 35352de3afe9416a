#pragma once

#include "ququart/kernels.hpp"

namespace ququart::kernels {

namespace scalar {
void amplitudes(const BatchView& batch, const Packed& y, double* m_re, double* m_im);
void gradient(const BatchView& batch, const double* cr, const double* ci, Packed& out);
void hessian(const BatchView& batch, const double* a, const double* b, const double* g,
             Hessian8& out);
}  // namespace scalar

#if defined(QUQUART_HAVE_AVX2)
namespace avx2 {
void amplitudes(const BatchView& batch, const Packed& y, double* m_re, double* m_im);
void gradient(const BatchView& batch, const double* cr, const double* ci, Packed& out);
void hessian(const BatchView& batch, const double* a, const double* b, const double* g,
             Hessian8& out);
}  // namespace avx2
#endif

}  // namespace ququart::kernels
