#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "ququart/errors.hpp"

namespace ququart::kernels {

namespace {

constexpr KernelTable kScalar{"scalar", &scalar::amplitudes, &scalar::gradient, &scalar::hessian};

#if defined(QUQUART_HAVE_AVX2)
constexpr KernelTable kAvx2{"avx2", &avx2::amplitudes, &avx2::gradient, &avx2::hessian};
#endif

const KernelTable& select() {
  const char* env = std::getenv("QUQUART_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return kScalar;
  if (isa_available(Isa::avx2)) return table(Isa::avx2);
  return kScalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(QUQUART_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) throw DomainError("requested SIMD kernels are not available on this CPU");
#if defined(QUQUART_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

MeasurementBatch::MeasurementBatch(const std::vector<Vector4c>& rows) : size_(rows.size()) {
  for (int i = 0; i < 4; ++i) {
    re_[i].resize(size_);
    im_[i].resize(size_);
  }
  for (std::size_t nu = 0; nu < size_; ++nu) {
    for (int i = 0; i < 4; ++i) {
      re_[i][nu] = rows[nu][i].real();
      im_[i][nu] = rows[nu][i].imag();
    }
  }
}

BatchView MeasurementBatch::view() const {
  BatchView v;
  v.size = size_;
  for (int i = 0; i < 4; ++i) {
    v.re[i] = re_[i].data();
    v.im[i] = im_[i].data();
  }
  return v;
}

Vector4c MeasurementBatch::row(std::size_t nu) const {
  Vector4c w;
  for (int i = 0; i < 4; ++i) w[i] = Complex(re_[i][nu], im_[i][nu]);
  return w;
}

Packed pack(const Vector4c& y) {
  Packed x;
  for (int i = 0; i < 4; ++i) {
    x[i] = y[i].real();
    x[i + 4] = y[i].imag();
  }
  return x;
}

Vector4c unpack(const Packed& x) {
  Vector4c y;
  for (int i = 0; i < 4; ++i) y[i] = Complex(x[i], x[i + 4]);
  return y;
}

}  // namespace ququart::kernels
