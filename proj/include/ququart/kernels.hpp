#pragma once

// Batched inner loops of the likelihood: every measurement nu is described by a
// complex 4-vector w_nu with process amplitude M_nu = w_nu . y. Vectors are
// stored structure-of-arrays so one SIMD lane handles one measurement.
//
// With y = a + i b packed as x = (a, b) in R^8:
//   Re M = u . x,  u = (Re w, -Im w)
//   Im M = v . x,  v = (Im w,  Re w)
//
// A scalar reference implementation is always built; an AVX2/FMA variant is
// compiled separately and chosen at runtime when the CPU supports it.

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "ququart/state.hpp"

namespace ququart::kernels {

struct BatchView {
  std::size_t size = 0;
  std::array<const double*, 4> re{};
  std::array<const double*, 4> im{};
};

using Packed = std::array<double, 8>;
using Hessian8 = std::array<double, 64>;

struct KernelTable {
  std::string_view name;
  /// m_re[nu] + i m_im[nu] = w_nu . y
  void (*amplitudes)(const BatchView& batch, const Packed& y, double* m_re, double* m_im);
  /// out = sum_nu cr[nu] u_nu + ci[nu] v_nu
  void (*gradient)(const BatchView& batch, const double* cr, const double* ci, Packed& out);
  /// out = sum_nu a u u^T + b (u v^T + v u^T) + g v v^T  (row-major 8x8)
  void (*hessian)(const BatchView& batch, const double* a, const double* b, const double* g,
                  Hessian8& out);
};

enum class Isa { scalar, avx2 };

bool isa_available(Isa isa);

/// Kernels for a specific ISA; throws DomainError if not available.
const KernelTable& table(Isa isa);

/// Best available ISA unless QUQUART_SIMD=scalar is set in the environment.
const KernelTable& active();

class MeasurementBatch {
 public:
  MeasurementBatch() = default;
  explicit MeasurementBatch(const std::vector<Vector4c>& rows);

  std::size_t size() const { return size_; }
  BatchView view() const;
  Vector4c row(std::size_t nu) const;

 private:
  std::size_t size_ = 0;
  std::array<std::vector<double>, 4> re_;
  std::array<std::vector<double>, 4> im_;
};

Packed pack(const Vector4c& y);
Vector4c unpack(const Packed& x);

}  // namespace ququart::kernels
