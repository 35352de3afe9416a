#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library beyond its value types.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ququart/state.hpp"

namespace oracle {

using ququart::Complex;
using ququart::Matrix2c;
using ququart::Matrix4c;
using ququart::Vector4c;

inline constexpr Complex kI{0.0, 1.0};

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

/// Retarder as rotate / phase / rotate back:
///   R(-a) diag(e^{i d}, e^{-i d}) R(a),  R(a) = [[cos a, sin a], [-sin a, cos a]]
inline Matrix2c retarder(double delta, double alpha) {
  Matrix2c rot;
  rot << std::cos(alpha), std::sin(alpha), -std::sin(alpha), std::cos(alpha);
  Matrix2c phase = Matrix2c::Zero();
  phase(0, 0) = std::exp(kI * delta);
  phase(1, 1) = std::exp(-kI * delta);
  return rot.transpose() * phase * rot;
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Vector4c gaussian_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector4c v;
  for (int i = 0; i < 4; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

/// Overlap |<a|b>|^2 / (|a|^2 |b|^2).
inline double overlap(const Vector4c& a, const Vector4c& b) {
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

// Reference moment combinations, row by row, in terms of
// E = c1* c2, F = c1* c3, G = c1* c4, I = c2* c3, K = c2* c4, L = c3* c4.
inline std::array<double, 16> reference_moments(const Vector4c& c) {
  const double A = std::norm(c[0]), B = std::norm(c[1]), C = std::norm(c[2]), D = std::norm(c[3]);
  const Complex E = std::conj(c[0]) * c[1], F = std::conj(c[0]) * c[2], G = std::conj(c[0]) * c[3];
  const Complex I = std::conj(c[1]) * c[2], K = std::conj(c[1]) * c[3], L = std::conj(c[2]) * c[3];
  const double all = (A + B + C + D) / 16.0;
  return {
      A / 4,
      B / 4,
      D / 4,
      C / 4,
      (A + C + 2 * F.imag()) / 8,
      (B + D + 2 * K.imag()) / 8,
      (B + D - 2 * K.real()) / 8,
      (A + C - 2 * F.real()) / 8,
      all - (E.imag() + F.real() - G.imag() + I.imag() + K.real() + L.imag()) / 8,
      all - (F.real() - E.real() + G.real() + I.real() + K.real() - L.real()) / 8,
      all + (F.imag() + E.real() + G.imag() + I.imag() + L.real() + K.imag()) / 8,
      (A + B + 2 * E.real()) / 8,
      (C + D + 2 * L.real()) / 8,
      (C + D + 2 * L.imag()) / 8,
      (A + B + 2 * E.imag()) / 8,
      all + (F.imag() + E.imag() - G.real() + I.real() + L.imag() + K.imag()) / 8,
  };
}

// Reference process amplitudes as coefficient vectors on (c1..c4).
inline std::array<Vector4c, 16> reference_amplitudes() {
  const double h = 0.5;
  const double q = 1.0 / (2.0 * std::numbers::sqrt2);
  const double f = 0.25;
  auto v = [](Complex a, Complex b, Complex c, Complex d) {
    Vector4c w;
    w << a, b, c, d;
    return w;
  };
  return {
      v(h, 0, 0, 0),
      v(0, h, 0, 0),
      v(0, 0, 0, h),
      v(0, 0, h, 0),
      v(q, 0, -kI * q, 0),
      v(0, q, 0, -kI * q),
      v(0, q, 0, -q),
      v(q, 0, -q, 0),
      v(f, kI * f, -f, -kI * f),
      v(f, f, -f, -f),
      v(f, f, -kI * f, -kI * f),
      v(q, q, 0, 0),
      v(0, 0, q, q),
      v(0, 0, q, -kI * q),
      v(q, -kI * q, 0, 0),
      v(f, -kI * f, -kI * f, -f),
  };
}

}  // namespace oracle
