#pragma once

#include <numbers>

namespace ququart {

// Plate orientation. Keeps the degree value it was built from so that
// record files written in degrees read back bit-for-bit; arithmetic uses rad().
class Angle {
 public:
  constexpr Angle() = default;

  static constexpr Angle degrees(double deg) { return Angle(deg); }
  static constexpr Angle radians(double rad) {
    return Angle(rad * (180.0 / std::numbers::pi));
  }

  constexpr double deg() const { return deg_; }
  constexpr double rad() const { return deg_ * (std::numbers::pi / 180.0); }

  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  constexpr explicit Angle(double deg) : deg_(deg) {}
  double deg_ = 0.0;
};

}  // namespace ququart
