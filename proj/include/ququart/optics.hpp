#pragma once

// Retardation plates acting on the two photons of a ququart.
//
// A plate with optical thickness delta and axis at alpha from the vertical maps
// the mode operators of each photon as
//   a' = t a + r b,   b' = -r* a + t* b,
//   t = cos delta + i sin delta cos 2 alpha,   r = i sin delta sin 2 alpha,
// with delta = pi (n_o - n_e) h / lambda evaluated separately at each photon's
// wavelength. The 4x4 ququart transform is the Kronecker product of the two
// per-photon 2x2 matrices.

#include <vector>

#include "ququart/angle.hpp"
#include "ququart/dispersion.hpp"
#include "ququart/state.hpp"

namespace ququart {

/// `crossed` flips the sign of n_o - n_e: a plate whose axis is orthogonal to
/// its partner's in a stacked pair.
enum class AxisSense { normal, crossed };

struct Wavelengths {
  double lambda1_nm;
  double lambda2_nm;
};

struct WavePlate {
  double thickness_mm = 0.0;
  Angle orientation;
  const DispersionModel* material = &quartz();
  AxisSense axis_sense = AxisSense::normal;
};

struct PlateCoeffs {
  Complex t{1.0, 0.0};
  Complex r{0.0, 0.0};
};

struct Transform4 {
  Matrix4c m = Matrix4c::Identity();

  /// max |(G^dag G - I)_ij|
  double unitarity_error() const;
};

/// Radians. Throws RangeError when lambda is outside the dispersion model.
double optical_thickness(const WavePlate& plate, double lambda_nm);

/// Optical thickness of a plate tilted by `tilt_rad` about an axis in its face:
///   (pi h / lambda) [n_o^2 / sqrt(n_o^2 - sin^2) - n_e^2 / sqrt(n_e^2 - sin^2)],
/// in the same sign convention as optical_thickness (equal to it at zero tilt).
double tilted_optical_thickness(const WavePlate& plate, double lambda_nm, double tilt_rad);

PlateCoeffs plate_coeffs(double delta_rad, Angle orientation);

/// [[t, r], [-r*, t*]]
Matrix2c qubit_transform(const PlateCoeffs& coeffs);

Transform4 ququart_transform(const PlateCoeffs& photon1, const PlateCoeffs& photon2);
Transform4 ququart_transform(const WavePlate& plate, Wavelengths lambdas);
Transform4 local_transform(const Matrix2c& photon1, const Matrix2c& photon2);

/// The permutation that swaps photon 1 between H and V: half-wave at lambda1,
/// full-wave at lambda2, axis at 45 degrees (global phase dropped).
Transform4 dichroic_swap();

/// Throws ContractViolation if the transform is not unitary within 1e-9.
QuquartState apply(const Transform4& transform, const QuquartState& state);

/// Image of |V1V2> under a single plate:
///   (r1 r2, r1 t2*, t1* r2, t1* t2*)
QuquartState prepare_psi_I(const WavePlate& plate, Wavelengths lambdas);

/// (|c1|, 0, 0, |c4| e^{-i phi14}) with |c4| = sqrt(1 - |c1|^2).
/// Throws DomainError unless amp_ratio lies in [0, 1].
QuquartState prepare_psi_II(double amp_ratio, double phi14_rad);

}  // namespace ququart
