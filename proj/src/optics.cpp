#include "ququart/optics.hpp"

#include <cmath>
#include <string>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "ququart/errors.hpp"

namespace ququart {

namespace {

constexpr double kUnitarityTolerance = 1e-9;

double axis_sign(AxisSense sense) { return sense == AxisSense::crossed ? -1.0 : 1.0; }

// h in mm, lambda in nm
double phase_scale(double thickness_mm, double lambda_nm) {
  return std::numbers::pi * thickness_mm * 1e6 / lambda_nm;
}

}  // namespace

double Transform4::unitarity_error() const {
  return (m.adjoint() * m - Matrix4c::Identity()).cwiseAbs().maxCoeff();
}

double optical_thickness(const WavePlate& plate, double lambda_nm) {
  const Indices n = plate.material->indices(lambda_nm);
  return axis_sign(plate.axis_sense) * (n.n_o - n.n_e) * phase_scale(plate.thickness_mm, lambda_nm);
}

double tilted_optical_thickness(const WavePlate& plate, double lambda_nm, double tilt_rad) {
  const Indices n = plate.material->indices(lambda_nm);
  const double s2 = std::sin(tilt_rad) * std::sin(tilt_rad);
  const double o = n.n_o * n.n_o / std::sqrt(n.n_o * n.n_o - s2);
  const double e = n.n_e * n.n_e / std::sqrt(n.n_e * n.n_e - s2);
  return axis_sign(plate.axis_sense) * (o - e) * phase_scale(plate.thickness_mm, lambda_nm);
}

PlateCoeffs plate_coeffs(double delta_rad, Angle orientation) {
  const double two_alpha = 2.0 * orientation.rad();
  const double s = std::sin(delta_rad);
  return {Complex(std::cos(delta_rad), s * std::cos(two_alpha)),
          Complex(0.0, s * std::sin(two_alpha))};
}

Matrix2c qubit_transform(const PlateCoeffs& coeffs) {
  Matrix2c g;
  g << coeffs.t, coeffs.r, -std::conj(coeffs.r), std::conj(coeffs.t);
  return g;
}

Transform4 local_transform(const Matrix2c& photon1, const Matrix2c& photon2) {
  return {Eigen::kroneckerProduct(photon1, photon2).eval()};
}

Transform4 ququart_transform(const PlateCoeffs& photon1, const PlateCoeffs& photon2) {
  return local_transform(qubit_transform(photon1), qubit_transform(photon2));
}

Transform4 ququart_transform(const WavePlate& plate, Wavelengths lambdas) {
  return ququart_transform(plate_coeffs(optical_thickness(plate, lambdas.lambda1_nm), plate.orientation),
                           plate_coeffs(optical_thickness(plate, lambdas.lambda2_nm), plate.orientation));
}

Transform4 dichroic_swap() {
  Transform4 g;
  g.m.setZero();
  g.m(0, 2) = g.m(1, 3) = g.m(2, 0) = g.m(3, 1) = 1.0;
  return g;
}

QuquartState apply(const Transform4& transform, const QuquartState& state) {
  const double err = transform.unitarity_error();
  if (!(err <= kUnitarityTolerance)) {
    throw ContractViolation("transform is not unitary (|G^dag G - I| = " + std::to_string(err) + ")");
  }
  return QuquartState::normalized(transform.m * state.amplitudes());
}

QuquartState prepare_psi_I(const WavePlate& plate, Wavelengths lambdas) {
  const PlateCoeffs p1 = plate_coeffs(optical_thickness(plate, lambdas.lambda1_nm), plate.orientation);
  const PlateCoeffs p2 = plate_coeffs(optical_thickness(plate, lambdas.lambda2_nm), plate.orientation);
  return QuquartState::normalized(p1.r * p2.r, p1.r * std::conj(p2.t), std::conj(p1.t) * p2.r,
                                  std::conj(p1.t) * std::conj(p2.t));
}

QuquartState prepare_psi_II(double amp_ratio, double phi14_rad) {
  if (!(amp_ratio >= 0.0 && amp_ratio <= 1.0)) {
    throw DomainError("amplitude ratio |c1| must lie in [0, 1]");
  }
  const double c4 = std::sqrt(1.0 - amp_ratio * amp_ratio);
  return QuquartState::normalized(amp_ratio, 0.0, 0.0, std::polar(c4, -phi14_rad));
}

}  // namespace ququart
