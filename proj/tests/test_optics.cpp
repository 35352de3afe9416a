#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "ququart/dispersion.hpp"
#include "ququart/errors.hpp"
#include "ququart/optics.hpp"

using namespace ququart;

TEST(Dispersion, QuartzAtSodiumLine) {
  // handbook values for crystalline quartz at 589.3 nm
  const Indices n = quartz().indices(589.3);
  EXPECT_NEAR(n.n_o, 1.5443, 2e-4);
  EXPECT_NEAR(n.n_e, 1.5534, 2e-4);
}

TEST(Dispersion, RangeChecked) {
  EXPECT_THROW(quartz().indices(100.0), RangeError);
  EXPECT_THROW(quartz().indices(3000.0), RangeError);
  EXPECT_NO_THROW(quartz().indices(quartz().min_nm()));
  EXPECT_THROW(dispersion_model("calcite"), DomainError);
  EXPECT_EQ(&dispersion_model("quartz"), &quartz());
}

TEST(Optics, OpticalThicknessRegression) {
  // frozen value for the 0.315 mm plate used throughout the examples
  EXPECT_NEAR(optical_thickness(WavePlate{0.315, Angle{}}, 702.0), -12.650111228237, 1e-9);
  WavePlate crossed{0.315, Angle{}, &quartz(), AxisSense::crossed};
  EXPECT_NEAR(optical_thickness(crossed, 702.0), 12.650111228237, 1e-9);
}

TEST(Optics, PlateMatchesRotatedRetarder) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int n = 0; n < 100; ++n) {
    const double delta = u(rng);
    const double alpha = u(rng);
    const Matrix2c m = qubit_transform(plate_coeffs(delta, Angle::radians(alpha)));
    EXPECT_LT((m - oracle::retarder(delta, alpha)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Optics, QuquartTransformIsKronecker) {
  const WavePlate plate{0.988, Angle::degrees(20.0)};
  const Wavelengths lambdas{667.0, 635.0};
  const double d1 = optical_thickness(plate, lambdas.lambda1_nm);
  const double d2 = optical_thickness(plate, lambdas.lambda2_nm);
  const Matrix4c expected = oracle::kron(oracle::retarder(d1, oracle::deg(20.0)), oracle::retarder(d2, oracle::deg(20.0)));
  const Transform4 t = ququart_transform(plate, lambdas);
  EXPECT_LT((t.m - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(t.unitarity_error(), 1e-14);
}

TEST(Optics, PsiIIsImageOfVV) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> h(0.1, 4.0);
  std::uniform_real_distribution<double> a(0.0, 90.0);
  for (int n = 0; n < 20; ++n) {
    const WavePlate plate{h(rng), Angle::degrees(a(rng))};
    const Wavelengths lambdas{702.0, 605.0};
    const Matrix4c g = oracle::kron(oracle::retarder(optical_thickness(plate, 702.0), plate.orientation.rad()),
                                    oracle::retarder(optical_thickness(plate, 605.0), plate.orientation.rad()));
    const Vector4c expected = g.col(3);
    EXPECT_LT((prepare_psi_I(plate, lambdas).amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-13);
  }
  EXPECT_NEAR(fidelity(prepare_psi_I(WavePlate{0.315, Angle{}}, {702, 605}), states::vv()), 1.0, 1e-15);
}

TEST(Optics, PsiII) {
  const auto s = prepare_psi_II(0.6, std::numbers::pi / 3);
  EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(std::abs(s[3]), 0.8, 1e-15);
  EXPECT_NEAR(std::arg(s[3]), -std::numbers::pi / 3, 1e-15);
  EXPECT_EQ(s[1], Complex(0.0));
  EXPECT_THROW(prepare_psi_II(1.2, 0.0), DomainError);
  EXPECT_THROW(prepare_psi_II(-0.1, 0.0), DomainError);
}

TEST(Optics, DichroicSwapIsAPlate) {
  const Transform4 swap = dichroic_swap();
  Matrix4c perm = Matrix4c::Zero();
  perm(0, 2) = perm(2, 0) = perm(1, 3) = perm(3, 1) = 1.0;
  EXPECT_LT((swap.m - perm).cwiseAbs().maxCoeff(), 1e-15);
  const Angle diag = Angle::degrees(45.0);
  const Matrix4c plate = ququart_transform(plate_coeffs(std::numbers::pi / 2, diag), plate_coeffs(std::numbers::pi, diag)).m;
  const Complex phase = plate(0, 2);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-15);
  EXPECT_LT((plate - phase * perm).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Optics, BellStatesSwapUnderDichroicPlate) {
  const Transform4 t = dichroic_swap();
  EXPECT_NEAR(fidelity(apply(t, states::phi_plus()), states::psi_plus()), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(apply(t, states::phi_minus()), states::psi_minus()), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(apply(t, states::psi_plus()), states::phi_plus()), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(apply(t, states::psi_minus()), states::phi_minus()), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(apply(t, states::vv()), states::hv()), 1.0, 1e-15);
}

TEST(Optics, ApplyRejectsNonUnitary) {
  Transform4 t;
  t.m(0, 0) = 2.0;
  EXPECT_THROW(apply(t, states::hh()), ContractViolation);
}

TEST(Optics, TiltedThickness) {
  const WavePlate plate{3.716, Angle::degrees(45.0)};
  const double lambda = 702.0;
  EXPECT_DOUBLE_EQ(tilted_optical_thickness(plate, lambda, 0.0), optical_thickness(plate, lambda));
  // second order: d/d(sin^2) of n^2/sqrt(n^2 - s^2) is 1/(2n) at normal incidence
  const Indices n = quartz().indices(lambda);
  const double scale = std::numbers::pi * plate.thickness_mm * 1e6 / lambda;
  const double slope = scale * (1.0 / (2.0 * n.n_o) - 1.0 / (2.0 * n.n_e));
  const double s = std::sin(oracle::deg(0.5));
  EXPECT_NEAR(tilted_optical_thickness(plate, lambda, oracle::deg(0.5)) - optical_thickness(plate, lambda),
              slope * s * s, 1e-3 * std::abs(slope * s * s));
  // for quartz |delta| shrinks as the plate tilts
  double prev = std::abs(optical_thickness(plate, lambda));
  for (double deg = 1.0; deg <= 20.0; deg += 1.0) {
    const double d = std::abs(tilted_optical_thickness(plate, lambda, oracle::deg(deg)));
    EXPECT_LT(d, prev);
    prev = d;
  }
}
