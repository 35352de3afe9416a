#pragma once

// Pure polarization states of a frequency non-degenerate photon pair.
//
// A ququart is written over the product basis
//   |H1H2>, |H1V2>, |V1H2>, |V1V2>
// with amplitudes (c1, c2, c3, c4). Photon 1 lives at wavelength lambda1,
// photon 2 at lambda2. Everything here is a value type and every function is
// pure.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>

#include <Eigen/Core>

namespace ququart {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kSeparabilityTolerance = 1e-10;

class QuquartState {
 public:
  /// Normalizes `amplitudes`; throws DomainError for a zero (or non-finite) vector.
  static QuquartState normalized(const Vector4c& amplitudes);
  static QuquartState normalized(Complex c1, Complex c2, Complex c3, Complex c4);

  const Vector4c& amplitudes() const { return c_; }
  Complex operator[](int i) const { return c_[i]; }

  /// Same ray with the first non-negligible amplitude made real and positive.
  /// Display/equality helper only; transforms never call it.
  QuquartState canonical_phase() const;

 private:
  explicit QuquartState(const Vector4c& c) : c_(c) {}
  Vector4c c_;
};

/// Single-photon (qubit) polarization state over (|H>, |V>).
using QubitState = Vector2c;

class QutritState {
 public:
  static QutritState normalized(Complex c1, Complex c2, Complex c3);
  Complex operator[](int i) const { return c_[i]; }

 private:
  explicit QutritState(const std::array<Complex, 3>& c) : c_(c) {}
  std::array<Complex, 3> c_;
};

enum class Subsystem { first, second };

struct ReducedDensity2 {
  Matrix2c rho;
  /// Closed-form eigenvalues (ascending) from trace and determinant.
  std::array<double, 2> eigenvalues() const;
};

struct StokesVector {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
};

/// Fourth-order moment matrix. Entry (i,j) is <c_i* c_j>, i.e. the layout
///   A E F G / E* B I K / F* I* C L / G* K* L* D
/// with E = c1* c2, F = c1* c3, G = c1* c4, I = c2* c3, K = c2* c4, L = c3* c4.
struct CoherenceMatrix4 {
  Matrix4c k;

  double A() const { return k(0, 0).real(); }
  double B() const { return k(1, 1).real(); }
  double C() const { return k(2, 2).real(); }
  double D() const { return k(3, 3).real(); }
  Complex E() const { return k(0, 1); }
  Complex F() const { return k(0, 2); }
  Complex G() const { return k(0, 3); }
  Complex I() const { return k(1, 2); }
  Complex K() const { return k(1, 3); }
  Complex L() const { return k(2, 3); }

  /// Single-photon coherence matrix (K2)_j with entries <a^dag a>, <a^dag b>, ...
  Matrix2c single_photon(Subsystem photon) const;
};

/// Reduced polarization state of one photon (`second` is the matrix obtained
/// by tracing out photon 1).
ReducedDensity2 reduced_density(const QuquartState& state, Subsystem photon);

/// |c1 c4 - c2 c3|^2, in [0, 1/4]; zero exactly for product states.
double separability_defect(const QuquartState& state);

/// Splits a product state into its two photon states (each normalized).
/// Returns nullopt when the defect exceeds kSeparabilityTolerance.
std::optional<std::pair<QubitState, QubitState>> factorize(const QuquartState& state);

Vector4c tensor(const QubitState& photon1, const QubitState& photon2);

StokesVector stokes(const QuquartState& state);
CoherenceMatrix4 coherence_matrix(const QuquartState& state);

/// sqrt(S1^2 + S2^2 + S3^2) / S0 from the Stokes vector.
double polarization_degree_p4(const QuquartState& state);

/// The same degree computed from the single-photon coherence matrices:
///   sqrt(sum_j (Tr^2 - 4 det)(K2)_j + 2 sum_k <S_k^(1)><S_k^(2)>) / sum_j Tr (K2)_j
double polarization_degree_p4_coherence(const QuquartState& state);

/// sum_j (Tr^2 (K2)_j - 2 det (K2)_j); unchanged by any local (per-photon)
/// unitary transform.
double local_invariant(const QuquartState& state);

double polarization_degree_p3(const QutritState& state);

/// |<a|b>|^2
double fidelity(const QuquartState& a, const QuquartState& b);

/// Haar-random pure state (normalized complex Gaussian vector).
QuquartState random_pure_state(std::uint64_t seed);

namespace states {

QuquartState hh();
QuquartState hv();
QuquartState vh();
QuquartState vv();
QuquartState phi_plus();
QuquartState phi_minus();
QuquartState psi_plus();
QuquartState psi_minus();

}  // namespace states

}  // namespace ququart
