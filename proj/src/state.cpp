#include "ququart/state.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ququart/errors.hpp"
#include "ququart/rng.hpp"

namespace ququart {

QuquartState QuquartState::normalized(const Vector4c& amplitudes) {
  const double norm = amplitudes.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw DomainError("ququart amplitudes must be finite and not all zero");
  }
  return QuquartState(amplitudes / norm);
}

QuquartState QuquartState::normalized(Complex c1, Complex c2, Complex c3, Complex c4) {
  Vector4c c;
  c << c1, c2, c3, c4;
  return normalized(c);
}

QuquartState QuquartState::canonical_phase() const {
  for (int i = 0; i < 4; ++i) {
    const double mag = std::abs(c_[i]);
    if (mag > 1e-9) {
      return QuquartState(c_ * (std::conj(c_[i]) / mag));
    }
  }
  return *this;
}

QutritState QutritState::normalized(Complex c1, Complex c2, Complex c3) {
  const double norm = std::sqrt(std::norm(c1) + std::norm(c2) + std::norm(c3));
  if (!std::isfinite(norm) || norm == 0.0) {
    throw DomainError("qutrit amplitudes must be finite and not all zero");
  }
  return QutritState({c1 / norm, c2 / norm, c3 / norm});
}

std::array<double, 2> ReducedDensity2::eigenvalues() const {
  const double tr = (rho(0, 0) + rho(1, 1)).real();
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

Matrix2c CoherenceMatrix4::single_photon(Subsystem photon) const {
  Matrix2c m;
  if (photon == Subsystem::first) {
    // photon 1 index is the high bit: (0,1) -> H1, (2,3) -> V1
    m(0, 0) = k(0, 0) + k(1, 1);
    m(0, 1) = k(0, 2) + k(1, 3);
    m(1, 0) = k(2, 0) + k(3, 1);
    m(1, 1) = k(2, 2) + k(3, 3);
  } else {
    m(0, 0) = k(0, 0) + k(2, 2);
    m(0, 1) = k(0, 1) + k(2, 3);
    m(1, 0) = k(1, 0) + k(3, 2);
    m(1, 1) = k(1, 1) + k(3, 3);
  }
  return m;
}

ReducedDensity2 reduced_density(const QuquartState& state, Subsystem photon) {
  const auto& c = state.amplitudes();
  Matrix2c rho;
  if (photon == Subsystem::second) {
    rho(0, 0) = std::norm(c[0]) + std::norm(c[2]);
    rho(0, 1) = c[0] * std::conj(c[1]) + c[2] * std::conj(c[3]);
    rho(1, 0) = c[1] * std::conj(c[0]) + c[3] * std::conj(c[2]);
    rho(1, 1) = std::norm(c[1]) + std::norm(c[3]);
  } else {
    rho(0, 0) = std::norm(c[0]) + std::norm(c[1]);
    rho(0, 1) = c[0] * std::conj(c[2]) + c[1] * std::conj(c[3]);
    rho(1, 0) = c[2] * std::conj(c[0]) + c[3] * std::conj(c[1]);
    rho(1, 1) = std::norm(c[2]) + std::norm(c[3]);
  }
  return {rho};
}

double separability_defect(const QuquartState& state) {
  const auto& c = state.amplitudes();
  return std::norm(c[0] * c[3] - c[1] * c[2]);
}

Vector4c tensor(const QubitState& photon1, const QubitState& photon2) {
  Vector4c out;
  out << photon1[0] * photon2[0], photon1[0] * photon2[1], photon1[1] * photon2[0],
      photon1[1] * photon2[1];
  return out;
}

std::optional<std::pair<QubitState, QubitState>> factorize(const QuquartState& state) {
  if (separability_defect(state) >= kSeparabilityTolerance) return std::nullopt;
  const auto& c = state.amplitudes();
  // The amplitude matrix [[c1, c2], [c3, c4]] has rank one; its dominant row
  // fixes photon 2, projections onto it give photon 1.
  const QubitState row_h(c[0], c[1]);
  const QubitState row_v(c[2], c[3]);
  QubitState photon2 = row_h.squaredNorm() >= row_v.squaredNorm() ? row_h : row_v;
  photon2.normalize();
  QubitState photon1(photon2.dot(row_h), photon2.dot(row_v));
  photon1.normalize();
  return std::make_pair(photon1, photon2);
}

StokesVector stokes(const QuquartState& state) {
  const auto& c = state.amplitudes();
  const Complex z = std::conj(c[0]) * (c[1] + c[2]) + c[3] * (std::conj(c[1]) + std::conj(c[2]));
  return {2.0 * c.squaredNorm(), 2.0 * (std::norm(c[0]) - std::norm(c[3])), 2.0 * z.real(),
          2.0 * z.imag()};
}

CoherenceMatrix4 coherence_matrix(const QuquartState& state) {
  const auto& c = state.amplitudes();
  return {c.conjugate() * c.transpose()};
}

double polarization_degree_p4(const QuquartState& state) {
  const StokesVector s = stokes(state);
  return std::sqrt(s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3) / s.s0;
}

namespace {

struct PhotonStokes {
  double s1, s2, s3;
};

PhotonStokes photon_stokes(const Matrix2c& k2) {
  return {(k2(0, 0) - k2(1, 1)).real(), 2.0 * k2(0, 1).real(), 2.0 * k2(0, 1).imag()};
}

double det2(const Matrix2c& m) { return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real(); }

}  // namespace

double polarization_degree_p4_coherence(const QuquartState& state) {
  const CoherenceMatrix4 k4 = coherence_matrix(state);
  const Matrix2c k1 = k4.single_photon(Subsystem::first);
  const Matrix2c k2 = k4.single_photon(Subsystem::second);
  const double tr1 = k1.trace().real();
  const double tr2 = k2.trace().real();
  const PhotonStokes a = photon_stokes(k1);
  const PhotonStokes b = photon_stokes(k2);
  const double numerator = (tr1 * tr1 - 4.0 * det2(k1)) + (tr2 * tr2 - 4.0 * det2(k2)) +
                           2.0 * (a.s1 * b.s1 + a.s2 * b.s2 + a.s3 * b.s3);
  return std::sqrt(std::max(0.0, numerator)) / (tr1 + tr2);
}

double local_invariant(const QuquartState& state) {
  const CoherenceMatrix4 k4 = coherence_matrix(state);
  double sum = 0.0;
  for (const Subsystem photon : {Subsystem::first, Subsystem::second}) {
    const Matrix2c k2 = k4.single_photon(photon);
    const double tr = k2.trace().real();
    sum += tr * tr - 2.0 * det2(k2);
  }
  return sum;
}

double polarization_degree_p3(const QutritState& state) {
  const double diff = std::norm(state[0]) - std::norm(state[2]);
  const Complex cross = std::conj(state[0]) * state[1] + std::conj(state[1]) * state[2];
  return std::sqrt(diff * diff + 2.0 * std::norm(cross));
}

double fidelity(const QuquartState& a, const QuquartState& b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

QuquartState random_pure_state(std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  std::normal_distribution<double> gauss;
  Vector4c c;
  for (int i = 0; i < 4; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    c[i] = Complex(re, im);
  }
  return QuquartState::normalized(c);
}

namespace states {

namespace {
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}

QuquartState hh() { return QuquartState::normalized(1, 0, 0, 0); }
QuquartState hv() { return QuquartState::normalized(0, 1, 0, 0); }
QuquartState vh() { return QuquartState::normalized(0, 0, 1, 0); }
QuquartState vv() { return QuquartState::normalized(0, 0, 0, 1); }
QuquartState phi_plus() { return QuquartState::normalized(kInvSqrt2, 0, 0, kInvSqrt2); }
QuquartState phi_minus() { return QuquartState::normalized(kInvSqrt2, 0, 0, -kInvSqrt2); }
QuquartState psi_plus() { return QuquartState::normalized(0, kInvSqrt2, kInvSqrt2, 0); }
QuquartState psi_minus() { return QuquartState::normalized(0, kInvSqrt2, -kInvSqrt2, 0); }

}  // namespace states

}  // namespace ququart
