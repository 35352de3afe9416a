#pragma once

// Measurement protocols and the forward model for coincidence counts.
//
// Every setting reduces to a complex 4-vector w with process amplitude
// M = w . c and coincidence probability |M|^2, so one representation feeds both
// simulation and estimation.
//
// Protocol 1 (frequency selective): the pair is split at a non-polarizing
// beamsplitter; photon 1 passes a quarter-wave plate at chi1 and a half-wave
// plate at theta1 before a vertical analyzer, photon 2 likewise with
// (chi2, theta2). Ideal zero-order plates, so the amplitudes are wavelength
// independent.
//
// Protocol 2: two thick quartz plates at (theta_k, phi_l) act on the whole
// ququart, followed by vertical analyzers on both photons.

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "ququart/angle.hpp"
#include "ququart/optics.hpp"
#include "ququart/rng.hpp"
#include "ququart/state.hpp"

namespace ququart {

enum class Protocol { p1, p2 };

std::string_view protocol_name(Protocol protocol);
/// "P1" / "P2"; throws ProtocolError otherwise.
Protocol parse_protocol(std::string_view name);

struct Protocol1Setting {
  Angle chi1;    // quarter-wave, photon 1 arm
  Angle theta1;  // half-wave, photon 1 arm
  Angle chi2;
  Angle theta2;

  friend bool operator==(const Protocol1Setting&, const Protocol1Setting&) = default;
};

struct Protocol2Setting {
  Angle theta;  // orientation of plate 1
  Angle phi;    // orientation of plate 2
  WavePlate plate1;
  WavePlate plate2;
};

struct MeasurementRecord {
  std::variant<Protocol1Setting, Protocol2Setting> setting;
  /// Integer-valued for Poisson draws; exact expectations in noiseless mode.
  double counts = 0.0;
  double exposure_s = 1.0;
};

struct RecordSet {
  Protocol protocol = Protocol::p1;
  Wavelengths lambdas{702.0, 605.0};
  std::vector<MeasurementRecord> records;
};

/// Coefficients (a, b) of the vertical-analyzer channel behind a quarter-wave
/// plate at chi and a half-wave plate at theta:
///   a = -r_h t_q* - t_h r_q,   b = -r_h r_q* + t_h t_q
/// The retardances default to the ideal pi/4 and pi/2.
struct ArmCoeffs {
  Complex a;
  Complex b;
};
ArmCoeffs arm_coeffs(Angle chi, Angle theta, double quarter_delta = 0.7853981633974483,
                     double half_delta = 1.5707963267948966);

/// The 16 rows of the Protocol 1 table, in order, with (chi_s, theta_s) as
/// the photon 1 arm and (chi_i, theta_i) as the photon 2 arm.
const std::array<Protocol1Setting, 16>& protocol1_settings();

/// w with M = w . c:  w = (a1 a2, a1 b2, b1 a2, b1 b2) / 2
Vector4c protocol1_vector(const Protocol1Setting& setting);
Complex protocol1_amplitude(const Protocol1Setting& setting, const QuquartState& state);

/// Fourth row of G(plate1, theta) G(plate2, phi).
Vector4c protocol2_vector(const Protocol2Setting& setting, Wavelengths lambdas);
double protocol2_rate(const Protocol2Setting& setting, const QuquartState& state, Wavelengths lambdas);

/// Cartesian grid thetas x {180 k / phi_count deg, k < phi_count}.
/// Throws DomainError when phi_count < 4.
std::vector<Protocol2Setting> protocol2_grid(const std::vector<Angle>& thetas, int phi_count,
                                             const WavePlate& plate1, const WavePlate& plate2);
std::vector<Angle> default_protocol2_thetas();
WavePlate default_protocol2_plate1();
WavePlate default_protocol2_plate2();

/// Coincidence probability when neither arm filters by wavelength, conditioned
/// on the beamsplitter sending the photons to different arms. Both routings
/// contribute; a photon in the other arm sees that arm's zero-order plates
/// with retardance scaled by lambda_arm / lambda_photon.
double nonselective_rate(const Protocol1Setting& setting, const QuquartState& state,
                         Wavelengths lambdas);

Vector4c measurement_vector(const MeasurementRecord& record, Wavelengths lambdas);
std::vector<Vector4c> measurement_vectors(const RecordSet& records);
double predicted_rate(const MeasurementRecord& record, const QuquartState& state, Wavelengths lambdas);

/// Rate as a linear form on the moment vector
///   (A, B, C, D, Re E, Im E, Re F, Im F, Re G, Im G, Re I, Im I, Re K, Im K, Re L, Im L).
std::array<double, 16> moment_row(const Vector4c& w);
std::array<double, 16> moment_vector(const CoherenceMatrix4& k4);
CoherenceMatrix4 coherence_from_moments(const std::array<double, 16>& moments);

/// Poisson draw with mean rate * brightness * exposure.
double simulate_counts(double rate, double brightness, double exposure_s, Rng& rng);
double simulate_counts(double rate, double brightness, double exposure_s, std::uint64_t seed);

struct ExperimentOptions {
  double brightness = 1e4;  // coincidences per second at unit rate
  double exposure_s = 1.0;
  double dark_rate = 0.0;   // accidental coincidences per second, every setting
  /// Mixes each predicted rate with the maximally mixed one:
  ///   V |w.c|^2 + (1 - V) |w|^2 / 4
  double visibility = 1.0;
  bool noiseless = false;   // exact expected counts instead of Poisson draws
  std::uint64_t seed = 0;
};

/// One record per setting; record nu draws from substream (seed, nu).
RecordSet run_experiment(const QuquartState& state, Protocol protocol,
                         const std::vector<Protocol2Setting>& grid, Wavelengths lambdas,
                         const ExperimentOptions& options);
RecordSet run_protocol1(const QuquartState& state, Wavelengths lambdas, const ExperimentOptions& options);
RecordSet run_protocol2(const QuquartState& state, const std::vector<Protocol2Setting>& grid,
                        Wavelengths lambdas, const ExperimentOptions& options);

}  // namespace ququart
