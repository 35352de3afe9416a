#pragma once

// Key distribution with ququarts over mutually unbiased bases.
//
// Single-photon states over (H, V):
//   D = (1, 1)/sqrt2, Dbar = (1, -1)/sqrt2, R = (1, i)/sqrt2, L = (1, -i)/sqrt2
// Basis I is the product basis, II and III the D/Dbar and R/L products, IV
// and V the entangled quadruples. Within a basis the symbols follow the
// listing order; symbol k carries the two bits (photon 1 is H, photon 2 is H),
// so HH is 0b11 and VV is 0b00.
//
// Bob rotates bases II and III back onto HH..VV with zero-order plates and
// reads one of four detector pairs:
//   HH -> D4D2, HV -> D4D1, VH -> D3D2, VV -> D3D1

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ququart/optics.hpp"
#include "ququart/rng.hpp"
#include "ququart/state.hpp"

namespace ququart {

enum class MubIndex { I, II, III, IV, V };

std::string_view mub_name(MubIndex index);
/// "I".."V"; throws DomainError otherwise.
MubIndex parse_mub(std::string_view name);

struct MubBasis {
  MubIndex index;
  std::array<QuquartState, 4> states;
};

MubBasis mub_states(MubIndex index);

enum class DetectorPair { D4D2, D4D1, D3D2, D3D1 };

std::string_view detector_name(DetectorPair pair);

struct DetectorOutcome {
  DetectorPair pair;
};

/// Two bits (photon 1 is H, photon 2 is H) of symbol 0..3.
std::uint8_t symbol_bits(int symbol);

enum class ZeroOrderPlate {
  none,
  half_22_5,    // ZP1: half-wave at 22.5 degrees on both photons
  quarter_45,   // ZP2: quarter-wave at 45 degrees on both photons
};

/// How Alice makes a state from |V1V2>: a dichroic plate at 45 degrees with
/// optical thicknesses (delta1, delta2) at the two wavelengths, then an
/// optional zero-order plate acting identically on both photons.
struct PreparationRecipe {
  double delta1_rad = 0.0;
  double delta2_rad = 0.0;
  ZeroOrderPlate zero_order = ZeroOrderPlate::none;

  Transform4 transform() const;
};

struct Preparation {
  QuquartState state;
  PreparationRecipe recipe;
};

/// Throws DomainError for bases IV and V or a symbol outside 0..3.
Preparation alice_prepare(MubIndex basis, int symbol);

/// Zero-order plates Bob inserts for a basis guess: nothing for I, a
/// half-wave at 22.5 degrees for II, a quarter-wave at -45 degrees for III.
/// Throws DomainError for IV and V.
Transform4 bob_analyzer(MubIndex basis);

/// Outcome probabilities in detector order D4D2, D4D1, D3D2, D3D1.
std::array<double, 4> outcome_probabilities(const QuquartState& state, MubIndex basis);

DetectorOutcome bob_measure(const QuquartState& state, MubIndex basis, Rng& rng);
DetectorOutcome bob_measure(const QuquartState& state, MubIndex basis, std::uint64_t seed);

/// Empirical diagonal of a detector-count histogram (counts over their total).
/// Throws DomainError for negative counts or an empty histogram.
std::array<double, 4> diagonal_from_counts(const std::array<double, 4>& counts);

struct TiltPoint {
  double theta_deg = 0.0;
  double singles = 0.0;
  double coincidence = 0.0;
};

/// Effective optical thickness of a stacked plate pair, both tilted by theta.
double pair_optical_thickness(const WavePlate& first, const WavePlate& second, double lambda_nm,
                              double tilt_rad);

/// singles = sin^2 delta1, coincidence = sin^2 delta1 cos^2 delta2 for tilts
/// from..to (inclusive, degrees) in steps of `step_deg`.
std::vector<TiltPoint> tilt_scan(const WavePlate& first, const WavePlate& second, Wavelengths lambdas,
                                 double from_deg, double to_deg, double step_deg);

/// Tilt of the first local coincidence maximum, or nullopt when none.
std::optional<double> first_coincidence_maximum(const std::vector<TiltPoint>& curve);

struct ChannelNoise {
  double depolarize = 0.0;  // probability of replacing the state by a random one
  double dark_rate = 0.0;   // probability of a uniformly random detector pair
};

/// Replaces the state in flight (an intercept-resend attack, say).
using ChannelHook = std::function<QuquartState(const QuquartState& sent, Rng& rng)>;

struct SessionConfig {
  std::int64_t n = 10000;
  std::vector<MubIndex> bases{MubIndex::I, MubIndex::II, MubIndex::III};
  ChannelNoise noise;
  std::uint64_t seed = 0;
};

struct RoundRecord {
  MubIndex alice_basis;
  int symbol;
  MubIndex bob_basis;
  DetectorPair outcome;
  bool sifted;
};

struct SessionResult {
  std::int64_t sent = 0;
  std::int64_t sifted = 0;
  std::int64_t errors = 0;
  std::vector<std::uint8_t> key_alice;
  std::vector<std::uint8_t> key_bob;
  double qber = 0.0;
  /// outcome counts for matched bases: [basis slot][sent symbol][detector pair]
  std::vector<std::array<std::array<std::int64_t, 4>, 4>> table;
  std::vector<RoundRecord> transcript;
};

/// Round r uses substream (seed, r). Throws DomainError for n <= 0, an empty
/// or unsupported basis set, or noise parameters outside [0, 1].
SessionResult run_session(const SessionConfig& config, bool keep_transcript = false,
                          const ChannelHook& eve = {});

}  // namespace ququart
