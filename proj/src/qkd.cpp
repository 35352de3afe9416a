#include "ququart/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ququart/errors.hpp"

namespace ququart {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

QubitState qubit(Complex h, Complex v) { return QubitState(h, v) * kInvSqrt2; }

QuquartState product(const QubitState& a, const QubitState& b) {
  return QuquartState::normalized(tensor(a, b));
}

QuquartState superpose(const QubitState& a1, const QubitState& a2, double sign, const QubitState& b1,
                       const QubitState& b2) {
  return QuquartState::normalized((tensor(a1, a2) + sign * tensor(b1, b2)) * kInvSqrt2);
}

void require_operational(MubIndex basis) {
  if (basis == MubIndex::IV || basis == MubIndex::V) {
    throw DomainError("basis " + std::string(mub_name(basis)) +
                      " needs a Bell-state analyzer; only bases I, II and III are supported");
  }
}

Transform4 both(double delta, Angle orientation) {
  const PlateCoeffs c = plate_coeffs(delta, orientation);
  return ququart_transform(c, c);
}

}  // namespace

std::string_view mub_name(MubIndex index) {
  switch (index) {
    case MubIndex::I:
      return "I";
    case MubIndex::II:
      return "II";
    case MubIndex::III:
      return "III";
    case MubIndex::IV:
      return "IV";
    case MubIndex::V:
      return "V";
  }
  return "?";
}

MubIndex parse_mub(std::string_view name) {
  for (MubIndex i : {MubIndex::I, MubIndex::II, MubIndex::III, MubIndex::IV, MubIndex::V}) {
    if (mub_name(i) == name) return i;
  }
  throw DomainError("unknown basis '" + std::string(name) + "', expected I, II, III, IV or V");
}

MubBasis mub_states(MubIndex index) {
  const QubitState h(1.0, 0.0);
  const QubitState v(0.0, 1.0);
  const QubitState d = qubit(1.0, 1.0);
  const QubitState dbar = qubit(1.0, -1.0);
  const QubitState r = qubit(1.0, Complex(0.0, 1.0));
  const QubitState l = qubit(1.0, Complex(0.0, -1.0));
  switch (index) {
    case MubIndex::I:
      return {index, {product(h, h), product(h, v), product(v, h), product(v, v)}};
    case MubIndex::II:
      return {index, {product(d, d), product(d, dbar), product(dbar, d), product(dbar, dbar)}};
    case MubIndex::III:
      return {index, {product(r, r), product(r, l), product(l, r), product(l, l)}};
    case MubIndex::IV:
      return {index,
              {superpose(r, h, 1.0, l, v), superpose(r, h, -1.0, l, v), superpose(l, h, 1.0, r, v),
               superpose(l, h, -1.0, r, v)}};
    case MubIndex::V:
      return {index,
              {superpose(h, r, 1.0, v, l), superpose(h, r, -1.0, v, l), superpose(h, l, 1.0, v, r),
               superpose(h, l, -1.0, v, r)}};
  }
  throw DomainError("unknown basis");
}

std::string_view detector_name(DetectorPair pair) {
  switch (pair) {
    case DetectorPair::D4D2:
      return "D4D2";
    case DetectorPair::D4D1:
      return "D4D1";
    case DetectorPair::D3D2:
      return "D3D2";
    case DetectorPair::D3D1:
      return "D3D1";
  }
  return "?";
}

std::uint8_t symbol_bits(int symbol) {
  if (symbol < 0 || symbol > 3) throw DomainError("symbol must be 0..3, got " + std::to_string(symbol));
  return static_cast<std::uint8_t>(3 - symbol);
}

Transform4 PreparationRecipe::transform() const {
  const Angle diagonal = Angle::degrees(45.0);
  Transform4 t = ququart_transform(plate_coeffs(delta1_rad, diagonal), plate_coeffs(delta2_rad, diagonal));
  switch (zero_order) {
    case ZeroOrderPlate::none:
      break;
    case ZeroOrderPlate::half_22_5:
      t.m = both(std::numbers::pi / 2.0, Angle::degrees(22.5)).m * t.m;
      break;
    case ZeroOrderPlate::quarter_45:
      t.m = both(std::numbers::pi / 4.0, Angle::degrees(45.0)).m * t.m;
      break;
  }
  return t;
}

Preparation alice_prepare(MubIndex basis, int symbol) {
  require_operational(basis);
  symbol_bits(symbol);
  const bool h1 = symbol < 2;
  const bool h2 = symbol % 2 == 0;
  PreparationRecipe recipe;
  // a half-wave flips V to H; a full wave leaves the other photon alone
  if (h1 || h2) {
    recipe.delta1_rad = h1 ? std::numbers::pi / 2.0 : std::numbers::pi;
    recipe.delta2_rad = h2 ? std::numbers::pi / 2.0 : std::numbers::pi;
  }
  if (basis == MubIndex::II) recipe.zero_order = ZeroOrderPlate::half_22_5;
  if (basis == MubIndex::III) recipe.zero_order = ZeroOrderPlate::quarter_45;
  return {mub_states(basis).states[static_cast<std::size_t>(symbol)], recipe};
}

Transform4 bob_analyzer(MubIndex basis) {
  require_operational(basis);
  switch (basis) {
    case MubIndex::II:
      return both(std::numbers::pi / 2.0, Angle::degrees(22.5));
    case MubIndex::III:
      return both(std::numbers::pi / 4.0, Angle::degrees(-45.0));
    default:
      return Transform4{};
  }
}

std::array<double, 4> outcome_probabilities(const QuquartState& state, MubIndex basis) {
  const Vector4c c = bob_analyzer(basis).m * state.amplitudes();
  std::array<double, 4> p{};
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += p[static_cast<std::size_t>(k)] = std::norm(c[k]);
  for (double& x : p) x /= total;
  return p;
}

DetectorOutcome bob_measure(const QuquartState& state, MubIndex basis, Rng& rng) {
  const auto p = outcome_probabilities(state, basis);
  std::discrete_distribution<int> dist(p.begin(), p.end());
  return {static_cast<DetectorPair>(dist(rng))};
}

DetectorOutcome bob_measure(const QuquartState& state, MubIndex basis, std::uint64_t seed) {
  Rng rng = substream(seed, 0);
  return bob_measure(state, basis, rng);
}

std::array<double, 4> diagonal_from_counts(const std::array<double, 4>& counts) {
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0)) throw DomainError("detector counts must be non-negative");
    total += c;
  }
  if (!(total > 0.0)) throw DomainError("detector counts are all zero");
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = counts[k] / total;
  return out;
}

double pair_optical_thickness(const WavePlate& first, const WavePlate& second, double lambda_nm,
                              double tilt_rad) {
  return tilted_optical_thickness(first, lambda_nm, tilt_rad) +
         tilted_optical_thickness(second, lambda_nm, tilt_rad);
}

std::vector<TiltPoint> tilt_scan(const WavePlate& first, const WavePlate& second, Wavelengths lambdas,
                                 double from_deg, double to_deg, double step_deg) {
  if (!(step_deg > 0.0) || !(to_deg >= from_deg)) {
    throw DomainError("tilt scan needs a positive step and to >= from");
  }
  const auto steps = static_cast<std::int64_t>(std::floor((to_deg - from_deg) / step_deg + 1e-9));
  std::vector<TiltPoint> curve;
  curve.reserve(static_cast<std::size_t>(steps + 1));
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double theta = from_deg + static_cast<double>(k) * step_deg;
    const double tilt = Angle::degrees(theta).rad();
    const double s1 = std::sin(pair_optical_thickness(first, second, lambdas.lambda1_nm, tilt));
    const double c2 = std::cos(pair_optical_thickness(first, second, lambdas.lambda2_nm, tilt));
    curve.push_back({theta, s1 * s1, s1 * s1 * c2 * c2});
  }
  return curve;
}

std::optional<double> first_coincidence_maximum(const std::vector<TiltPoint>& curve) {
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    if (curve[i].coincidence > curve[i - 1].coincidence && curve[i].coincidence >= curve[i + 1].coincidence) {
      return curve[i].theta_deg;
    }
  }
  return std::nullopt;
}

SessionResult run_session(const SessionConfig& config, bool keep_transcript, const ChannelHook& eve) {
  if (config.n <= 0) throw DomainError("session needs n > 0");
  if (config.bases.empty()) throw DomainError("session needs at least one basis");
  for (MubIndex b : config.bases) require_operational(b);
  for (double p : {config.noise.depolarize, config.noise.dark_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise probabilities must lie in [0, 1]");
  }

  const auto nb = static_cast<int>(config.bases.size());
  std::vector<MubBasis> bases;
  for (MubIndex b : config.bases) bases.push_back(mub_states(b));

  SessionResult out;
  out.sent = config.n;
  out.table.assign(config.bases.size(), {});
  std::uniform_int_distribution<int> pick_basis(0, nb - 1);
  std::uniform_int_distribution<int> pick_symbol(0, 3);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  for (std::int64_t round = 0; round < config.n; ++round) {
    Rng rng = substream(config.seed, static_cast<std::uint64_t>(round));
    const int a = pick_basis(rng);
    const int symbol = pick_symbol(rng);
    QuquartState state = bases[static_cast<std::size_t>(a)].states[static_cast<std::size_t>(symbol)];
    if (eve) state = eve(state, rng);
    if (config.noise.depolarize > 0.0 && uniform(rng) < config.noise.depolarize) {
      state = random_pure_state(rng());
    }
    const int b = pick_basis(rng);
    DetectorPair outcome = bob_measure(state, config.bases[static_cast<std::size_t>(b)], rng).pair;
    if (config.noise.dark_rate > 0.0 && uniform(rng) < config.noise.dark_rate) {
      outcome = static_cast<DetectorPair>(pick_symbol(rng));
    }
    const bool sifted = a == b;
    if (sifted) {
      ++out.sifted;
      const auto k = static_cast<int>(outcome);
      out.key_alice.push_back(symbol_bits(symbol));
      out.key_bob.push_back(symbol_bits(k));
      if (k != symbol) ++out.errors;
      ++out.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(symbol)][static_cast<std::size_t>(k)];
    }
    if (keep_transcript) {
      out.transcript.push_back({config.bases[static_cast<std::size_t>(a)], symbol,
                                config.bases[static_cast<std::size_t>(b)], outcome, sifted});
    }
  }
  out.qber = out.sifted > 0 ? static_cast<double>(out.errors) / static_cast<double>(out.sifted) : 0.0;
  return out;
}

}  // namespace ququart
