#include "ququart/tomography.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ququart/errors.hpp"

namespace ququart {

namespace {

constexpr double kQuarter = std::numbers::pi / 4.0;
constexpr double kHalf = std::numbers::pi / 2.0;

// Off-diagonal pairs in moment-vector order: E, F, G, I, K, L.
constexpr std::array<std::pair<int, int>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Vector4c arm_product(const ArmCoeffs& p1, const ArmCoeffs& p2) {
  return Vector4c(p1.a * p2.a, p1.a * p2.b, p1.b * p2.a, p1.b * p2.b) * 0.5;
}

Protocol1Setting p1(double chi1, double theta1, double chi2, double theta2) {
  return {Angle::degrees(chi1), Angle::degrees(theta1), Angle::degrees(chi2), Angle::degrees(theta2)};
}

}  // namespace

std::string_view protocol_name(Protocol protocol) {
  return protocol == Protocol::p1 ? "P1" : "P2";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "P1") return Protocol::p1;
  if (name == "P2") return Protocol::p2;
  throw ProtocolError("unknown protocol '" + std::string(name) + "', expected P1 or P2");
}

ArmCoeffs arm_coeffs(Angle chi, Angle theta, double quarter_delta, double half_delta) {
  const PlateCoeffs q = plate_coeffs(quarter_delta, chi);
  const PlateCoeffs h = plate_coeffs(half_delta, theta);
  return {-h.r * std::conj(q.t) - h.t * q.r, -h.r * std::conj(q.r) + h.t * q.t};
}

const std::array<Protocol1Setting, 16>& protocol1_settings() {
  static const std::array<Protocol1Setting, 16> settings{
      p1(0, 45, 0, -45),       p1(0, 45, 0, 0),         p1(0, 0, 0, 0),
      p1(0, 0, 0, -45),        p1(0, 22.5, 0, -45),     p1(0, 22.5, 0, 0),
      p1(45, 22.5, 0, 0),      p1(45, 22.5, 0, -45),    p1(45, 22.5, 0, -22.5),
      p1(45, 22.5, -45, -22.5), p1(0, 22.5, -45, -22.5), p1(0, 45, -45, -22.5),
      p1(0, 0, -45, -22.5),    p1(0, 0, -90, -22.5),    p1(0, 45, -90, -22.5),
      p1(0, 22.5, -90, -22.5),
  };
  return settings;
}

Vector4c protocol1_vector(const Protocol1Setting& setting) {
  return arm_product(arm_coeffs(setting.chi1, setting.theta1), arm_coeffs(setting.chi2, setting.theta2));
}

Complex protocol1_amplitude(const Protocol1Setting& setting, const QuquartState& state) {
  return protocol1_vector(setting).transpose() * state.amplitudes();
}

Vector4c protocol2_vector(const Protocol2Setting& setting, Wavelengths lambdas) {
  WavePlate first = setting.plate1;
  first.orientation = setting.theta;
  WavePlate second = setting.plate2;
  second.orientation = setting.phi;
  const Matrix4c g = ququart_transform(first, lambdas).m * ququart_transform(second, lambdas).m;
  return g.row(3).transpose();
}

double protocol2_rate(const Protocol2Setting& setting, const QuquartState& state, Wavelengths lambdas) {
  const Complex m = protocol2_vector(setting, lambdas).transpose() * state.amplitudes();
  return std::norm(m);
}

std::vector<Protocol2Setting> protocol2_grid(const std::vector<Angle>& thetas, int phi_count,
                                             const WavePlate& plate1, const WavePlate& plate2) {
  if (phi_count < 4) {
    throw DomainError("protocol 2 grid needs at least 4 phi values, got " + std::to_string(phi_count));
  }
  if (thetas.empty()) throw DomainError("protocol 2 grid needs at least one theta value");
  std::vector<Protocol2Setting> grid;
  grid.reserve(thetas.size() * static_cast<std::size_t>(phi_count));
  for (const Angle theta : thetas) {
    for (int l = 0; l < phi_count; ++l) {
      grid.push_back({theta, Angle::degrees(180.0 * l / phi_count), plate1, plate2});
    }
  }
  return grid;
}

std::vector<Angle> default_protocol2_thetas() {
  return {Angle::degrees(90), Angle::degrees(105), Angle::degrees(120), Angle::degrees(135)};
}

WavePlate default_protocol2_plate1() { return WavePlate{0.821, Angle{}}; }
WavePlate default_protocol2_plate2() { return WavePlate{0.715, Angle{}}; }

double nonselective_rate(const Protocol1Setting& setting, const QuquartState& state,
                         Wavelengths lambdas) {
  const Vector4c& c = state.amplitudes();
  const Vector4c direct = protocol1_vector(setting);
  // photon 1 in arm 2, photon 2 in arm 1
  const double s12 = lambdas.lambda2_nm / lambdas.lambda1_nm;
  const double s21 = lambdas.lambda1_nm / lambdas.lambda2_nm;
  const Vector4c swapped = arm_product(arm_coeffs(setting.chi2, setting.theta2, kQuarter * s12, kHalf * s12),
                                       arm_coeffs(setting.chi1, setting.theta1, kQuarter * s21, kHalf * s21));
  const Complex ma = direct.transpose() * c;
  const Complex mb = swapped.transpose() * c;
  return 2.0 * (std::norm(ma) + std::norm(mb));
}

Vector4c measurement_vector(const MeasurementRecord& record, Wavelengths lambdas) {
  if (const auto* s = std::get_if<Protocol1Setting>(&record.setting)) return protocol1_vector(*s);
  return protocol2_vector(std::get<Protocol2Setting>(record.setting), lambdas);
}

std::vector<Vector4c> measurement_vectors(const RecordSet& records) {
  std::vector<Vector4c> rows;
  rows.reserve(records.records.size());
  for (const auto& r : records.records) rows.push_back(measurement_vector(r, records.lambdas));
  return rows;
}

double predicted_rate(const MeasurementRecord& record, const QuquartState& state, Wavelengths lambdas) {
  const Complex m = measurement_vector(record, lambdas).transpose() * state.amplitudes();
  return std::norm(m);
}

std::array<double, 16> moment_row(const Vector4c& w) {
  // |w.c|^2 = sum_ij w_i w_j* conj(K_ij)
  std::array<double, 16> row{};
  for (int i = 0; i < 4; ++i) row[i] = std::norm(w[i]);
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto [i, j] = kPairs[p];
    const Complex prod = w[i] * std::conj(w[j]);
    row[4 + 2 * p] = 2.0 * prod.real();
    row[5 + 2 * p] = 2.0 * prod.imag();
  }
  return row;
}

std::array<double, 16> moment_vector(const CoherenceMatrix4& k4) {
  std::array<double, 16> m{};
  for (int i = 0; i < 4; ++i) m[i] = k4.k(i, i).real();
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto [i, j] = kPairs[p];
    m[4 + 2 * p] = k4.k(i, j).real();
    m[5 + 2 * p] = k4.k(i, j).imag();
  }
  return m;
}

CoherenceMatrix4 coherence_from_moments(const std::array<double, 16>& moments) {
  CoherenceMatrix4 k4;
  k4.k.setZero();
  for (int i = 0; i < 4; ++i) k4.k(i, i) = moments[i];
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto [i, j] = kPairs[p];
    k4.k(i, j) = Complex(moments[4 + 2 * p], moments[5 + 2 * p]);
    k4.k(j, i) = std::conj(k4.k(i, j));
  }
  return k4;
}

double simulate_counts(double rate, double brightness, double exposure_s, Rng& rng) {
  const double mean = rate * brightness * exposure_s;
  if (!std::isfinite(mean) || mean < 0.0) {
    throw DomainError("expected count must be finite and non-negative, got " + std::to_string(mean));
  }
  if (mean == 0.0) return 0.0;
  std::poisson_distribution<long long> dist(mean);
  return static_cast<double>(dist(rng));
}

double simulate_counts(double rate, double brightness, double exposure_s, std::uint64_t seed) {
  Rng rng = substream(seed, 0);
  return simulate_counts(rate, brightness, exposure_s, rng);
}

RecordSet run_experiment(const QuquartState& state, Protocol protocol,
                         const std::vector<Protocol2Setting>& grid, Wavelengths lambdas,
                         const ExperimentOptions& options) {
  if (options.brightness < 0.0 || options.exposure_s <= 0.0 || options.dark_rate < 0.0) {
    throw DomainError("brightness and dark rate must be non-negative and exposure positive");
  }
  if (options.visibility < 0.0 || options.visibility > 1.0) {
    throw DomainError("visibility must lie in [0, 1], got " + std::to_string(options.visibility));
  }
  RecordSet out;
  out.protocol = protocol;
  out.lambdas = lambdas;
  if (protocol == Protocol::p1) {
    for (const auto& s : protocol1_settings()) out.records.push_back({s, 0.0, options.exposure_s});
  } else {
    for (const auto& s : grid) out.records.push_back({s, 0.0, options.exposure_s});
  }
  for (std::size_t nu = 0; nu < out.records.size(); ++nu) {
    auto& record = out.records[nu];
    const Vector4c w = measurement_vector(record, lambdas);
    const Complex m = w.transpose() * state.amplitudes();
    const double rate = options.visibility * std::norm(m) + (1.0 - options.visibility) * w.squaredNorm() / 4.0;
    const double mean = (rate * options.brightness + options.dark_rate) * options.exposure_s;
    if (options.noiseless) {
      record.counts = mean;
    } else {
      Rng rng = substream(options.seed, nu);
      record.counts = simulate_counts(mean, 1.0, 1.0, rng);
    }
  }
  return out;
}

RecordSet run_protocol1(const QuquartState& state, Wavelengths lambdas, const ExperimentOptions& options) {
  return run_experiment(state, Protocol::p1, {}, lambdas, options);
}

RecordSet run_protocol2(const QuquartState& state, const std::vector<Protocol2Setting>& grid,
                        Wavelengths lambdas, const ExperimentOptions& options) {
  if (grid.empty()) throw DomainError("protocol 2 needs a non-empty setting grid");
  return run_experiment(state, Protocol::p2, grid, lambdas, options);
}

}  // namespace ququart
