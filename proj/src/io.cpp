#include "ququart/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include "ququart/errors.hpp"

namespace ququart::io {

namespace {

constexpr const char* kRecordsFormat = "ququart-records";
constexpr int kRecordsVersion = 1;

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ProtocolError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ProtocolError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ProtocolError("missing key '" + key + "' in " + where);
  return *it;
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) throw ProtocolError(what + " must be a number");
  return v.get<double>();
}

std::vector<double> reals(const Json& v, std::size_t n, const std::string& what) {
  if (!v.is_array() || v.size() != n) {
    throw ProtocolError(what + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

Json amplitudes_json(const QuquartState& state) {
  Json a = Json::array();
  for (int i = 0; i < 4; ++i) {
    a.push_back(state[i].real());
    a.push_back(state[i].imag());
  }
  return a;
}

Json plate_json(const WavePlate& plate) {
  return {{"thickness_mm", plate.thickness_mm},
          {"material", plate.material->name()},
          {"axis", plate.axis_sense == AxisSense::normal ? "normal" : "crossed"}};
}

WavePlate plate_from_json(const Json& doc, const std::string& where) {
  check_keys(doc, {"thickness_mm", "material", "axis"}, where);
  WavePlate plate;
  plate.thickness_mm = number(require(doc, "thickness_mm", where), where + ".thickness_mm");
  if (doc.contains("material")) {
    if (!doc["material"].is_string()) throw ProtocolError(where + ".material must be a string");
    plate.material = &dispersion_model(doc["material"].get<std::string>());
  }
  if (doc.contains("axis")) {
    const Json& axis = doc["axis"];
    if (axis == "normal") {
      plate.axis_sense = AxisSense::normal;
    } else if (axis == "crossed") {
      plate.axis_sense = AxisSense::crossed;
    } else {
      throw ProtocolError(where + ".axis must be \"normal\" or \"crossed\"");
    }
  }
  return plate;
}

MeasurementRecord record_from_json(const Json& doc, Protocol protocol, std::size_t nu) {
  const std::string where = "record " + std::to_string(nu);
  MeasurementRecord r;
  if (protocol == Protocol::p1) {
    check_keys(doc, {"chi1_deg", "theta1_deg", "chi2_deg", "theta2_deg", "counts", "exposure_s"}, where);
    r.setting = Protocol1Setting{Angle::degrees(number(require(doc, "chi1_deg", where), where)),
                                 Angle::degrees(number(require(doc, "theta1_deg", where), where)),
                                 Angle::degrees(number(require(doc, "chi2_deg", where), where)),
                                 Angle::degrees(number(require(doc, "theta2_deg", where), where))};
  } else {
    check_keys(doc, {"theta_deg", "phi_deg", "plate1", "plate2", "counts", "exposure_s"}, where);
    r.setting = Protocol2Setting{Angle::degrees(number(require(doc, "theta_deg", where), where)),
                                 Angle::degrees(number(require(doc, "phi_deg", where), where)),
                                 plate_from_json(require(doc, "plate1", where), where + ".plate1"),
                                 plate_from_json(require(doc, "plate2", where), where + ".plate2")};
  }
  r.counts = number(require(doc, "counts", where), where + ".counts");
  r.exposure_s = number(require(doc, "exposure_s", where), where + ".exposure_s");
  if (!(r.counts >= 0.0) || !std::isfinite(r.counts)) throw ProtocolError(where + " has negative counts");
  if (!(r.exposure_s > 0.0) || !std::isfinite(r.exposure_s)) {
    throw ProtocolError(where + " has non-positive exposure");
  }
  return r;
}

}  // namespace

Json state_to_json(const QuquartState& state) { return {{"amplitudes", amplitudes_json(state)}}; }

QuquartState state_from_reals(const std::vector<double>& v) {
  if (v.size() != 8) throw DomainError("a state needs 8 reals, got " + std::to_string(v.size()));
  return QuquartState::normalized(Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]),
                                  Complex(v[6], v[7]));
}

QuquartState state_from_json(const Json& doc) {
  if (doc.is_array()) return state_from_reals(reals(doc, 8, "state"));
  check_keys(doc, {"amplitudes"}, "state");
  return state_from_reals(reals(require(doc, "amplitudes", "state"), 8, "state.amplitudes"));
}

Json records_to_json(const RecordSet& records) {
  Json list = Json::array();
  for (const auto& r : records.records) {
    Json item;
    if (const auto* s = std::get_if<Protocol1Setting>(&r.setting)) {
      item = {{"chi1_deg", s->chi1.deg()},
              {"theta1_deg", s->theta1.deg()},
              {"chi2_deg", s->chi2.deg()},
              {"theta2_deg", s->theta2.deg()}};
    } else {
      const auto& p = std::get<Protocol2Setting>(r.setting);
      item = {{"theta_deg", p.theta.deg()},
              {"phi_deg", p.phi.deg()},
              {"plate1", plate_json(p.plate1)},
              {"plate2", plate_json(p.plate2)}};
    }
    item["counts"] = r.counts;
    item["exposure_s"] = r.exposure_s;
    list.push_back(std::move(item));
  }
  return {{"format", kRecordsFormat},
          {"version", kRecordsVersion},
          {"protocol", protocol_name(records.protocol)},
          {"lambdas_nm", {records.lambdas.lambda1_nm, records.lambdas.lambda2_nm}},
          {"records", std::move(list)}};
}

RecordSet records_from_json(const Json& doc) {
  check_keys(doc, {"format", "version", "protocol", "lambdas_nm", "records"}, "record file");
  if (require(doc, "format", "record file") != kRecordsFormat) {
    throw ProtocolError("not a record file: format must be \"" + std::string(kRecordsFormat) + "\"");
  }
  if (require(doc, "version", "record file") != kRecordsVersion) {
    throw ProtocolError("unsupported record file version");
  }
  const Json& protocol = require(doc, "protocol", "record file");
  if (!protocol.is_string()) throw ProtocolError("record file protocol must be \"P1\" or \"P2\"");
  RecordSet out;
  out.protocol = parse_protocol(protocol.get<std::string>());
  const auto lambdas = reals(require(doc, "lambdas_nm", "record file"), 2, "lambdas_nm");
  out.lambdas = {lambdas[0], lambdas[1]};
  const Json& list = require(doc, "records", "record file");
  if (!list.is_array()) throw ProtocolError("records must be an array");
  for (std::size_t nu = 0; nu < list.size(); ++nu) {
    out.records.push_back(record_from_json(list[nu], out.protocol, nu));
  }
  return out;
}

Json report_to_json(const ReconstructionResult& result) {
  Json doc = {{"estimate", amplitudes_json(result.estimate)},
              {"scale", result.scale},
              {"log_likelihood", result.log_likelihood},
              {"residual", result.residual},
              {"iterations", result.iterations},
              {"converged", result.converged},
              {"best_start", result.best_start}};
  if (result.fidelity) doc["fidelity"] = *result.fidelity;
  doc["warnings"] = result.warnings;
  return doc;
}

ReconstructionResult report_from_json(const Json& doc) {
  const std::string where = "reconstruction report";
  check_keys(doc, {"estimate", "scale", "log_likelihood", "residual", "iterations", "converged", "best_start",
                   "fidelity", "warnings"},
             where);
  ReconstructionResult r;
  r.estimate = state_from_reals(reals(require(doc, "estimate", where), 8, "estimate"));
  r.scale = number(require(doc, "scale", where), "scale");
  r.log_likelihood = number(require(doc, "log_likelihood", where), "log_likelihood");
  r.residual = number(require(doc, "residual", where), "residual");
  r.iterations = require(doc, "iterations", where).get<int>();
  r.converged = require(doc, "converged", where).get<bool>();
  if (doc.contains("best_start")) r.best_start = doc["best_start"].get<int>();
  if (doc.contains("fidelity")) r.fidelity = number(doc["fidelity"], "fidelity");
  if (doc.contains("warnings")) r.warnings = doc["warnings"].get<std::vector<std::string>>();
  return r;
}

Json session_config_to_json(const SessionConfig& config) {
  Json bases = Json::array();
  for (MubIndex b : config.bases) bases.push_back(mub_name(b));
  return {{"n", config.n},
          {"bases", std::move(bases)},
          {"noise", {{"p", config.noise.depolarize}, {"dark_rate", config.noise.dark_rate}}},
          {"seed", config.seed}};
}

SessionConfig session_config_from_json(const Json& doc) {
  check_keys(doc, {"n", "bases", "noise", "seed"}, "session config");
  SessionConfig config;
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer()) throw ProtocolError("session n must be an integer");
    config.n = doc["n"].get<std::int64_t>();
  }
  if (doc.contains("bases")) {
    if (!doc["bases"].is_array()) throw ProtocolError("session bases must be an array of names");
    config.bases.clear();
    for (const auto& b : doc["bases"]) {
      if (!b.is_string()) throw ProtocolError("session bases must be an array of names");
      config.bases.push_back(parse_mub(b.get<std::string>()));
    }
  }
  if (doc.contains("noise")) {
    const Json& noise = doc["noise"];
    check_keys(noise, {"p", "dark_rate"}, "session noise");
    if (noise.contains("p")) config.noise.depolarize = number(noise["p"], "noise.p");
    if (noise.contains("dark_rate")) config.noise.dark_rate = number(noise["dark_rate"], "noise.dark_rate");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ProtocolError("session seed must be a non-negative integer");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  return config;
}

Json session_result_to_json(const SessionConfig& config, const SessionResult& result) {
  Json table = Json::object();
  for (std::size_t slot = 0; slot < config.bases.size(); ++slot) {
    Json rows = Json::array();
    for (int s = 0; s < 4; ++s) {
      Json row = Json::object();
      for (int k = 0; k < 4; ++k) {
        row[std::string(detector_name(static_cast<DetectorPair>(k)))] =
            result.table[slot][static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
      }
      rows.push_back(std::move(row));
    }
    table[std::string(mub_name(config.bases[slot]))] = std::move(rows);
  }
  return {{"config", session_config_to_json(config)},
          {"sent", result.sent},
          {"sifted", result.sifted},
          {"errors", result.errors},
          {"qber", result.qber},
          {"outcomes", std::move(table)}};
}

void write_tilt_csv(std::ostream& out, const std::vector<TiltPoint>& curve) {
  out << "theta_deg,singles,coincidence\n";
  out.precision(17);
  for (const auto& p : curve) out << p.theta_deg << ',' << p.singles << ',' << p.coincidence << '\n';
}

std::vector<TiltPoint> read_tilt_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "theta_deg,singles,coincidence") {
    throw ProtocolError("tilt curve must start with the header theta_deg,singles,coincidence");
  }
  std::vector<TiltPoint> curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    TiltPoint p;
    char c1 = 0;
    char c2 = 0;
    if (!(row >> p.theta_deg >> c1 >> p.singles >> c2 >> p.coincidence) || c1 != ',' || c2 != ',') {
      throw ProtocolError("malformed tilt curve row: " + line);
    }
    curve.push_back(p);
  }
  return curve;
}

void write_transcript_csv(std::ostream& out, const std::vector<RoundRecord>& transcript) {
  out << "round,alice_basis,symbol,bob_basis,outcome,sifted\n";
  for (std::size_t r = 0; r < transcript.size(); ++r) {
    const auto& t = transcript[r];
    out << r << ',' << mub_name(t.alice_basis) << ',' << t.symbol << ',' << mub_name(t.bob_basis) << ','
        << detector_name(t.outcome) << ',' << (t.sifted ? 1 : 0) << '\n';
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace ququart::io
