// Command-line front end.
//
//   ququart [--seed N] [--config run.json] [--output FILE] <command> ...
//
// Exit codes: 0 success, 1 usage error, 2 data or contract violation.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ququart/errors.hpp"
#include "ququart/io.hpp"
#include "ququart/optics.hpp"
#include "ququart/qkd.hpp"
#include "ququart/reconstruct.hpp"
#include "ququart/state.hpp"
#include "ququart/tomography.hpp"

namespace {

using namespace ququart;
using io::Json;

constexpr int kUsage = 1;
constexpr int kData = 2;

// RunConfig reader: nested objects name subcommands, leaves name options by
// their long flag. Keys that match no option are rejected by the parser.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("config values must be strings, numbers, booleans or arrays of them");
  }

  static void flatten(const Json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& item : obj.items()) {
      if (item.value().is_object()) {
        auto next = parents;
        next.push_back(item.key());
        flatten(item.value(), next, out);
        continue;
      }
      CLI::ConfigItem ci;
      ci.parents = parents;
      ci.name = item.key();
      if (item.value().is_array()) {
        for (const auto& v : item.value()) ci.inputs.push_back(scalar(v));
      } else {
        ci.inputs.push_back(scalar(item.value()));
      }
      out.push_back(std::move(ci));
    }
  }
};

struct Global {
  std::uint64_t seed = 0;
  std::string output;
};

void emit(const Global& g, const std::string& text, const std::string& summary) {
  if (g.output.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(g.output, text);
    if (!summary.empty()) std::cout << summary;
  }
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

Json matrix_json(const Matrix4c& m, bool imag) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

Wavelengths lambdas_from(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }

// --- state ---------------------------------------------------------------

struct StateArgs {
  std::vector<double> amps;
  bool normalize = false;
  std::string state_file;
  bool psi1 = false;
  bool psi2 = false;
  double thickness_mm = 0.0;
  double alpha_deg = 0.0;
  std::vector<double> lambdas{702.0, 605.0};
  double ratio = 1.0;
  double phi_deg = 0.0;
  bool dichroic = false;
};

QuquartState state_from_args(const std::vector<double>& amps, const std::string& file, bool normalize) {
  if (!file.empty()) return io::state_from_json(io::read_json_file(file));
  if (amps.empty()) throw CLI::ValidationError("state", "give --amps or --state-file");
  if (!normalize) {
    double norm2 = 0.0;
    for (double a : amps) norm2 += a * a;
    if (norm2 > 0.0 && std::abs(norm2 - 1.0) > 1e-9) {
      throw DomainError("amplitudes have squared norm " + std::to_string(norm2) + "; pass --normalize");
    }
  }
  return io::state_from_reals(amps);
}

void cmd_state(const Global& g, const StateArgs& a) {
  QuquartState s = states::vv();
  if (a.psi1) {
    s = prepare_psi_I(WavePlate{a.thickness_mm, Angle::degrees(a.alpha_deg)}, lambdas_from(a.lambdas));
  } else if (a.psi2) {
    s = prepare_psi_II(a.ratio, Angle::degrees(a.phi_deg).rad());
  } else {
    s = state_from_args(a.amps, a.state_file, a.normalize);
  }
  if (a.dichroic) s = apply(dichroic_swap(), s);
  const StokesVector st = stokes(s);
  const CoherenceMatrix4 k4 = coherence_matrix(s);
  Json doc = io::state_to_json(s);
  doc["stokes"] = {st.s0, st.s1, st.s2, st.s3};
  doc["p4"] = polarization_degree_p4(s);
  doc["separability_defect"] = separability_defect(s);
  doc["product"] = factorize(s).has_value();
  doc["k4"] = {{"re", matrix_json(k4.k, false)}, {"im", matrix_json(k4.k, true)}};
  emit(g, io::dump(doc), "defect " + fixed(separability_defect(s), 6) + "\n");
}

// --- tomo ----------------------------------------------------------------

struct SimulateArgs {
  std::string protocol = "P1";
  std::vector<double> amps;
  std::string state_file;
  std::vector<double> lambdas;
  double brightness = 1000.0;
  double exposure_s = 1.0;
  double dark_rate = 0.0;
  double visibility = 1.0;
  bool noiseless = false;
  std::vector<double> theta_deg{90.0, 105.0, 120.0, 135.0};
  int phi_count = 36;
  double plate1_mm = 0.821;
  double plate2_mm = 0.715;
};

void cmd_simulate(const Global& g, const SimulateArgs& a) {
  const Protocol protocol = parse_protocol(a.protocol);
  const QuquartState s = state_from_args(a.amps, a.state_file, true);
  std::vector<double> lambdas = a.lambdas;
  if (lambdas.empty()) lambdas = protocol == Protocol::p1 ? std::vector<double>{702.0, 605.0}
                                                          : std::vector<double>{667.0, 635.0};
  ExperimentOptions opt;
  opt.brightness = a.brightness;
  opt.exposure_s = a.exposure_s;
  opt.dark_rate = a.dark_rate;
  opt.visibility = a.visibility;
  opt.noiseless = a.noiseless;
  opt.seed = g.seed;
  RecordSet records;
  if (protocol == Protocol::p1) {
    records = run_protocol1(s, lambdas_from(lambdas), opt);
  } else {
    std::vector<Angle> thetas;
    for (double t : a.theta_deg) thetas.push_back(Angle::degrees(t));
    WavePlate p1 = default_protocol2_plate1();
    WavePlate p2 = default_protocol2_plate2();
    p1.thickness_mm = a.plate1_mm;
    p2.thickness_mm = a.plate2_mm;
    records = run_protocol2(s, protocol2_grid(thetas, a.phi_count, p1, p2), lambdas_from(lambdas), opt);
  }
  emit(g, io::dump(io::records_to_json(records)),
       std::to_string(records.records.size()) + " records\n");
}

struct ReconstructArgs {
  std::string records;
  std::vector<double> reference_amps;
  std::string reference_file;
  int multistarts = 8;
  double tolerance = 1e-8;
  int max_iterations = 500;
  int threads = 0;
};

void cmd_reconstruct(const Global& g, const ReconstructArgs& a) {
  const RecordSet records = io::records_from_json(io::read_json_file(a.records));
  std::optional<QuquartState> reference;
  if (!a.reference_amps.empty() || !a.reference_file.empty()) {
    reference = state_from_args(a.reference_amps, a.reference_file, true);
  }
  MlOptions opt;
  opt.multistarts = a.multistarts;
  opt.tolerance = a.tolerance;
  opt.max_iterations = a.max_iterations;
  opt.threads = a.threads;
  opt.seed = g.seed;
  const ReconstructionResult r = reconstruct(records, opt, reference);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::string summary = "residual " + fixed(r.residual, 6);
  if (r.fidelity) summary += " fidelity " + fixed(*r.fidelity, 9);
  emit(g, io::dump(io::report_to_json(r)), summary + "\n");
}

// --- scan ----------------------------------------------------------------

struct ScanArgs {
  double thickness1_mm = 3.716;
  double thickness2_mm = 0.315;
  std::vector<double> lambdas{702.0, 605.0};
  double from_deg = 0.0;
  double to_deg = 15.0;
  double step_deg = 0.05;
};

void cmd_scan(const Global& g, const ScanArgs& a) {
  const WavePlate first{a.thickness1_mm, Angle::degrees(45.0)};
  const WavePlate second{a.thickness2_mm, Angle::degrees(45.0), &quartz(), AxisSense::crossed};
  const auto curve = tilt_scan(first, second, lambdas_from(a.lambdas), a.from_deg, a.to_deg, a.step_deg);
  std::ostringstream out;
  io::write_tilt_csv(out, curve);
  const auto peak = first_coincidence_maximum(curve);
  emit(g, out.str(),
       std::to_string(curve.size()) + " points" + (peak ? ", first maximum at " + fixed(*peak, 2) + " deg" : "") +
           "\n");
}

// --- qkd -----------------------------------------------------------------

struct QkdArgs {
  std::int64_t n = 10000;
  std::vector<std::string> bases{"I", "II", "III"};
  double depolarize = 0.0;
  double dark_rate = 0.0;
  std::string session_file;
  std::string transcript;
};

void cmd_qkd(const Global& g, const QkdArgs& a, bool seed_given) {
  SessionConfig config;
  if (!a.session_file.empty()) {
    config = io::session_config_from_json(io::read_json_file(a.session_file));
    if (seed_given) config.seed = g.seed;
  } else {
    config.n = a.n;
    config.bases.clear();
    for (const auto& b : a.bases) config.bases.push_back(parse_mub(b));
    config.noise = {a.depolarize, a.dark_rate};
    config.seed = g.seed;
  }
  const SessionResult r = run_session(config, !a.transcript.empty());
  if (!a.transcript.empty()) {
    std::ostringstream t;
    io::write_transcript_csv(t, r.transcript);
    io::write_text_file(a.transcript, t.str());
  }
  std::ostringstream summary;
  summary << "sent " << r.sent << " sifted " << r.sifted << " QBER " << fixed(r.qber, 4) << "\n";
  for (std::size_t slot = 0; slot < config.bases.size(); ++slot) {
    summary << "basis " << mub_name(config.bases[slot]) << "\n";
    for (int s = 0; s < 4; ++s) {
      summary << "  symbol " << s;
      for (int k = 0; k < 4; ++k) {
        summary << ' ' << detector_name(static_cast<DetectorPair>(k)) << '='
                << r.table[slot][static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
      }
      summary << "\n";
    }
  }
  if (g.output.empty()) {
    std::cout << summary.str();
  } else {
    io::write_text_file(g.output, io::dump(io::session_result_to_json(config, r)));
    std::cout << summary.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biphoton polarization ququarts: states, tomography, tilt scans and key distribution"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON run configuration; keys are long option names, objects are subcommands");

  Global g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--output", g.output, "Write the result document to this file");

  auto* state = app.add_subcommand("state", "Prepare a state and print its invariants");
  StateArgs sa;
  state->add_option("--amps", sa.amps, "Re c1,Im c1,...,Re c4,Im c4")->delimiter(',')->expected(8);
  state->add_flag("--normalize", sa.normalize, "Normalize --amps");
  state->add_option("--state-file", sa.state_file, "State JSON file");
  state->add_flag("--psi1", sa.psi1, "Image of |V1V2> under one quartz plate");
  state->add_flag("--psi2", sa.psi2, "Type II state from amplitude ratio and phase");
  state->add_option("--thickness-mm", sa.thickness_mm, "Plate thickness")->check(CLI::NonNegativeNumber);
  state->add_option("--alpha-deg", sa.alpha_deg, "Plate orientation");
  state->add_option("--lambdas", sa.lambdas, "Photon wavelengths in nm")->delimiter(',')->expected(2);
  state->add_option("--ratio", sa.ratio, "|c1| for --psi2");
  state->add_option("--phi-deg", sa.phi_deg, "Phase for --psi2");
  state->add_flag("--dichroic", sa.dichroic, "Apply the dichroic swap afterwards");

  auto* tomo = app.add_subcommand("tomo", "Simulate or reconstruct tomography records");
  tomo->require_subcommand(1);
  auto* sim = tomo->add_subcommand("simulate", "Write a record file");
  SimulateArgs sim_a;
  sim->add_option("--protocol", sim_a.protocol, "P1 or P2")->check(CLI::IsMember({"P1", "P2"}))->capture_default_str();
  sim->add_option("--amps", sim_a.amps, "State amplitudes, 8 reals")->delimiter(',')->expected(8);
  sim->add_option("--state-file", sim_a.state_file, "State JSON file");
  sim->add_option("--lambdas", sim_a.lambdas, "Photon wavelengths in nm")->delimiter(',')->expected(2);
  sim->add_option("--brightness", sim_a.brightness, "Coincidences per second at unit rate")->capture_default_str();
  sim->add_option("--exposure", sim_a.exposure_s, "Seconds per setting")->capture_default_str();
  sim->add_option("--dark-rate", sim_a.dark_rate, "Accidental coincidences per second")->capture_default_str();
  sim->add_option("--visibility", sim_a.visibility, "Mixing with the maximally mixed state")->capture_default_str();
  sim->add_flag("--noiseless", sim_a.noiseless, "Exact expected counts");
  sim->add_option("--theta-deg", sim_a.theta_deg, "P2 plate 1 orientations")->delimiter(',');
  sim->add_option("--phi-count", sim_a.phi_count, "P2 plate 2 orientations over 180 deg")->capture_default_str();
  sim->add_option("--plate1-mm", sim_a.plate1_mm, "P2 plate 1 thickness")->capture_default_str();
  sim->add_option("--plate2-mm", sim_a.plate2_mm, "P2 plate 2 thickness")->capture_default_str();

  auto* rec = tomo->add_subcommand("reconstruct", "Estimate the state behind a record file");
  ReconstructArgs rec_a;
  rec->add_option("records,--records", rec_a.records, "Record file")->required();
  rec->add_option("--reference-amps", rec_a.reference_amps, "Reference state, 8 reals")->delimiter(',')->expected(8);
  rec->add_option("--reference-file", rec_a.reference_file, "Reference state JSON file");
  rec->add_option("--multistarts", rec_a.multistarts, "Random restarts")->check(CLI::NonNegativeNumber)->capture_default_str();
  rec->add_option("--tolerance", rec_a.tolerance, "Relative gradient tolerance")->capture_default_str();
  rec->add_option("--max-iterations", rec_a.max_iterations, "Newton iterations per start")->capture_default_str();
  rec->add_option("--threads", rec_a.threads, "Worker threads, 0 for all cores")->capture_default_str();

  auto* scan = app.add_subcommand("scan", "Tilt scan of a crossed dichroic plate pair (CSV)");
  ScanArgs sc;
  scan->add_option("--thickness1-mm", sc.thickness1_mm, "First plate")->capture_default_str();
  scan->add_option("--thickness2-mm", sc.thickness2_mm, "Second, crossed plate")->capture_default_str();
  scan->add_option("--lambdas", sc.lambdas, "Photon wavelengths in nm")->delimiter(',')->expected(2);
  scan->add_option("--from-deg", sc.from_deg, "First tilt")->capture_default_str();
  scan->add_option("--to-deg", sc.to_deg, "Last tilt")->capture_default_str();
  scan->add_option("--step-deg", sc.step_deg, "Tilt step")->check(CLI::PositiveNumber)->capture_default_str();

  auto* qkd = app.add_subcommand("qkd", "Simulate a key distribution session");
  QkdArgs qa;
  qkd->add_option("--n", qa.n, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
  qkd->add_option("--bases", qa.bases, "Subset of I,II,III")
      ->delimiter(',')
      ->check(CLI::IsMember({"I", "II", "III"}));
  qkd->add_option("--depolarize", qa.depolarize, "Depolarizing probability")->check(CLI::Range(0.0, 1.0));
  qkd->add_option("--dark-rate", qa.dark_rate, "Random-outcome probability")->check(CLI::Range(0.0, 1.0));
  qkd->add_option("--session-file", qa.session_file, "Session config JSON");
  qkd->add_option("--transcript", qa.transcript, "Per-round CSV transcript");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ConfigError& e) {
    std::string what = e.what();
    const std::string ini = "INI was not able to parse ";
    if (what.rfind(ini, 0) == 0) what = "unknown config key '" + what.substr(ini.size()) + "'";
    std::cerr << "config error: " << what << "\n";
    return kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*state) {
      cmd_state(g, sa);
    } else if (*sim) {
      cmd_simulate(g, sim_a);
    } else if (*rec) {
      cmd_reconstruct(g, rec_a);
    } else if (*scan) {
      cmd_scan(g, sc);
    } else if (*qkd) {
      if (qa.bases.empty()) throw CLI::ValidationError("--bases", "at least one basis is required");
      cmd_qkd(g, qa, seed_opt->count() > 0);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ququart::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return 0;
}
