#include <gtest/gtest.h>

#include <sstream>

#include "ququart/errors.hpp"
#include "ququart/io.hpp"

using namespace ququart;
using io::Json;

namespace {

RecordSet p1_records() {
  ExperimentOptions o;
  o.seed = 12;
  o.brightness = 800.0;
  o.exposure_s = 0.7;
  return run_protocol1(random_pure_state(1), {702, 605}, o);
}

RecordSet p2_records() {
  ExperimentOptions o;
  o.noiseless = true;
  const auto grid = protocol2_grid(default_protocol2_thetas(), 8, default_protocol2_plate1(),
                                   default_protocol2_plate2());
  return run_protocol2(random_pure_state(2), grid, {667, 635}, o);
}

}  // namespace

TEST(Io, StateRoundtrip) {
  const auto s = random_pure_state(3);
  const auto back = io::state_from_json(io::state_to_json(s));
  EXPECT_EQ(back.amplitudes(), s.amplitudes());
  const auto bare = io::state_from_json(Json::parse("[0,0,0,0,0,0,2,0]"));
  EXPECT_EQ(bare[3], Complex(1.0));
  EXPECT_THROW(io::state_from_json(Json::parse(R"({"amplitudes":[1,0,0,0,0,0,0,0],"x":1})")), ProtocolError);
  EXPECT_THROW(io::state_from_reals({1, 0, 0}), DomainError);
  EXPECT_THROW(io::state_from_reals(std::vector<double>(8, 0.0)), DomainError);
}

TEST(Io, RecordFilesAreByteStable) {
  for (const auto& records : {p1_records(), p2_records()}) {
    const std::string first = io::dump(io::records_to_json(records));
    const auto back = io::records_from_json(Json::parse(first));
    EXPECT_EQ(io::dump(io::records_to_json(back)), first);
    ASSERT_EQ(back.records.size(), records.records.size());
    EXPECT_EQ(back.protocol, records.protocol);
    for (std::size_t nu = 0; nu < records.records.size(); ++nu) {
      EXPECT_EQ(back.records[nu].counts, records.records[nu].counts);
      EXPECT_EQ(back.records[nu].exposure_s, records.records[nu].exposure_s);
    }
  }
}

TEST(Io, RecordFilesAreStrict) {
  const Json good = io::records_to_json(p1_records());
  auto extra = good;
  extra["comment"] = "x";
  EXPECT_THROW(io::records_from_json(extra), ProtocolError);
  auto missing = good;
  missing.erase("protocol");
  EXPECT_THROW(io::records_from_json(missing), ProtocolError);
  auto wrong_format = good;
  wrong_format["format"] = "something-else";
  EXPECT_THROW(io::records_from_json(wrong_format), ProtocolError);
  auto bad_record = good;
  bad_record["records"][0]["phi_deg"] = 1.0;
  EXPECT_THROW(io::records_from_json(bad_record), ProtocolError);
  auto negative = good;
  negative["records"][3]["counts"] = -2;
  EXPECT_THROW(io::records_from_json(negative), ProtocolError);
  auto bad_protocol = good;
  bad_protocol["protocol"] = "P7";
  EXPECT_THROW(io::records_from_json(bad_protocol), ProtocolError);

  auto p2 = io::records_to_json(p2_records());
  p2["records"][0]["plate1"]["axis"] = "diagonal";
  EXPECT_THROW(io::records_from_json(p2), ProtocolError);
}

TEST(Io, ReportRoundtrip) {
  ReconstructionResult r;
  r.estimate = random_pure_state(5);
  r.scale = 123.5;
  r.log_likelihood = -4.25;
  r.residual = 0.9;
  r.iterations = 17;
  r.converged = true;
  r.best_start = 3;
  r.fidelity = 0.999;
  r.warnings = {"something"};
  const auto back = io::report_from_json(io::report_to_json(r));
  EXPECT_EQ(back.estimate.amplitudes(), r.estimate.amplitudes());
  EXPECT_EQ(back.scale, r.scale);
  EXPECT_EQ(back.iterations, 17);
  EXPECT_EQ(back.best_start, 3);
  EXPECT_EQ(back.fidelity, r.fidelity);
  EXPECT_EQ(back.warnings, r.warnings);
  r.fidelity.reset();
  EXPECT_FALSE(io::report_from_json(io::report_to_json(r)).fidelity.has_value());
}

TEST(Io, SessionConfigRoundtrip) {
  SessionConfig cfg;
  cfg.n = 77;
  cfg.bases = {MubIndex::II, MubIndex::III};
  cfg.noise = {0.1, 0.02};
  cfg.seed = 9;
  const auto back = io::session_config_from_json(io::session_config_to_json(cfg));
  EXPECT_EQ(back.n, 77);
  EXPECT_EQ(back.bases, cfg.bases);
  EXPECT_EQ(back.noise.depolarize, 0.1);
  EXPECT_EQ(back.noise.dark_rate, 0.02);
  EXPECT_EQ(back.seed, 9u);
  auto doc = io::session_config_to_json(cfg);
  doc["eve"] = true;
  EXPECT_THROW(io::session_config_from_json(doc), ProtocolError);
}

TEST(Io, TiltCsvRoundtrip) {
  const WavePlate a{3.716, Angle::degrees(45.0)};
  const WavePlate b{0.315, Angle::degrees(45.0), &quartz(), AxisSense::crossed};
  const auto curve = tilt_scan(a, b, {702, 605}, 0.0, 2.0, 0.25);
  std::stringstream ss;
  io::write_tilt_csv(ss, curve);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "theta_deg,singles,coincidence");
  const auto back = io::read_tilt_csv(ss);
  ASSERT_EQ(back.size(), curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_EQ(back[i].theta_deg, curve[i].theta_deg);
    EXPECT_EQ(back[i].singles, curve[i].singles);
    EXPECT_EQ(back[i].coincidence, curve[i].coincidence);
  }
}

TEST(Io, TranscriptCsv) {
  SessionConfig cfg;
  cfg.n = 5;
  const auto r = run_session(cfg, true);
  std::stringstream ss;
  io::write_transcript_csv(ss, r.transcript);
  int lines = 0;
  for (std::string line; std::getline(ss, line);) ++lines;
  EXPECT_EQ(lines, 6);
}
