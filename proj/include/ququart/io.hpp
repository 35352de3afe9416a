#pragma once

// Text formats: JSON for states, record files, reports and session
// configuration; CSV for curves and transcripts.
//
// Record files keep angles in degrees as written, and doubles are printed in
// shortest round-trip form, so write -> read -> write is byte-identical.
// Readers throw ProtocolError for malformed documents.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ququart/qkd.hpp"
#include "ququart/reconstruct.hpp"
#include "ququart/state.hpp"
#include "ququart/tomography.hpp"

namespace ququart::io {

using Json = nlohmann::ordered_json;

/// {"amplitudes": [Re c1, Im c1, ..., Re c4, Im c4]}
Json state_to_json(const QuquartState& state);
/// Accepts the object form or a bare array of 8 reals; normalizes.
/// Throws DomainError for a zero vector.
QuquartState state_from_json(const Json& doc);
/// Eight reals in (Re, Im) pairs, normalized. Throws DomainError when zero.
QuquartState state_from_reals(const std::vector<double>& reals);

Json records_to_json(const RecordSet& records);
RecordSet records_from_json(const Json& doc);

Json report_to_json(const ReconstructionResult& result);
ReconstructionResult report_from_json(const Json& doc);

/// {"n", "bases", "noise": {"p", "dark_rate"}, "seed"}; unknown keys rejected.
Json session_config_to_json(const SessionConfig& config);
SessionConfig session_config_from_json(const Json& doc);

Json session_result_to_json(const SessionConfig& config, const SessionResult& result);

void write_tilt_csv(std::ostream& out, const std::vector<TiltPoint>& curve);
std::vector<TiltPoint> read_tilt_csv(std::istream& in);

void write_transcript_csv(std::ostream& out, const std::vector<RoundRecord>& transcript);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& doc);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ququart::io
