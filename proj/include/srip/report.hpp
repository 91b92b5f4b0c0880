#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "srip/dictionaries.hpp"
#include "srip/paths.hpp"
#include "srip/spectra.hpp"

namespace srip {

inline constexpr std::string_view kArtifactVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

using json = nlohmann::ordered_json;

/// {"schema", "version", "command", "seed", "config", "result", "duration_seconds"}.
json envelope(std::string_view command, std::uint64_t seed, json config, json result, double duration_seconds);
/// Copy of a report with duration_seconds removed; what determinism compares.
json deterministic_payload(const json& report);

json to_json(const CoherenceReport& r);
json to_json(const SripResult& r);
json to_json(const MomentStats& r);
json to_json(const SpectralReport& r);
json to_json(const Histogram& h);

json config_json(const SripConfig& c);
json config_json(const MomentConfig& c);
json config_json(const SpectrumConfig& c);

/// One column "lambda", trial-major.
std::string eigenvalues_csv(const std::vector<double>& values);
/// k,mean,variance,semicircle_moment
std::string moments_csv(const std::vector<MomentRow>& rows);
/// threshold_kind,threshold,frequency
std::string srip_csv(const std::vector<ThresholdRow>& rows);

std::string format_double(double x);

}  // namespace srip
