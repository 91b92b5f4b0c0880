#include "srip/report.hpp"

#include <cstdio>

namespace srip {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json envelope(std::string_view command, std::uint64_t seed, json config, json result, double duration_seconds) {
  json j;
  j["schema"] = kReportSchema;
  j["version"] = kArtifactVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  j["duration_seconds"] = duration_seconds;
  return j;
}

json deterministic_payload(const json& report) {
  json copy = report;
  copy.erase("duration_seconds");
  return copy;
}

json to_json(const CoherenceReport& r) {
  return json{{"p", r.p},
              {"kind", kind_name(r.kind)},
              {"mu", r.mu},
              {"basis_count", r.basis_count},
              {"cross_pairs", r.cross_pairs},
              {"max_sqrt_p_coherence", r.cross_max},
              {"min_sqrt_p_coherence", r.cross_min},
              {"within_basis_max_deviation", r.within_basis_max_deviation},
              {"histogram_bin_width", r.histogram_bin_width},
              {"histogram", r.histogram},
              {"histogram_overflow", r.histogram_overflow},
              {"sampled", r.sampled},
              {"sample_seed", r.sample_seed},
              {"vacuous", r.vacuous},
              {"pass", r.pass}};
}

namespace {

json rows_json(const std::vector<ThresholdRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"threshold_kind", threshold_kind_name(r.kind)},
                 {"threshold", r.threshold},
                 {"exceed_count", r.exceed_count},
                 {"frequency", r.frequency}});
  }
  return a;
}

json rows_json(const std::vector<MomentRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"k", r.k},
                 {"mean", r.mean},
                 {"variance", r.variance},
                 {"standard_error", r.standard_error},
                 {"semicircle_moment", r.semicircle_moment}});
  }
  return a;
}

json optional_n(const std::optional<std::size_t>& n) { return n ? json(*n) : json(nullptr); }

}  // namespace

json to_json(const SripResult& r) {
  return json{{"p", r.p},
              {"n", r.n},
              {"rows", rows_json(r.rows)},
              {"deviations", r.deviations},
              {"rip_deviations", r.rip_deviations}};
}

json to_json(const MomentStats& r) { return json{{"p", r.p}, {"n", r.n}, {"rows", rows_json(r.rows)}}; }

json to_json(const Histogram& h) {
  return json{{"lo", h.lo},
              {"hi", h.hi},
              {"counts", h.counts},
              {"underflow", h.underflow},
              {"overflow", h.overflow},
              {"semicircle_mass", h.semicircle_mass}};
}

json to_json(const SpectralReport& r) {
  return json{{"p", r.p},
              {"n", r.n},
              {"kind", kind_name(r.kind)},
              {"srip", rows_json(r.srip)},
              {"moments", rows_json(r.moments)},
              {"histogram", to_json(r.histogram)},
              {"ks_pooled", r.ks_pooled},
              {"ks_trial_mean", r.ks_trial_mean},
              {"ks_trial_max", r.ks_trial_max},
              {"eigenvalue_count", r.pooled_eigenvalues.size()}};
}

json config_json(const SripConfig& c) {
  return json{{"epsilon", c.epsilon},
              {"e", c.e},
              {"trials", c.trials},
              {"seed", c.seed},
              {"n", optional_n(c.n)},
              {"thresholds", c.extra_thresholds}};
}

json config_json(const MomentConfig& c) {
  return json{{"epsilon", c.epsilon}, {"kmax", c.kmax}, {"trials", c.trials}, {"seed", c.seed}, {"n", optional_n(c.n)}};
}

json config_json(const SpectrumConfig& c) {
  return json{{"epsilon", c.epsilon},
              {"e", c.e},
              {"kmax", c.kmax},
              {"trials", c.trials},
              {"seed", c.seed},
              {"n", optional_n(c.n)},
              {"thresholds", c.extra_thresholds}};
}

std::string eigenvalues_csv(const std::vector<double>& values) {
  std::string s = "lambda\n";
  for (const double x : values) s += format_double(x) + '\n';
  return s;
}

std::string moments_csv(const std::vector<MomentRow>& rows) {
  std::string s = "k,mean,variance,semicircle_moment\n";
  for (const auto& r : rows) {
    s += std::to_string(r.k) + ',' + format_double(r.mean) + ',' + format_double(r.variance) + ',' +
         format_double(r.semicircle_moment) + '\n';
  }
  return s;
}

std::string srip_csv(const std::vector<ThresholdRow>& rows) {
  std::string s = "threshold_kind,threshold,frequency\n";
  for (const auto& r : rows) {
    s += std::string(threshold_kind_name(r.kind)) + ',' + format_double(r.threshold) + ',' +
         format_double(r.frequency) + '\n';
  }
  return s;
}

}  // namespace srip
