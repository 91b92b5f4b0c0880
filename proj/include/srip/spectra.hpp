/**
 * @file spectra.hpp
 * @brief Monte Carlo statistics of Gram matrices of random dictionary supports.
 *
 * For a support S of n distinct atoms, G(S) is the Gram matrix and
 * E = sqrt(p/n) (G - I) the normalized error. Trial t draws its support from
 * SplitMix64(seed + t), so trial outcomes do not depend on execution order.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srip/dictionaries.hpp"
#include "srip/linalg.hpp"

namespace srip {

struct Support {
  std::vector<std::size_t> indices;  // distinct global atom ids, in draw order
  std::size_t size() const noexcept { return indices.size(); }
};

/// n = floor(p^(1 - epsilon)).
std::size_t support_size(std::uint32_t p, double epsilon);

/// Uniform ordered injective n-tuple by partial Fisher-Yates. Throws NTooLarge.
Support sample_support(const Dictionary& dict, std::size_t n, std::uint64_t seed);

struct GramSample {
  Support support;
  CMatrix gram;                     // G
  CMatrix error;                    // E = sqrt(p/n) (G - I)
  std::vector<double> error_eigenvalues;  // descending
  double scale = 0.0;               // sqrt(n/p), so lambda(G) = 1 + scale * lambda(E)
};

GramSample gram_sample(const Dictionary& dict, const Support& support);

/// ||G - I|| = sqrt(n/p) max |lambda(E)|.
double gram_deviation(const GramSample& sample);

/// sup over unit f on S of | ||Theta f|| - 1 |, i.e.
/// max(sqrt(lambda_max(G)) - 1, 1 - sqrt(max(lambda_min(G), 0))).
double rip_deviation(const GramSample& sample);

/// Exact Catalan number binom(2m, m) / (m + 1). Throws Overflow past 64 bits.
std::uint64_t catalan(unsigned m);

namespace semicircle {

/// Catalan(k/2) for even k, 0 for odd k.
double moment(unsigned k);
/// (1 / 2 pi) sqrt(4 - x^2) on [-2, 2].
double density(double x);
/// (x sqrt(4 - x^2) / 4 + asin(x / 2)) / pi + 1/2, clamped outside [-2, 2].
double cdf(double x);
/// Inverse of cdf on (0, 1) by bisection.
double quantile(double u);
/// Two-sided Kolmogorov-Smirnov distance between the sample and the semicircle.
double ks_statistic(std::vector<double> sample);

}  // namespace semicircle

enum class ThresholdKind { p_power, n_over_p_power, explicit_value };
std::string_view threshold_kind_name(ThresholdKind kind) noexcept;

struct ThresholdRow {
  ThresholdKind kind;
  double threshold;
  std::uint64_t exceed_count;
  double frequency;
};

struct SripConfig {
  double epsilon = 0.3;
  double e = 0.1;  // exponent slack in (n/p)^(1/(2+e))
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  std::optional<std::size_t> n;  // overrides floor(p^(1 - epsilon))
  std::vector<double> extra_thresholds;
};

struct SripResult {
  std::uint32_t p = 0;
  std::size_t n = 0;
  SripConfig config;
  std::vector<ThresholdRow> rows;  // sorted by threshold, ascending
  std::vector<double> deviations;  // ||G - I|| per trial
  std::vector<double> rip_deviations;
};

SripResult srip_probability(const Dictionary& dict, const SripConfig& config);

struct MomentConfig {
  double epsilon = 0.3;
  unsigned kmax = 6;
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  std::optional<std::size_t> n;
};

struct MomentRow {
  unsigned k;
  double mean;
  double variance;  // unbiased
  double standard_error;
  double semicircle_moment;
};

struct MomentStats {
  std::uint32_t p = 0;
  std::size_t n = 0;
  MomentConfig config;
  std::vector<MomentRow> rows;  // k = 1..kmax
};

MomentStats moment_stats(const Dictionary& dict, const MomentConfig& config);

struct Histogram {
  double lo = -2.5;
  double hi = 2.5;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
  std::vector<double> semicircle_mass;  // expected fraction per bin
};

Histogram eigenvalue_histogram(const std::vector<double>& values, std::size_t bins = 50, double lo = -2.5,
                               double hi = 2.5);

struct SpectrumConfig {
  double epsilon = 0.3;
  double e = 0.1;
  unsigned kmax = 6;
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  std::optional<std::size_t> n;
  std::vector<double> extra_thresholds;
};

struct SpectralReport {
  std::uint32_t p = 0;
  std::size_t n = 0;
  DictionaryKind kind = DictionaryKind::heisenberg;
  SpectrumConfig config;
  std::vector<ThresholdRow> srip;
  std::vector<MomentRow> moments;
  std::vector<double> pooled_eigenvalues;  // trial-major, each trial descending
  Histogram histogram;
  double ks_pooled = 0.0;
  double ks_trial_mean = 0.0;
  double ks_trial_max = 0.0;
};

SpectralReport spectral_report(const Dictionary& dict, const SpectrumConfig& config);

}  // namespace srip
