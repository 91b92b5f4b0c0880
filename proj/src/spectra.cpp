#include "srip/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "srip/error.hpp"
#include "srip/parallel.hpp"
#include "srip/rng.hpp"

namespace srip {

std::size_t support_size(std::uint32_t p, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(Errc::InvalidArgument, "epsilon must lie in [0, 1)");
  }
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(p), 1.0 - epsilon) + 1e-12));
}

Support sample_support(const Dictionary& dict, std::size_t n, std::uint64_t seed) {
  const std::size_t total = dict.atom_count();
  if (n == 0) throw Error(Errc::InvalidArgument, "support size must be positive");
  if (n > total) {
    throw Error(Errc::NTooLarge, "n = " + std::to_string(n) + " exceeds |D| = " + std::to_string(total));
  }
  std::vector<std::size_t> pool(total);
  std::iota(pool.begin(), pool.end(), 0);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(total - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return Support{std::move(pool)};
}

GramSample gram_sample(const Dictionary& dict, const Support& support) {
  const std::size_t n = support.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "empty support");
  std::vector<std::span<const cplx>> atoms;
  atoms.reserve(n);
  for (const auto idx : support.indices) {
    if (idx >= dict.atom_count()) throw Error(Errc::InvalidArgument, "atom index out of range");
    atoms.push_back(dict.atom(idx));
  }
  GramSample s;
  s.support = support;
  s.gram = gram(std::span<const std::span<const cplx>>(atoms));
  const double p = dict.p();
  s.scale = std::sqrt(static_cast<double>(n) / p);
  const double inv_scale = 1.0 / s.scale;
  s.error = CMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s.error(i, j) = inv_scale * (s.gram(i, j) - (i == j ? 1.0 : 0.0));
    }
  }
  s.error = hermitize(s.error);
  s.error_eigenvalues = hermitian_eigenvalues(s.error);
  return s;
}

double gram_deviation(const GramSample& sample) {
  double m = 0.0;
  for (const double x : sample.error_eigenvalues) m = std::max(m, std::abs(x));
  return sample.scale * m;
}

double rip_deviation(const GramSample& sample) {
  if (sample.error_eigenvalues.empty()) return 0.0;
  const double lmax = 1.0 + sample.scale * sample.error_eigenvalues.front();
  const double lmin = 1.0 + sample.scale * sample.error_eigenvalues.back();
  return std::max(std::sqrt(std::max(lmax, 0.0)) - 1.0, 1.0 - std::sqrt(std::max(lmin, 0.0)));
}

std::uint64_t catalan(unsigned m) {
  unsigned __int128 c = 1;
  for (unsigned i = 0; i < m; ++i) {
    // C_{i+1} = C_i * 2(2i + 1) / (i + 2), exact at every step.
    c = c * (2 * (2 * static_cast<unsigned __int128>(i) + 1));
    c /= (i + 2);
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(Errc::Overflow, "Catalan number " + std::to_string(m) + " exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(c);
}

namespace semicircle {

double moment(unsigned k) { return k % 2 == 1 ? 0.0 : static_cast<double>(catalan(k / 2)); }

double density(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return (x * std::sqrt(4.0 - x * x) / 4.0 + std::asin(x / 2.0)) / std::numbers::pi + 0.5;
}

double quantile(double u) {
  if (u <= 0.0) return -2.0;
  if (u >= 1.0) return 2.0;
  double lo = -2.0;
  double hi = 2.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ks_statistic(std::vector<double> sample) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace semicircle

std::string_view threshold_kind_name(ThresholdKind kind) noexcept {
  switch (kind) {
    case ThresholdKind::p_power: return "p_pow_neg_eps_half";
    case ThresholdKind::n_over_p_power: return "n_over_p_pow_inv_2_plus_e";
    case ThresholdKind::explicit_value: return "explicit";
  }
  return "unknown";
}

namespace {

struct TrialRecord {
  std::vector<double> eigenvalues;
  double deviation = 0.0;
  double rip = 0.0;
  std::vector<double> moments;  // m_1 .. m_kmax
  double ks = 0.0;
};

std::size_t resolve_n(const Dictionary& dict, double epsilon, const std::optional<std::size_t>& n_override) {
  const std::size_t n = n_override ? *n_override : support_size(dict.p(), epsilon);
  if (n > dict.atom_count()) {
    throw Error(Errc::NTooLarge, "n = " + std::to_string(n) + " exceeds |D| = " + std::to_string(dict.atom_count()));
  }
  if (n < 1) throw Error(Errc::InvalidArgument, "support size must be at least 1");
  return n;
}

std::vector<TrialRecord> run_trials(const Dictionary& dict, std::size_t n, std::size_t trials, std::uint64_t seed,
                                    unsigned kmax) {
  if (trials == 0) throw Error(Errc::InvalidArgument, "trials must be >= 1");
  std::vector<TrialRecord> records(trials);
  parallel_for(trials, [&](std::size_t t) {
    const Support support = sample_support(dict, n, seed + t);
    const GramSample sample = gram_sample(dict, support);
    TrialRecord& r = records[t];
    r.eigenvalues = sample.error_eigenvalues;
    r.deviation = gram_deviation(sample);
    r.rip = rip_deviation(sample);
    r.moments.assign(kmax, 0.0);
    for (unsigned k = 1; k <= kmax; ++k) {
      double s = 0.0;
      for (const double x : r.eigenvalues) s += std::pow(x, static_cast<double>(k));
      r.moments[k - 1] = s / static_cast<double>(n);
    }
    r.ks = semicircle::ks_statistic(r.eigenvalues);
  });
  return records;
}

std::vector<ThresholdRow> tail_rows(const std::vector<TrialRecord>& records, std::uint32_t p, std::size_t n,
                                    double epsilon, double e, const std::vector<double>& extra) {
  std::vector<ThresholdRow> rows;
  const double dp = p;
  rows.push_back({ThresholdKind::p_power, std::pow(dp, -epsilon / 2.0), 0, 0.0});
  rows.push_back({ThresholdKind::n_over_p_power, std::pow(static_cast<double>(n) / dp, 1.0 / (2.0 + e)), 0, 0.0});
  for (const double t : extra) rows.push_back({ThresholdKind::explicit_value, t, 0, 0.0});
  for (auto& row : rows) {
    for (const auto& r : records) {
      if (r.deviation >= row.threshold) ++row.exceed_count;
    }
    row.frequency = static_cast<double>(row.exceed_count) / static_cast<double>(records.size());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ThresholdRow& a, const ThresholdRow& b) { return a.threshold < b.threshold; });
  return rows;
}

std::vector<MomentRow> moment_rows(const std::vector<TrialRecord>& records, unsigned kmax) {
  std::vector<MomentRow> rows;
  const double trials = static_cast<double>(records.size());
  for (unsigned k = 1; k <= kmax; ++k) {
    double mean = 0.0;
    for (const auto& r : records) mean += r.moments[k - 1];
    mean /= trials;
    double var = 0.0;
    for (const auto& r : records) var += (r.moments[k - 1] - mean) * (r.moments[k - 1] - mean);
    var = records.size() > 1 ? var / (trials - 1.0) : 0.0;
    rows.push_back({k, mean, var, std::sqrt(var / trials), semicircle::moment(k)});
  }
  return rows;
}

}  // namespace

SripResult srip_probability(const Dictionary& dict, const SripConfig& config) {
  const std::size_t n = resolve_n(dict, config.epsilon, config.n);
  if (n < 2) throw Error(Errc::InvalidArgument, "SRIP estimation needs n >= 2");
  const auto records = run_trials(dict, n, config.trials, config.seed, 0);
  SripResult out;
  out.p = dict.p();
  out.n = n;
  out.config = config;
  out.rows = tail_rows(records, dict.p(), n, config.epsilon, config.e, config.extra_thresholds);
  for (const auto& r : records) {
    out.deviations.push_back(r.deviation);
    out.rip_deviations.push_back(r.rip);
  }
  return out;
}

MomentStats moment_stats(const Dictionary& dict, const MomentConfig& config) {
  if (config.kmax < 1) throw Error(Errc::InvalidArgument, "kmax must be >= 1");
  const std::size_t n = resolve_n(dict, config.epsilon, config.n);
  const auto records = run_trials(dict, n, config.trials, config.seed, config.kmax);
  MomentStats out;
  out.p = dict.p();
  out.n = n;
  out.config = config;
  out.rows = moment_rows(records, config.kmax);
  return out;
}

Histogram eigenvalue_histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw Error(Errc::InvalidArgument, "bad histogram range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const double x : values) {
    if (x < lo) {
      ++h.underflow;
    } else if (x >= hi) {
      ++h.overflow;
    } else {
      const auto b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
      ++h.counts[b];
    }
  }
  for (std::size_t b = 0; b < bins; ++b) {
    const double left = lo + width * static_cast<double>(b);
    h.semicircle_mass.push_back(semicircle::cdf(left + width) - semicircle::cdf(left));
  }
  return h;
}

SpectralReport spectral_report(const Dictionary& dict, const SpectrumConfig& config) {
  if (config.kmax < 1) throw Error(Errc::InvalidArgument, "kmax must be >= 1");
  const std::size_t n = resolve_n(dict, config.epsilon, config.n);
  const auto records = run_trials(dict, n, config.trials, config.seed, config.kmax);

  SpectralReport out;
  out.p = dict.p();
  out.n = n;
  out.kind = dict.kind();
  out.config = config;
  out.srip = tail_rows(records, dict.p(), n, config.epsilon, config.e, config.extra_thresholds);
  out.moments = moment_rows(records, config.kmax);
  for (const auto& r : records) {
    out.pooled_eigenvalues.insert(out.pooled_eigenvalues.end(), r.eigenvalues.begin(), r.eigenvalues.end());
    out.ks_trial_mean += r.ks;
    out.ks_trial_max = std::max(out.ks_trial_max, r.ks);
  }
  out.ks_trial_mean /= static_cast<double>(records.size());
  out.histogram = eigenvalue_histogram(out.pooled_eigenvalues);
  out.ks_pooled = semicircle::ks_statistic(out.pooled_eigenvalues);
  return out;
}

}  // namespace srip
