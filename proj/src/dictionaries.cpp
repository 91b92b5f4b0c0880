#include "srip/dictionaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "srip/error.hpp"
#include "srip/parallel.hpp"
#include "srip/rng.hpp"

namespace srip {

std::string_view kind_name(DictionaryKind kind) noexcept {
  switch (kind) {
    case DictionaryKind::heisenberg: return "heisenberg";
    case DictionaryKind::oscillator: return "oscillator";
    case DictionaryKind::extended_oscillator: return "extended_oscillator";
  }
  return "unknown";
}

DictionaryKind parse_kind(std::string_view name) {
  if (name == "heisenberg") return DictionaryKind::heisenberg;
  if (name == "oscillator") return DictionaryKind::oscillator;
  if (name == "extended_oscillator") return DictionaryKind::extended_oscillator;
  throw Error(Errc::InvalidArgument, "unknown dictionary kind '" + std::string(name) + "'");
}

HeisenbergElement Line::direction() const {
  if (is_vertical()) return {Fp(0, p), Fp(1, p), Fp(0, p)};
  return {Fp(1, p), *slope, Fp(0, p)};
}

std::string Line::label() const {
  return is_vertical() ? "line:inf" : "line:m=" + std::to_string(slope->value());
}

std::vector<Line> lines(std::uint32_t p) {
  require_field_prime(p);
  std::vector<Line> out;
  out.reserve(p + 1);
  for (std::uint32_t m = 0; m < p; ++m) out.push_back(Line{p, Fp(m, p)});
  out.push_back(Line{p, std::nullopt});
  return out;
}

std::size_t expected_nonsplit_torus_count(std::uint32_t p) noexcept {
  return static_cast<std::size_t>(p) * (p - 1) / 2;
}

Torus model_nonsplit_torus(std::uint32_t p) {
  require_field_prime(p);
  const Fp delta = find_nonresidue(p);
  const Fp2 gen = norm_one_generator(p, delta);
  const SL2Element t0(gen.a(), gen.b() * delta, gen.b(), gen.a());
  Torus torus{t0, {}};
  SL2Element x = SL2Element::identity(p);
  for (std::uint32_t i = 0; i <= p; ++i) {
    torus.elements.push_back(x);
    x = x * t0;
  }
  std::sort(torus.elements.begin(), torus.elements.end());
  return torus;
}

std::vector<Torus> nonsplit_tori(std::uint32_t p) {
  const Torus model = model_nonsplit_torus(p);
  std::set<std::vector<SL2Element>> seen;
  std::vector<Torus> out;
  for (std::uint32_t a = 0; a < p; ++a) {
    for (std::uint32_t b = 0; b < p; ++b) {
      for (std::uint32_t c = 0; c < p; ++c) {
        for (std::uint32_t d = 0; d < p; ++d) {
          if ((Fp(a, p) * Fp(d, p) - Fp(b, p) * Fp(c, p)).value() != 1) continue;
          const SL2Element g(a, b, c, d, p);
          const SL2Element g_inv = g.inverse();
          std::vector<SL2Element> conj;
          conj.reserve(model.elements.size());
          for (const auto& x : model.elements) conj.push_back(g * x * g_inv);
          std::sort(conj.begin(), conj.end());
          if (seen.insert(conj).second) {
            out.push_back(Torus{g * model.generator * g_inv, std::move(conj)});
          }
        }
      }
    }
  }
  if (out.size() != expected_nonsplit_torus_count(p)) {
    throw Error(Errc::CountMismatch, "found " + std::to_string(out.size()) + " non-split tori, expected " +
                                         std::to_string(expected_nonsplit_torus_count(p)));
  }
  return out;
}

OrthonormalBasis::OrthonormalBasis(std::string label, CMatrix atoms)
    : label_(std::move(label)), atoms_(std::move(atoms)) {
  if (!atoms_.is_square()) throw Error(Errc::DimensionMismatch, "a basis of C^p holds exactly p atoms");
}

double OrthonormalBasis::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i; j < size(); ++j) {
      const cplx g = inner(atom(i), atom(j));
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}


namespace {

// Eigenvectors come back as columns; a basis stores atoms as rows.
CMatrix columns_to_rows(const CMatrix& columns) {
  CMatrix rows(columns.cols(), columns.rows());
  for (std::size_t r = 0; r < columns.rows(); ++r) {
    for (std::size_t c = 0; c < columns.cols(); ++c) rows(c, r) = columns(r, c);
  }
  return rows;
}

constexpr double kCoherenceSlack = 1e-9;

}  // namespace

OrthonormalBasis heisenberg_basis(const Line& line) {
  const std::uint32_t p = line.p;
  if (line.is_vertical()) {
    // pi(0, w) is diagonal: the delta functions are its eigenvectors.
    return OrthonormalBasis(line.label(), CMatrix::identity(p));
  }
  const UnitaryOp op = heis_op(line.direction());
  const UnitaryEig eig = unitary_eigenbasis(op.matrix);
  return OrthonormalBasis(line.label(), columns_to_rows(eig.vectors));
}

OrthonormalBasis oscillator_basis_from_generator(const SL2Element& t0, const std::string& label) {
  const UnitaryOp op = weil_op(t0);
  const UnitaryEig eig = unitary_eigenbasis(op.matrix);
  return OrthonormalBasis(label, columns_to_rows(eig.vectors));
}

OrthonormalBasis oscillator_basis(const Torus& torus) {
  return oscillator_basis_from_generator(torus.generator, "torus:" + torus.generator.to_string());
}

OrthonormalBasis translate_basis(const OrthonormalBasis& basis, const Fp& tau, const Fp& w) {
  const std::uint32_t p = tau.modulus();
  const UnitaryOp shift = heis_op({tau, w, Fp(0, p)});
  CMatrix rows(basis.size(), basis.dimension());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto moved = shift.matrix.apply(basis.atom(i));
    normalize_phase(moved);
    std::copy(moved.begin(), moved.end(), rows.row(i).begin());
  }
  const std::string label =
      basis.label() + ";v=(" + std::to_string(tau.value()) + "," + std::to_string(w.value()) + ")";
  return OrthonormalBasis(label, std::move(rows));
}

Dictionary::Dictionary(std::uint32_t p, DictionaryKind kind, double mu, std::vector<OrthonormalBasis> bases)
    : p_(p), kind_(kind), mu_(mu), bases_(std::move(bases)) {
  for (const auto& b : bases_) {
    if (b.size() != p_ || b.dimension() != p_) {
      throw Error(Errc::DimensionMismatch, "basis '" + b.label() + "' is not p x p");
    }
  }
}

namespace {

struct PairStats {
  std::uint64_t pairs = 0;
  double max = 0.0;
  double min = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> histogram;
  std::uint64_t overflow = 0;
};

constexpr double kBinWidth = 0.1;
constexpr std::size_t kBinCount = 41;  // centres 0.0 .. 4.0

void record(PairStats& s, double scaled) {
  ++s.pairs;
  s.max = std::max(s.max, scaled);
  s.min = std::min(s.min, scaled);
  const auto bin = static_cast<std::size_t>(std::floor(scaled / kBinWidth + 0.5));
  if (bin < kBinCount) {
    ++s.histogram[bin];
  } else {
    ++s.overflow;
  }
}

void merge(PairStats& into, const PairStats& from) {
  into.pairs += from.pairs;
  into.max = std::max(into.max, from.max);
  into.min = std::min(into.min, from.min);
  for (std::size_t i = 0; i < kBinCount; ++i) into.histogram[i] += from.histogram[i];
  into.overflow += from.overflow;
}

// |<x_i, y_j>|^2 with the complex product expanded by hand for speed.
double inner_abs2(std::span<const cplx> f, std::span<const cplx> g) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t t = 0; t < f.size(); ++t) {
    const double fr = f[t].real(), fi = f[t].imag();
    const double gr = g[t].real(), gi = g[t].imag();
    re += fr * gr + fi * gi;
    im += fi * gr - fr * gi;
  }
  return re * re + im * im;
}

CoherenceReport finish_report(const Dictionary& dict, const PairStats& stats, double within) {
  CoherenceReport r;
  r.p = dict.p();
  r.kind = dict.kind();
  r.mu = dict.mu();
  r.basis_count = dict.basis_count();
  r.cross_pairs = stats.pairs;
  r.cross_max = stats.max;
  r.cross_min = stats.pairs == 0 ? 0.0 : stats.min;
  r.within_basis_max_deviation = within;
  r.histogram_bin_width = kBinWidth;
  r.histogram = stats.histogram;
  r.histogram_overflow = stats.overflow;
  r.vacuous = dict.basis_count() < 2;
  const double sqrt_p = std::sqrt(static_cast<double>(dict.p()));
  r.pass = stats.max <= dict.mu() + sqrt_p * kCoherenceSlack;
  return r;
}

double max_within_deviation(const Dictionary& dict) {
  std::vector<double> per_basis(dict.basis_count());
  parallel_for(dict.basis_count(), [&](std::size_t b) { per_basis[b] = dict.bases()[b].orthonormality_defect(); });
  double worst = 0.0;
  for (const double d : per_basis) worst = std::max(worst, d);
  return worst;
}

}  // namespace

CoherenceReport coherence_report(const Dictionary& dict) {
  const std::size_t nb = dict.basis_count();
  const std::size_t p = dict.p();
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  std::vector<PairStats> per_row(nb);
  parallel_for(nb, [&](std::size_t x) {
    PairStats& s = per_row[x];
    s.histogram.assign(kBinCount, 0);
    const auto& bx = dict.bases()[x];
    for (std::size_t y = x + 1; y < nb; ++y) {
      const auto& by = dict.bases()[y];
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) record(s, sqrt_p * std::sqrt(inner_abs2(bx.atom(i), by.atom(j))));
      }
    }
  });
  PairStats total;
  total.histogram.assign(kBinCount, 0);
  for (const auto& s : per_row) merge(total, s);
  return finish_report(dict, total, max_within_deviation(dict));
}

CoherenceReport sampled_coherence_report(const Dictionary& dict, std::size_t pair_count, std::uint64_t seed) {
  PairStats total;
  total.histogram.assign(kBinCount, 0);
  const std::size_t nb = dict.basis_count();
  const std::size_t p = dict.p();
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  if (nb >= 2) {
    SplitMix64 rng(seed);
    for (std::size_t k = 0; k < pair_count; ++k) {
      const std::size_t x = rng.below(nb);
      std::size_t y = rng.below(nb - 1);
      if (y >= x) ++y;
      const std::size_t i = rng.below(p);
      const std::size_t j = rng.below(p);
      record(total, sqrt_p * std::sqrt(inner_abs2(dict.bases()[x].atom(i), dict.bases()[y].atom(j))));
    }
  }
  CoherenceReport r = finish_report(dict, total, max_within_deviation(dict));
  r.sampled = true;
  r.sample_seed = seed;
  return r;
}

namespace {

void enforce_coherence(const Dictionary& dict) {
  const CoherenceReport r = coherence_report(dict);
  if (!r.pass) {
    throw Error(Errc::CoherenceViolation, std::string(kind_name(dict.kind())) + " p=" + std::to_string(dict.p()) +
                                              ": max sqrt(p)|<phi,varphi>| = " + std::to_string(r.cross_max) +
                                              " exceeds mu = " + std::to_string(dict.mu()));
  }
  if (r.within_basis_max_deviation > 1e-9) {
    throw Error(Errc::IntegrityFailure,
                "basis not orthonormal: deviation " + std::to_string(r.within_basis_max_deviation));
  }
}

}  // namespace

Dictionary build_heisenberg_dict(std::uint32_t p, BuildOptions options) {
  const auto ls = lines(p);
  std::vector<std::optional<OrthonormalBasis>> slots(ls.size());
  parallel_for(ls.size(), [&](std::size_t i) { slots[i].emplace(heisenberg_basis(ls[i])); });
  std::vector<OrthonormalBasis> bases;
  bases.reserve(ls.size());
  for (auto& s : slots) bases.push_back(std::move(*s));
  Dictionary dict(p, DictionaryKind::heisenberg, 1.0, std::move(bases));
  if (options.verify_coherence) enforce_coherence(dict);
  return dict;
}

Dictionary build_oscillator_dict(std::uint32_t p, BuildOptions options) {
  const auto tori = nonsplit_tori(p);
  std::vector<std::optional<OrthonormalBasis>> slots(tori.size());
  parallel_for(tori.size(), [&](std::size_t i) { slots[i].emplace(oscillator_basis(tori[i])); });
  std::vector<OrthonormalBasis> bases;
  bases.reserve(tori.size());
  for (auto& s : slots) bases.push_back(std::move(*s));
  Dictionary dict(p, DictionaryKind::oscillator, 4.0, std::move(bases));
  if (options.verify_coherence) enforce_coherence(dict);
  return dict;
}

std::vector<std::pair<Fp, Fp>> extended_translations(std::uint32_t p, const ExtendedOptions& options) {
  require_field_prime(p);
  std::vector<std::pair<Fp, Fp>> all;
  all.reserve(static_cast<std::size_t>(p) * p);
  for (std::uint32_t tau = 0; tau < p; ++tau) {
    for (std::uint32_t w = 0; w < p; ++w) all.emplace_back(Fp(tau, p), Fp(w, p));
  }
  if (!options.subsample) {
    if (p > 5 && !options.allow_full) {
      throw Error(Errc::InvalidArgument,
                  "full extended oscillator dictionary above p = 5 requires allow_full or a translation subsample");
    }
    return all;
  }
  const std::size_t count = options.subsample->count;
  if (count == 0 || count > all.size()) {
    throw Error(Errc::InvalidArgument, "translation subsample must be in [1, p^2]");
  }
  // Seeded partial Fisher-Yates, then restore lexicographic order.
  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  SplitMix64 rng(options.subsample->seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<std::pair<Fp, Fp>> kept;
  kept.reserve(count);
  for (const auto i : idx) kept.push_back(all[i]);
  return kept;
}

Dictionary build_extended_oscillator_dict(std::uint32_t p, const ExtendedOptions& options) {
  const auto translations = extended_translations(p, options);
  const auto tori = nonsplit_tori(p);
  std::vector<std::optional<OrthonormalBasis>> base(tori.size());
  parallel_for(tori.size(), [&](std::size_t i) { base[i].emplace(oscillator_basis(tori[i])); });

  const std::size_t nt = translations.size();
  std::vector<std::optional<OrthonormalBasis>> slots(tori.size() * nt);
  parallel_for(slots.size(), [&](std::size_t k) {
    const auto& [tau, w] = translations[k % nt];
    slots[k].emplace(translate_basis(*base[k / nt], tau, w));
  });
  std::vector<OrthonormalBasis> bases;
  bases.reserve(slots.size());
  for (auto& s : slots) bases.push_back(std::move(*s));
  Dictionary dict(p, DictionaryKind::extended_oscillator, 4.0, std::move(bases));
  if (options.verify_coherence) enforce_coherence(dict);
  return dict;
}

std::vector<cplx> resolve(std::span<const cplx> coefficients, const Dictionary& dict) {
  if (coefficients.size() != dict.atom_count()) {
    throw Error(Errc::DimensionMismatch, "coefficient vector has " + std::to_string(coefficients.size()) +
                                             " entries, dictionary has " + std::to_string(dict.atom_count()) +
                                             " atoms");
  }
  std::vector<cplx> out(dict.p());
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    const cplx f = coefficients[k];
    if (f == cplx{}) continue;
    const auto a = dict.atom(k);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += f * a[t];
  }
  return out;
}

std::uint32_t primitive_root(std::uint32_t p) {
  require_field_prime(p);
  std::vector<std::uint32_t> factors;
  std::uint32_t rest = p - 1;
  for (std::uint32_t q = 2; q * q <= rest; ++q) {
    if (rest % q == 0) {
      factors.push_back(q);
      while (rest % q == 0) rest /= q;
    }
  }
  if (rest > 1) factors.push_back(rest);
  for (std::uint32_t g = 2; g < p; ++g) {
    const Fp x(g, p);
    if (std::all_of(factors.begin(), factors.end(), [&](std::uint32_t q) { return x.pow((p - 1) / q).value() != 1; })) {
      return g;
    }
  }
  throw Error(Errc::InvalidArgument, "no primitive root");
}

SplitTorusCheck split_torus_check(std::uint32_t p) {
  const std::uint32_t g = primitive_root(p);
  const Fp gen(g, p);
  const UnitaryOp scaling = weil_scaling(gen);

  // Discrete log table: t = g^k.
  std::vector<std::uint32_t> log(p, 0);
  Fp x(1, p);
  for (std::uint32_t k = 0; k + 1 < p; ++k) {
    log[x.value()] = k;
    x = x * gen;
  }

  const std::uint32_t order = p - 1;
  const double amp = 1.0 / std::sqrt(static_cast<double>(order));
  std::vector<std::vector<cplx>> vectors;
  SplitTorusCheck out{0, 0.0, 0.0};
  for (std::uint32_t j = 0; j < order; ++j) {
    if (j == order / 2) continue;  // chi = sigma is excluded
    std::vector<cplx> phi(p);
    for (std::uint32_t t = 1; t < p; ++t) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) * log[t] / order;
      phi[t] = std::polar(amp, angle);
    }
    const auto s_phi = scaling.matrix.apply(phi);
    const cplx lambda = inner(s_phi, phi);
    double residual = 0.0;
    for (std::uint32_t t = 0; t < p; ++t) residual += std::norm(s_phi[t] - lambda * phi[t]);
    out.max_residual = std::max(out.max_residual, std::sqrt(residual));
    vectors.push_back(std::move(phi));
  }
  out.vector_count = vectors.size();
  const CMatrix g_mat = gram(vectors);
  out.orthonormality_defect = (g_mat - CMatrix::identity(vectors.size())).max_abs();
  return out;
}

}  // namespace srip
