/**
 * @file dictionaries.hpp
 * @brief Heisenberg, oscillator and extended oscillator dictionaries over F_p.
 *
 * A dictionary is an ordered list of orthonormal bases of C^p. Atoms are
 * addressed globally as basis_index * p + position. Within a basis the atoms
 * are the phase-normalized eigenvectors of the defining unitary, ordered by
 * descending eigenvalue phase in [0, 2 pi).
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srip/ffield.hpp"
#include "srip/linalg.hpp"
#include "srip/repn.hpp"

namespace srip {

enum class DictionaryKind : std::uint8_t { heisenberg = 0, oscillator = 1, extended_oscillator = 2 };

std::string_view kind_name(DictionaryKind kind) noexcept;
/// Parses "heisenberg" | "oscillator" | "extended_oscillator".
DictionaryKind parse_kind(std::string_view name);

/// Line through the origin of F_p x F_p: {(t, m t)} for a slope m, or the
/// vertical line {(0, w)} when slope is empty.
struct Line {
  std::uint32_t p;
  std::optional<Fp> slope;

  bool is_vertical() const noexcept { return !slope.has_value(); }
  /// Nonzero vector spanning the line: (1, m) or (0, 1).
  HeisenbergElement direction() const;
  std::string label() const;
};

/// All p + 1 lines: slopes 0..p-1, then the vertical line.
std::vector<Line> lines(std::uint32_t p);

struct Torus {
  SL2Element generator;
  std::vector<SL2Element> elements;  // sorted, p + 1 entries
};

/// The model torus {[[a, b delta], [b, a]] : a^2 - delta b^2 = 1} with its
/// generator taken from norm_one_generator.
Torus model_nonsplit_torus(std::uint32_t p);

/// Every non-split maximal torus of SL_2(F_p), as distinct conjugates of the
/// model torus in order of first discovery over g in SL_2(F_p). There are
/// p(p-1)/2 of them; a different count raises CountMismatch.
std::vector<Torus> nonsplit_tori(std::uint32_t p);

std::size_t expected_nonsplit_torus_count(std::uint32_t p) noexcept;

class OrthonormalBasis {
 public:
  OrthonormalBasis(std::string label, CMatrix atoms);

  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return atoms_.rows(); }
  std::size_t dimension() const noexcept { return atoms_.cols(); }
  std::span<const cplx> atom(std::size_t i) const noexcept { return atoms_.row(i); }
  /// Row i is atom i.
  const CMatrix& atoms() const noexcept { return atoms_; }

  /// max |<b_i, b_j> - delta_ij|.
  double orthonormality_defect() const;

 private:
  std::string label_;
  CMatrix atoms_;
};

OrthonormalBasis heisenberg_basis(const Line& line);
OrthonormalBasis oscillator_basis(const Torus& torus);
/// Eigenbasis of rho(t0) for an arbitrary generator t0 of a non-split torus.
OrthonormalBasis oscillator_basis_from_generator(const SL2Element& t0, const std::string& label);
/// pi(v, 0) B, re-normalized in phase.
OrthonormalBasis translate_basis(const OrthonormalBasis& basis, const Fp& tau, const Fp& w);

class Dictionary {
 public:
  Dictionary(std::uint32_t p, DictionaryKind kind, double mu, std::vector<OrthonormalBasis> bases);

  std::uint32_t p() const noexcept { return p_; }
  DictionaryKind kind() const noexcept { return kind_; }
  double mu() const noexcept { return mu_; }
  const std::vector<OrthonormalBasis>& bases() const noexcept { return bases_; }
  std::size_t basis_count() const noexcept { return bases_.size(); }
  std::size_t atom_count() const noexcept { return bases_.size() * p_; }
  std::size_t basis_of(std::size_t atom) const noexcept { return atom / p_; }
  std::span<const cplx> atom(std::size_t index) const noexcept {
    return bases_[index / p_].atom(index % p_);
  }

 private:
  std::uint32_t p_;
  DictionaryKind kind_;
  double mu_;
  std::vector<OrthonormalBasis> bases_;
};

struct BuildOptions {
  /// Exhaustive pair scan against mu / sqrt(p) + 1e-9 after construction.
  bool verify_coherence = true;
};

Dictionary build_heisenberg_dict(std::uint32_t p, BuildOptions options = {});
Dictionary build_oscillator_dict(std::uint32_t p, BuildOptions options = {});

struct TranslationSubsample {
  std::size_t count;
  std::uint64_t seed;
};

struct ExtendedOptions {
  /// Keep only `count` translations v (seeded, without replacement).
  std::optional<TranslationSubsample> subsample;
  /// Full construction above p = 5 must be requested explicitly.
  bool allow_full = false;
  bool verify_coherence = true;
};

Dictionary build_extended_oscillator_dict(std::uint32_t p, const ExtendedOptions& options = {});

/// Translations v = (tau, w) retained by build_extended_oscillator_dict.
std::vector<std::pair<Fp, Fp>> extended_translations(std::uint32_t p, const ExtendedOptions& options);

struct CoherenceReport {
  std::uint32_t p = 0;
  DictionaryKind kind = DictionaryKind::heisenberg;
  double mu = 0.0;
  std::size_t basis_count = 0;
  std::uint64_t cross_pairs = 0;       // atom pairs from distinct bases examined
  double cross_max = 0.0;              // max sqrt(p) |<phi, varphi>|
  double cross_min = 0.0;              // min sqrt(p) |<phi, varphi>|
  double within_basis_max_deviation = 0.0;
  double histogram_bin_width = 0.1;    // bins centred on 0, w, 2w, ...
  std::vector<std::uint64_t> histogram;
  std::uint64_t histogram_overflow = 0;
  bool sampled = false;
  std::uint64_t sample_seed = 0;
  bool vacuous = false;                // fewer than two bases: nothing to compare
  bool pass = false;                   // cross_max <= mu + sqrt(p) * 1e-9
};

CoherenceReport coherence_report(const Dictionary& dict);
/// Same statistics over `pair_count` random atom pairs from distinct bases.
CoherenceReport sampled_coherence_report(const Dictionary& dict, std::size_t pair_count,
                                         std::uint64_t seed);

/// Theta(f) = sum_phi f(phi) phi.
std::vector<cplx> resolve(std::span<const cplx> coefficients, const Dictionary& dict);

/// Split-torus check: for the diagonal torus with generator diag(g, 1/g), g a
/// primitive root, each phi_chi(t) = chi(t) / sqrt(p - 1) (t != 0), chi != sigma,
/// is an eigenvector of S_g. Returns the largest eigen-residual over the p - 2
/// functions together with their max orthonormality defect.
struct SplitTorusCheck {
  std::size_t vector_count;
  double max_residual;
  double orthonormality_defect;
};
SplitTorusCheck split_torus_check(std::uint32_t p);

std::uint32_t primitive_root(std::uint32_t p);

}  // namespace srip
