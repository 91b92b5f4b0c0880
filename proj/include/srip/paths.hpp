/**
 * @file paths.hpp
 * @brief Closed paths, their isomorphism classes, and exact path expectations.
 *
 * A path of length k is a vertex sequence (v_0, ..., v_k). It is closed when
 * v_0 = v_k and strict when consecutive vertices differ. For a support S the
 * weight is w(S) = prod_j <S(v_j), S(v_{j+1})>, which is the (v_j, v_{j+1})
 * Gram entry product. Classes are stored as first-visit tuples: vertex 1 is
 * v_0, and every new vertex gets the next unused number.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srip/dictionaries.hpp"
#include "srip/linalg.hpp"

namespace srip {

inline constexpr unsigned kMaxPathLength = 10;
inline constexpr unsigned kMaxClassVertices = 4;
inline constexpr std::size_t kMaxEnumerationAtoms = 400;

using Path = std::vector<unsigned>;

/// First-visit relabeling of any vertex sequence; labels become 1, 2, ...
Path canonicalize(std::span<const unsigned> path);

bool is_closed(std::span<const unsigned> path) noexcept;
bool is_strict(std::span<const unsigned> path) noexcept;

struct PathClass {
  Path canonical;  // tau_0 .. tau_k
  unsigned vertex_count = 0;
  bool is_tree = false;

  unsigned length() const noexcept { return static_cast<unsigned>(canonical.size()) - 1; }
  std::string to_string() const;  // "(1,2,1)"
  friend bool operator==(const PathClass& a, const PathClass& b) { return a.canonical == b.canonical; }
  friend auto operator<=>(const PathClass& a, const PathClass& b) { return a.canonical <=> b.canonical; }
};

/// Class of a labeled strict closed path. Throws InvalidArgument otherwise.
PathClass make_class(std::span<const unsigned> path);

/// Every class of length k, lexicographic. Throws BudgetExceeded for k > 10.
std::vector<PathClass> enumerate_classes(unsigned k);

struct EdgeCrossing {
  unsigned a, b;  // a < b
  unsigned forward;   // crossings a -> b
  unsigned backward;  // crossings b -> a
};

struct GraphFacts {
  unsigned vertex_count = 0;
  std::vector<EdgeCrossing> edges;  // sorted by (a, b)
  bool connected = true;
  bool underlying_tree = false;  // |E| = |V| - 1
  bool is_tree = false;          // and every edge crossed once each way
};

GraphFacts classify(const PathClass& pc);

struct DyckWord {
  std::vector<int> letters;  // +1 / -1

  /// Prefix sums nonnegative and total sum zero.
  bool valid() const noexcept;
  std::string to_string() const;  // "+-" style
  friend bool operator==(const DyckWord&, const DyckWord&) = default;
};

/// d_i = +1 iff tau_i is visited for the first time. Throws NotATree.
DyckWord to_dyck(const PathClass& tree);
/// Inverse of to_dyck. Throws InvalidArgument for an invalid word.
PathClass from_dyck(const DyckWord& word);

/// Exact |[gamma]| = n (n-1) ... (n - |V| + 1); zero when |V| > n.
double class_size(unsigned vertex_count, std::uint64_t n);
/// p^(k/2) n^(|V| - 1 - k/2).
double n_tau(const PathClass& pc, double n, double p);

/// Average of w over every injective assignment of the path's vertices into
/// the dictionary. The path must be closed; it need not be strict, and its
/// labels need not be canonical. Throws BudgetExceeded when |V| > 4 or the
/// number of assignments exceeds 400 * 399 * 398 * 397.
cplx exact_Ew(std::span<const unsigned> path, const Dictionary& dict);
inline cplx exact_Ew(const PathClass& pc, const Dictionary& dict) { return exact_Ew(pc.canonical, dict); }

/// Sum over classes of length k of n^-1 (p/n)^(k/2) |[tau]| E w_tau, which is
/// the exact expectation of (1/n) Tr(E^k) for a uniform support of size n.
cplx exact_moment(unsigned k, const Dictionary& dict, std::size_t n);

struct EstimateRow {
  std::string class_label;
  std::uint32_t p;
  std::size_t n;
  double n_tau;
  cplx ew;
  cplx value;  // n_tau * E w
};

struct EstimateTrajectory {
  PathClass pc;
  std::vector<EstimateRow> rows;  // one per p, ladder order
  bool monotone_toward_limit = false;  // trees increase to 1, others shrink in magnitude
};

/// n is floor(p^(1 - epsilon)) for each ladder dictionary.
std::vector<EstimateTrajectory> fundamental_estimate_table(const std::vector<const Dictionary*>& ladder,
                                                           const std::vector<PathClass>& classes, double epsilon);

/// Sum over all strict closed paths of length k on [0, n) of prod M(v_j, v_{j+1}),
/// computed class by class over injective labelings.
cplx path_sum(const CMatrix& m, unsigned k);
/// The same sum by brute force over all n^k vertex sequences.
cplx path_sum_bruteforce(const CMatrix& m, unsigned k);

/// Number of positions j in [0, k) with tau_j = v.
unsigned visit_count(const PathClass& pc, unsigned v);

/// gamma with the once-visited vertex v deleted. Neighbours v_l != v_r give a
/// path of length k - 1; v_l = v_r are merged into one visit (length k - 2).
/// Labels are kept, so the result is generally not canonical.
Path delete_vertex(const PathClass& pc, unsigned v);
/// gamma with the once-visited vertex v replaced by u.
Path substitute_vertex(const PathClass& pc, unsigned v, unsigned u);

struct CompletenessCheck {
  std::size_t samples = 0;
  double max_residual = 0.0;
};

/// For sampled injective S on V minus {v}, compares sum over b in D of
/// w(S + b) with |X| w_{gamma without v}(S). Throws VertexNotSingleVisit.
CompletenessCheck completeness_identity_check(const PathClass& pc, unsigned v, const Dictionary& dict,
                                              std::size_t sample_count, std::uint64_t seed);

struct RelationGap {
  cplx lhs;            // E w_gamma
  cplx rhs;            // p^-1 E w_{gamma without v} - (p |X|)^-1 sum_u E w_{gamma_u}
  cplx exact_rhs;      // same with p |X| replaced by |D| - |V| + 1
  double relative_gap; // |lhs - rhs| / |lhs|
};

RelationGap relation_gap(const PathClass& pc, unsigned v, const Dictionary& dict);

/// Pairs of strict closed k-paths sharing a vertex are joined by splicing
/// gamma_2 in at the first vertex of gamma_1 that gamma_2 also visits.
Path concat(std::span<const unsigned> g1, std::span<const unsigned> g2);

std::string classes_csv(const std::vector<PathClass>& classes);
std::string estimates_csv(const std::vector<EstimateTrajectory>& table);

}  // namespace srip
