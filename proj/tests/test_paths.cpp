#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "srip/error.hpp"
#include "srip/paths.hpp"
#include "srip/rng.hpp"
#include "srip/spectra.hpp"

using namespace srip;

namespace {

// Every strict closed labeled path of length k on [1, n], by odometer.
template <typename F>
void for_each_labeled(unsigned k, unsigned n, F&& f) {
  Path v(k, 1);
  for (;;) {
    Path closed = v;
    closed.push_back(v[0]);
    if (is_strict(closed)) f(closed);
    unsigned pos = 0;
    while (pos < k && ++v[pos] > n) v[pos++] = 1;
    if (pos == k) return;
  }
}

std::vector<DyckWord> all_dyck_words(unsigned m) {
  std::vector<DyckWord> out;
  for (unsigned mask = 0; mask < (1u << (2 * m)); ++mask) {
    DyckWord w;
    for (unsigned i = 0; i < 2 * m; ++i) w.letters.push_back((mask >> i) & 1u ? 1 : -1);
    if (w.valid()) out.push_back(w);
  }
  return out;
}

CMatrix random_zero_diag_hermitian(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = cplx(rng.normal(), rng.normal());
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

Dictionary single_basis(std::uint32_t p) {
  std::vector<OrthonormalBasis> one{build_heisenberg_dict(p).bases()[1]};
  return Dictionary(p, DictionaryKind::heisenberg, 1.0, std::move(one));
}

PathClass cls(std::initializer_list<unsigned> v) { return make_class(Path(v)); }

}  // namespace

TEST_CASE("canonical form") {
  CHECK(canonicalize(Path{7, 3, 9, 7, 3, 7}) == Path{1, 2, 3, 1, 2, 1});
  CHECK(cls({4, 8, 4}).to_string() == "(1,2,1)");
  CHECK_THROWS_AS(make_class(Path{1, 1, 2, 1}), Error);  // not strict
  CHECK_THROWS_AS(make_class(Path{1, 2, 3}), Error);     // not closed
}

TEST_CASE("class enumeration") {
  const auto k2 = enumerate_classes(2);
  REQUIRE(k2.size() == 1);
  CHECK(k2[0].canonical == Path{1, 2, 1});
  const auto k5 = enumerate_classes(5);
  CHECK(std::find(k5.begin(), k5.end(), cls({1, 2, 3, 1, 2, 1})) != k5.end());
  CHECK_THROWS_AS(enumerate_classes(11), Error);
  try {
    enumerate_classes(11);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BudgetExceeded);
  }
  for (unsigned k = 2; k <= 10; ++k) {
    const auto cs = enumerate_classes(k);
    CHECK(std::is_sorted(cs.begin(), cs.end()));
    CHECK(std::adjacent_find(cs.begin(), cs.end()) == cs.end());
    for (const auto& pc : cs) {
      CHECK(pc.length() == k);
      CHECK(pc.canonical.front() == 1);
      CHECK(is_closed(pc.canonical));
      CHECK(is_strict(pc.canonical));
      unsigned mx = 0;
      for (const unsigned t : pc.canonical) {
        CHECK(t <= mx + 1);
        mx = std::max(mx, t);
      }
    }
  }
}

TEST_CASE("class counts match labeled brute force") {
  for (unsigned k = 2; k <= 6; ++k) {
    std::set<Path> seen;
    for_each_labeled(k, k, [&](const Path& p) { seen.insert(canonicalize(p)); });
    CHECK(seen.size() == enumerate_classes(k).size());
  }
}

TEST_CASE("enumeration completeness against class sizes") {
  for (unsigned k = 2; k <= 6; ++k) {
    for (unsigned n = 1; n <= 8; ++n) {
      std::uint64_t labeled = 0;
      for_each_labeled(k, n, [&](const Path&) { ++labeled; });
      double by_class = 0.0;
      for (const auto& pc : enumerate_classes(k)) by_class += class_size(pc.vertex_count, n);
      CHECK(static_cast<double>(labeled) == by_class);
    }
  }
}

TEST_CASE("class sizes") {
  CHECK(class_size(3, 10) == 720.0);
  std::uint64_t count = 0;
  const Path target{1, 2, 3, 1, 2, 1};
  for_each_labeled(5, 10, [&](const Path& p) { count += canonicalize(p) == target; });
  CHECK(count == 720);
  CHECK(class_size(4, 3) == 0.0);
  CHECK(n_tau(cls({1, 2, 1}), 17.0, 31.0) == doctest::Approx(31.0));
  // non-tree with |V| - 1 - k/2 < 0 vanishes at n = p^(0.7)
  const auto c = cls({1, 2, 3, 1});
  const double small = n_tau(c, std::pow(1e6, 0.7), 1e6) / std::pow(1e6, 2.0);
  const double big = n_tau(c, std::pow(1e8, 0.7), 1e8) / std::pow(1e8, 2.0);
  CHECK(big < small);
}

TEST_CASE("graph facts") {
  const auto t = classify(cls({1, 2, 1}));
  CHECK(t.is_tree);
  CHECK(t.vertex_count == 2);
  CHECK_FALSE(classify(cls({1, 2, 3, 1})).is_tree);
  // a star crossed twice each way is a tree graph but not a tree path
  const auto twice = classify(cls({1, 2, 1, 2, 1}));
  CHECK(twice.underlying_tree);
  CHECK_FALSE(twice.is_tree);
  for (unsigned k = 2; k <= 8; ++k) {
    for (const auto& pc : enumerate_classes(k)) {
      if (pc.is_tree) CHECK(k == 2 * (pc.vertex_count - 1));
      if (k % 2 == 1) CHECK_FALSE(pc.is_tree);
    }
  }
}

TEST_CASE("tree counts are Catalan numbers and Dyck words biject") {
  for (unsigned m = 1; m <= 4; ++m) {
    std::vector<PathClass> trees;
    for (const auto& pc : enumerate_classes(2 * m)) {
      if (pc.is_tree) trees.push_back(pc);
    }
    CHECK(trees.size() == catalan(m));
    std::set<std::vector<int>> words;
    for (const auto& t : trees) {
      const auto w = to_dyck(t);
      CHECK(w.valid());
      CHECK(from_dyck(w) == t);
      words.insert(w.letters);
    }
    CHECK(words.size() == trees.size());
    const auto every = all_dyck_words(m);
    CHECK(every.size() == catalan(m));
    for (const auto& w : every) CHECK(to_dyck(from_dyck(w)) == w);
  }
  CHECK(to_dyck(cls({1, 2, 1})).letters == std::vector<int>{1, -1});
  CHECK(to_dyck(cls({1, 2, 1, 3, 1})).to_string() == "+-+-");
  CHECK(to_dyck(cls({1, 2, 3, 2, 1})).to_string() == "++--");
  CHECK_THROWS_AS(to_dyck(cls({1, 2, 3, 1})), Error);
  CHECK_THROWS_AS(from_dyck(DyckWord{{1, 1}}), Error);
  CHECK_THROWS_AS(from_dyck(DyckWord{{-1, 1}}), Error);
}

TEST_CASE("trace formula") {
  for (std::size_t n = 2; n <= 6; ++n) {
    const CMatrix m = random_zero_diag_hermitian(n, 40 + n);
    for (unsigned k = 2; k <= 5; ++k) {
      const cplx s = path_sum(m, k);
      CHECK(std::abs(s - path_sum_bruteforce(m, k)) < 1e-8);
      CHECK(std::abs(s.real() - trace_power(m, k)) < 1e-8);
      CHECK(std::abs(s.imag()) < 1e-8);
    }
  }
}

TEST_CASE("exact expectations on D_H") {
  for (std::uint32_t p : {5u, 7u}) {
    const auto d = build_heisenberg_dict(p);
    const double pp = p;
    const cplx e121 = exact_Ew(cls({1, 2, 1}), d);
    CHECK(std::abs(e121 - pp / (pp * pp + pp - 1)) < 1e-12);
    CHECK(std::abs(n_tau(cls({1, 2, 1}), 3.0, pp) * e121 - pp * pp / (pp * pp + pp - 1)) < 1e-12);
    const cplx e1231 = exact_Ew(cls({1, 2, 3, 1}), d);
    CHECK(std::abs(e1231 - (pp - 1) * pp / ((pp * pp + pp - 1) * (pp * pp + pp - 2))) < 1e-12);
  }
  const auto d5 = build_heisenberg_dict(5);
  CHECK(std::abs(exact_Ew(cls({1, 2, 1}), d5) - 5.0 / 29.0) < 1e-12);
}

TEST_CASE("single basis gives zero") {
  const auto d = single_basis(5);
  for (unsigned k = 2; k <= 4; ++k) {
    for (const auto& pc : enumerate_classes(k)) CHECK(std::abs(exact_Ew(pc, d)) == 0.0);
  }
}

TEST_CASE("relabeling invariance") {
  const auto d = build_heisenberg_dict(5);
  SplitMix64 rng(8);
  for (const auto& pc : enumerate_classes(4)) {
    const cplx base = exact_Ew(pc, d);
    for (int r = 0; r < 5; ++r) {
      std::vector<unsigned> labels(20);
      std::iota(labels.begin(), labels.end(), 1);
      for (std::size_t i = 0; i < 4; ++i) std::swap(labels[i], labels[i + rng.below(20 - i)]);
      Path relabeled;
      for (const unsigned t : pc.canonical) relabeled.push_back(labels[t - 1]);
      CHECK(std::abs(exact_Ew(relabeled, d) - base) < 1e-12);
    }
  }
}

TEST_CASE("enumeration budgets") {
  const auto d = build_heisenberg_dict(5);
  CHECK_THROWS_AS(exact_Ew(cls({1, 2, 3, 4, 5, 1}), d), Error);
  const auto big = build_heisenberg_dict(31);  // 992 atoms
  try {
    exact_Ew(cls({1, 2, 3, 4, 1}), big);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BudgetExceeded);
  }
}

TEST_CASE("exact second moment closed form") {
  const auto d = build_heisenberg_dict(11);
  const double p = 11, n = 5;
  CHECK(std::abs(exact_moment(2, d, 5) - (n - 1) / n * p * p / (p * p + p - 1)) < 1e-12);
  CHECK(exact_moment(1, d, 5) == cplx(0.0));
}

TEST_CASE("surgery") {
  CHECK(delete_vertex(cls({1, 2, 3, 2, 1}), 3) == Path{2, 1, 2});
  CHECK(delete_vertex(cls({1, 2, 3, 1}), 2) == Path{1, 3, 1});
  CHECK(delete_vertex(cls({1, 2, 1}), 2) == Path{1});
  CHECK(delete_vertex(cls({1, 2, 1}), 1) == Path{2});
  CHECK(substitute_vertex(cls({1, 2, 3, 1}), 3, 1) == Path{1, 2, 1, 1});
  CHECK(visit_count(cls({1, 2, 1, 3, 1}), 1) == 2);
  try {
    delete_vertex(cls({1, 2, 1, 3, 1}), 1);
    FAIL("expected VertexNotSingleVisit");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::VertexNotSingleVisit);
  }
}

TEST_CASE("completeness identity") {
  const auto d = build_heisenberg_dict(5);
  const auto r = completeness_identity_check(cls({1, 2, 3, 2, 1}), 3, d, 100, 7);
  CHECK(r.samples == 100);
  CHECK(r.max_residual <= 1e-8);
  // v_l != v_r branch
  CHECK(completeness_identity_check(cls({1, 2, 3, 1}), 2, d, 50, 8).max_residual <= 1e-8);
  const auto one = single_basis(5);
  CHECK(completeness_identity_check(cls({1, 2, 1}), 2, one, 20, 9).max_residual <= 1e-10);
  CHECK_THROWS_AS(completeness_identity_check(cls({1, 2, 1, 2, 1}), 2, d, 5, 1), Error);
}

TEST_CASE("recursion relation") {
  const auto pc = cls({1, 2, 3, 2, 1});
  double last = 1e9;
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const auto d = build_heisenberg_dict(p);
    const auto g = relation_gap(pc, 3, d);
    CHECK(std::abs(g.lhs - g.exact_rhs) < 1e-12);
    CHECK(g.relative_gap < last);
    last = g.relative_gap;
  }
}

TEST_CASE("splicing map") {
  const Path a{1, 2, 1}, b{2, 3, 2};
  const Path ab = concat(a, b);
  CHECK(ab == Path{1, 2, 3, 2, 1});
  // the map is not injective: both pairs splice to (a,b,a,b,a)
  CHECK(concat(Path{1, 2, 1}, Path{1, 2, 1}) == Path{1, 2, 1, 2, 1});
  CHECK(concat(Path{1, 2, 1}, Path{2, 1, 2}) == Path{1, 2, 1, 2, 1});
  CHECK_THROWS_AS(concat(Path{1, 2, 1}, Path{3, 4, 3}), Error);

  const CMatrix m = random_zero_diag_hermitian(4, 77);
  auto w = [&](const Path& p) {
    cplx prod{1.0, 0.0};
    for (std::size_t j = 0; j + 1 < p.size(); ++j) prod *= m(p[j] - 1, p[j + 1] - 1);
    return prod;
  };
  for (unsigned k = 2; k <= 4; ++k) {
    std::vector<Path> ps;
    for_each_labeled(k, 4, [&](const Path& p) { ps.push_back(p); });
    std::map<Path, std::size_t> fiber;
    for (const auto& g1 : ps) {
      for (const auto& g2 : ps) {
        const std::set<unsigned> v1(g1.begin(), g1.end());
        if (std::none_of(g2.begin(), g2.end(), [&](unsigned x) { return v1.count(x) > 0; })) continue;
        const Path s = concat(g1, g2);
        CHECK(s.size() == 2 * k + 1);
        CHECK(is_closed(s));
        CHECK(is_strict(s));
        CHECK(std::abs(w(s) - w(g1) * w(g2)) < 1e-9 * (1.0 + std::abs(w(s))));
        ++fiber[s];
      }
    }
    std::size_t worst = 0;
    for (const auto& [s, c] : fiber) worst = std::max(worst, c);
    CHECK(worst > 1);
    CHECK(worst <= static_cast<std::size_t>(k) * (k + 1));
  }
}

TEST_CASE("estimate table and CSV output") {
  const auto d5 = build_heisenberg_dict(5), d7 = build_heisenberg_dict(7);
  const auto table = fundamental_estimate_table({&d5, &d7}, {cls({1, 2, 1})}, 0.3);
  REQUIRE(table.size() == 1);
  CHECK(table[0].monotone_toward_limit);
  CHECK(std::abs(table[0].rows[0].value - 25.0 / 29.0) < 1e-12);
  const auto csv = estimates_csv(table);
  CHECK(csv.rfind("class,p,n,n_tau_Ew_real,n_tau_Ew_imag\n", 0) == 0);
  const auto classes = classes_csv(enumerate_classes(2));
  CHECK(classes == "canonical,k,vertex_count,is_tree,dyck\n1-2-1,2,2,true,+-\n");
}
