#include <doctest.h>

#include <cmath>
#include <set>

#include "srip/dictionaries.hpp"
#include "srip/error.hpp"

using namespace srip;

namespace {

// Residual of v as an eigenvector of u: || u v - <u v, v> v ||.
double eigen_residual(const CMatrix& u, std::span<const cplx> v) {
  const auto uv = u.apply(v);
  const cplx lambda = inner(uv, v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r += std::norm(uv[i] - lambda * v[i]);
  return std::sqrt(r);
}

// Independent torus count: the cyclic subgroups generated by elements of order p + 1.
std::size_t count_order_p_plus_1_subgroups(std::uint32_t p) {
  std::set<std::set<SL2Element>> groups;
  for (std::uint32_t a = 0; a < p; ++a) {
    for (std::uint32_t b = 0; b < p; ++b) {
      for (std::uint32_t c = 0; c < p; ++c) {
        for (std::uint32_t d = 0; d < p; ++d) {
          if ((static_cast<std::uint64_t>(a) * d + static_cast<std::uint64_t>(p - b) * c) % p != 1) continue;
          const SL2Element g(a, b, c, d, p);
          if (order(g) != p + 1) continue;
          std::set<SL2Element> h;
          SL2Element x = g;
          for (std::uint32_t i = 0; i <= p; ++i, x = x * g) h.insert(x);
          groups.insert(h);
        }
      }
    }
  }
  return groups.size();
}

}  // namespace

TEST_CASE("lines through the origin") {
  const auto ls = lines(7);
  REQUIRE(ls.size() == 8);
  CHECK(ls.front().label() == "line:m=0");
  CHECK(ls.back().is_vertical());
  CHECK(ls.back().label() == "line:inf");
}

TEST_CASE("Heisenberg bases are eigenbases of their lines") {
  const std::uint32_t p = 7;
  for (const auto& line : lines(p)) {
    const auto basis = heisenberg_basis(line);
    CHECK(basis.size() == p);
    CHECK(basis.orthonormality_defect() < 1e-12);
    const auto op = heis_op(line.direction()).matrix;
    for (std::size_t i = 0; i < p; ++i) CHECK(eigen_residual(op, basis.atom(i)) < 1e-10);
  }
  // the vertical line is the delta basis in natural order
  const auto delta = heisenberg_basis(lines(p).back());
  CHECK((delta.atoms() - CMatrix::identity(p)).max_abs() == 0.0);
}

TEST_CASE("D_H counts and coherence") {
  for (std::uint32_t p : {5u, 7u}) {
    const auto d = build_heisenberg_dict(p);
    CHECK(d.basis_count() == p + 1);
    CHECK(d.atom_count() == p * (p + 1));  // 30 and 56
    CHECK(d.mu() == 1.0);
    const auto r = coherence_report(d);
    CHECK(r.pass);
    CHECK(r.cross_max == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.cross_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.cross_pairs == static_cast<std::uint64_t>(p * (p + 1) / 2) * p * p);
    CHECK(r.within_basis_max_deviation < 1e-12);
  }
}

TEST_CASE("non-split tori") {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const auto tori = nonsplit_tori(p);
    CHECK(tori.size() == expected_nonsplit_torus_count(p));
    for (const auto& t : tori) {
      CHECK(t.elements.size() == p + 1);
      CHECK(order(t.generator) == p + 1);
    }
  }
  CHECK(expected_nonsplit_torus_count(5) == 10);
  CHECK(expected_nonsplit_torus_count(7) == 21);
  CHECK(expected_nonsplit_torus_count(11) == 55);
  // brute-force oracle over all of SL2
  CHECK(count_order_p_plus_1_subgroups(5) == 10);
  CHECK(count_order_p_plus_1_subgroups(7) == 21);
}

TEST_CASE("oscillator bases diagonalize their torus") {
  const std::uint32_t p = 7;
  const auto tori = nonsplit_tori(p);
  for (std::size_t i = 0; i < tori.size(); i += 5) {
    const auto basis = oscillator_basis(tori[i]);
    CHECK(basis.orthonormality_defect() < 1e-10);
    CHECK(basis.label().rfind("torus:", 0) == 0);
    for (const auto& g : tori[i].elements) {
      const auto op = weil_op(g).matrix;
      for (std::size_t a = 0; a < p; ++a) CHECK(eigen_residual(op, basis.atom(a)) < 1e-9);
    }
  }
}

TEST_CASE("D_O coherence bound") {
  const auto d = build_oscillator_dict(5);
  CHECK(d.basis_count() == 10);
  CHECK(d.atom_count() == 50);
  CHECK(d.mu() == 4.0);
  const auto r = coherence_report(d);
  CHECK(r.pass);
  CHECK(r.cross_max <= 4.0);
}

TEST_CASE("extended dictionary translations") {
  ExtendedOptions opt;
  CHECK(extended_translations(5, opt).size() == 25);
  CHECK_THROWS_AS(extended_translations(7, opt), Error);
  opt.subsample = TranslationSubsample{6, 9};
  const auto a = extended_translations(7, opt);
  const auto b = extended_translations(7, opt);
  CHECK(a.size() == 6);
  CHECK(a == b);
  std::set<std::pair<std::uint32_t, std::uint32_t>> distinct;
  for (const auto& [t, w] : a) distinct.insert({t.value(), w.value()});
  CHECK(distinct.size() == 6);

  ExtendedOptions small;
  small.subsample = TranslationSubsample{3, 1};
  const auto d = build_extended_oscillator_dict(5, small);
  CHECK(d.basis_count() == 30);
  const auto r = sampled_coherence_report(d, 2000, 5);
  CHECK(r.sampled);
  CHECK(r.pass);
  CHECK(r.cross_pairs == 2000);
}

TEST_CASE("translated basis is the pi(v) image") {
  const std::uint32_t p = 5;
  const auto base = oscillator_basis(nonsplit_tori(p)[0]);
  const auto moved = translate_basis(base, Fp(2, p), Fp(3, p));
  CHECK(moved.orthonormality_defect() < 1e-12);
  const auto op = heis_op({Fp(2, p), Fp(3, p), Fp(0, p)}).matrix;
  for (std::size_t i = 0; i < p; ++i) {
    const auto image = op.apply(base.atom(i));
    CHECK(std::abs(std::abs(inner(image, moved.atom(i))) - 1.0) < 1e-12);
  }
}

TEST_CASE("single-basis dictionary is vacuously coherent") {
  std::vector<OrthonormalBasis> one{heisenberg_basis(lines(5).back())};
  const Dictionary d(5, DictionaryKind::heisenberg, 1.0, std::move(one));
  const auto r = coherence_report(d);
  CHECK(r.vacuous);
  CHECK(r.cross_pairs == 0);
}

TEST_CASE("resolution map") {
  const auto d = build_heisenberg_dict(5);
  std::vector<cplx> coeffs(d.atom_count());
  coeffs[7] = 2.0;
  const auto f = resolve(coeffs, d);
  for (std::size_t t = 0; t < 5; ++t) CHECK(std::abs(f[t] - 2.0 * d.atom(7)[t]) < 1e-15);
  coeffs.pop_back();
  CHECK_THROWS_AS(resolve(coeffs, d), Error);
}

TEST_CASE("split torus and primitive roots") {
  CHECK(primitive_root(5) == 2);
  CHECK(primitive_root(7) == 3);
  CHECK(primitive_root(11) == 2);
  CHECK(primitive_root(13) == 2);
  const auto s = split_torus_check(7);
  CHECK(s.vector_count == 5);
  CHECK(s.max_residual < 1e-12);
  CHECK(s.orthonormality_defect < 1e-12);
}

TEST_CASE("kind names") {
  CHECK(parse_kind("oscillator") == DictionaryKind::oscillator);
  CHECK(kind_name(DictionaryKind::extended_oscillator) == "extended_oscillator");
  CHECK_THROWS_AS(parse_kind("gabor"), Error);
}

TEST_CASE("invalid primes are rejected") {
  CHECK_THROWS_AS(build_heisenberg_dict(4), Error);
  CHECK_THROWS_AS(build_oscillator_dict(9), Error);
}
