#include <doctest.h>

#include <cmath>

#include "srip/error.hpp"
#include "srip/linalg.hpp"
#include "srip/rng.hpp"

using namespace srip;

namespace {

CMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx z(rng.normal(), rng.normal());
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

CMatrix diag(const std::vector<double>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

}  // namespace

TEST_CASE("2x2 Hermitian eigenvalues match the closed form") {
  // [[a, z], [conj z, d]] has eigenvalues (a+d)/2 +- sqrt(((a-d)/2)^2 + |z|^2)
  CMatrix m(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.25;
  m(0, 1) = cplx(0.3, -0.8);
  m(1, 0) = std::conj(m(0, 1));
  const double mid = 0.625, rad = std::sqrt(0.875 * 0.875 + 0.73);
  const auto ev = hermitian_eigenvalues(m);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(mid + rad).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(mid - rad).epsilon(1e-14));
}

TEST_CASE("Jacobi decomposition reconstructs random Hermitian matrices") {
  for (std::size_t n : {1u, 3u, 8u, 25u}) {
    const CMatrix a = random_hermitian(n, 100 + n);
    const auto eig = hermitian_eig(a);
    CHECK(unitarity_defect(eig.eigenvectors) < 1e-12);
    const CMatrix rebuilt = eig.eigenvectors * diag(eig.eigenvalues) * eig.eigenvectors.adjoint();
    CHECK((rebuilt - a).max_abs() < 1e-11);
    for (std::size_t i = 1; i < n; ++i) CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);
    // trace is preserved
    double tr = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += a(i, i).real();
    for (const double x : eig.eigenvalues) sum += x;
    CHECK(sum == doctest::Approx(tr).epsilon(1e-12));
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), Error);
  try {
    hermitian_eigenvalues(m);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotHermitian);
  }
}

TEST_CASE("trace_power agrees with matrix powers") {
  const CMatrix a = random_hermitian(6, 7);
  CMatrix pw = a;
  for (unsigned k = 1; k <= 5; ++k) {
    cplx tr{};
    for (std::size_t i = 0; i < 6; ++i) tr += pw(i, i);
    CHECK(trace_power(a, k) == doctest::Approx(tr.real()).epsilon(1e-10));
    pw = pw * a;
  }
  CHECK_THROWS_AS(trace_power(a, 0), Error);
}

TEST_CASE("operator norm of a diagonal matrix") {
  CHECK(op_norm(diag({0.5, -3.0, 2.0})) == doctest::Approx(3.0));
}

TEST_CASE("gram matrix conventions") {
  std::vector<std::vector<cplx>> v{{1.0, 0.0}, {cplx(0, 1) / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}};
  const CMatrix g = gram(v);
  CHECK(g(0, 0) == cplx(1.0));
  CHECK(std::abs(g(0, 1) - inner(v[0], v[1])) < 1e-15);
  CHECK(std::abs(g(0, 1) - cplx(0, -1) / std::sqrt(2.0)) < 1e-15);  // <f, g> conjugates g
  CHECK(g(1, 0) == std::conj(g(0, 1)));
  CHECK(hermitian_defect(g) == 0.0);
}

TEST_CASE("unitary eigenbasis of a diagonal unitary") {
  // eigenvalues e^{i theta}, theta = 0.1, 2.0, 4.0 placed out of order
  const std::vector<double> th{2.0, 0.1, 4.0};
  CMatrix u(3, 3);
  for (std::size_t i = 0; i < 3; ++i) u(i, i) = std::polar(1.0, th[i]);
  const auto eig = unitary_eigenbasis(u);
  // descending phase: 4.0, 2.0, 0.1
  CHECK(std::abs(eig.eigenvalues[0] - std::polar(1.0, 4.0)) < 1e-10);
  CHECK(std::abs(eig.eigenvalues[1] - std::polar(1.0, 2.0)) < 1e-10);
  CHECK(std::abs(eig.eigenvalues[2] - std::polar(1.0, 0.1)) < 1e-10);
  CHECK(std::abs(eig.vectors(2, 0) - 1.0) < 1e-10);
  CHECK(std::abs(eig.vectors(0, 1) - 1.0) < 1e-10);
  CHECK(std::abs(eig.vectors(1, 2) - 1.0) < 1e-10);
}

TEST_CASE("unitary eigenbasis rejects a degenerate spectrum") {
  CMatrix u = CMatrix::identity(3);
  u(2, 2) = -1.0;
  try {
    unitary_eigenbasis(u);
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateSpectrum);
  }
}

TEST_CASE("normalize_phase") {
  std::vector<cplx> v{cplx(0.1, 0.1), cplx(0, -0.8), cplx(0.3, 0)};
  normalize_phase(v);
  CHECK(std::abs(v[1] - 0.8) < 1e-15);
  CHECK(norm(v) == doctest::Approx(std::sqrt(0.02 + 0.64 + 0.09)));
  // ties: the lowest index wins
  std::vector<cplx> w{cplx(0, 1), cplx(-1, 0)};
  normalize_phase(w);
  CHECK(std::abs(w[0] - 1.0) < 1e-15);
  CHECK(std::abs(w[1] - cplx(0, 1)) < 1e-15);
}
