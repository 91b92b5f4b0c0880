/**
 * @file repn.hpp
 * @brief Heisenberg, Weil and Heisenberg-Weil operators as explicit p x p unitaries.
 *
 * Realization on C(F_p):
 *   pi(tau, 0) f(t) = f(t + tau)
 *   pi(0, w)   f(t) = psi(w t) f(t)
 *   pi(z)      f(t) = psi(z) f(t)
 *
 * Weil operators are fixed only up to a global unit scalar; every consumer in
 * this library (eigenspaces, coherence, Egorov conjugation) is phase-invariant.
 */
#pragma once

#include <cstdint>
#include <string>

#include "srip/ffield.hpp"
#include "srip/linalg.hpp"

namespace srip {

struct HeisenbergElement {
  Fp tau;
  Fp w;
  Fp z;

  static HeisenbergElement identity(std::uint32_t p) { return {Fp(0, p), Fp(0, p), Fp(0, p)}; }
  std::uint32_t modulus() const noexcept { return tau.modulus(); }

  /// (v, z)(v', z') = (v + v', z + z' + omega(v, v') / 2).
  HeisenbergElement operator*(const HeisenbergElement& o) const;
  HeisenbergElement inverse() const;

  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

/// omega((tau, w), (tau', w')) = tau w' - w tau'.
Fp symplectic_form(const Fp& tau, const Fp& w, const Fp& tau2, const Fp& w2);

class SL2Element {
 public:
  /// Throws NotUnimodular unless ad - bc = 1.
  SL2Element(const Fp& a, const Fp& b, const Fp& c, const Fp& d);
  SL2Element(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::uint32_t p);

  static SL2Element identity(std::uint32_t p) { return SL2Element(1, 0, 0, 1, p); }
  /// The Weyl element [[0, 1], [-1, 0]].
  static SL2Element weyl(std::uint32_t p) { return SL2Element(0, 1, -1, 0, p); }

  const Fp& a() const noexcept { return a_; }
  const Fp& b() const noexcept { return b_; }
  const Fp& c() const noexcept { return c_; }
  const Fp& d() const noexcept { return d_; }
  std::uint32_t modulus() const noexcept { return a_.modulus(); }

  SL2Element operator*(const SL2Element& o) const;
  SL2Element inverse() const;
  SL2Element pow(std::uint64_t e) const;
  bool is_identity() const noexcept;

  /// Tautological action on the V-coordinate of a Heisenberg element.
  HeisenbergElement act(const HeisenbergElement& h) const;

  std::string to_string() const;

  friend bool operator==(const SL2Element&, const SL2Element&) = default;
  friend auto operator<=>(const SL2Element& x, const SL2Element& y) noexcept {
    if (auto c = x.a_ <=> y.a_; c != 0) return c;
    if (auto c = x.b_ <=> y.b_; c != 0) return c;
    if (auto c = x.c_ <=> y.c_; c != 0) return c;
    return x.d_ <=> y.d_;
  }

 private:
  Fp a_, b_, c_, d_;
};

/// Multiplicative order in SL_2(F_p).
std::uint64_t order(const SL2Element& g);

enum class OperatorKind { heisenberg, weil, jacobi };

struct UnitaryOp {
  CMatrix matrix;
  OperatorKind kind;
  std::string element;  // human-readable group element
};

UnitaryOp heis_op(const HeisenbergElement& h);

/// S_a f(t) = sigma(a) f(a^-1 t). Throws ZeroScaling for a = 0.
UnitaryOp weil_scaling(const Fp& a);
/// M_u f(t) = psi(-(u/2) t^2) f(t).
UnitaryOp weil_chirp(const Fp& u);
/// F f(w) = p^(-1/2) sum_t psi(w t) f(t).
UnitaryOp weil_fourier(std::uint32_t p);

/// rho(g) up to a global phase, assembled from the Bruhat factorization
///   b != 0:  g = diag(b, 1/b) u(bd) w u(a/b)
///   b == 0:  g = u(c/a) diag(a, 1/a)
/// with u(s) = [[1, 0], [s, 1]].
UnitaryOp weil_op(const SL2Element& g);

/// tau(g, h) = rho(g) pi(h).
UnitaryOp jacobi_op(const SL2Element& g, const HeisenbergElement& h);

/// Element of the Jacobi group Sp x| H with the law matching tau:
/// (g1, h1)(g2, h2) = (g1 g2, (g2^-1 h1) h2).
struct JacobiElement {
  SL2Element g;
  HeisenbergElement h;
  JacobiElement operator*(const JacobiElement& o) const;
};

/// Scales m by the unit phase that makes its largest entry real positive.
CMatrix normalize_global_phase(const CMatrix& m);

}  // namespace srip
