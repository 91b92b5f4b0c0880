#include "srip/repn.hpp"

#include <cmath>

#include "srip/error.hpp"

namespace srip {

Fp symplectic_form(const Fp& tau, const Fp& w, const Fp& tau2, const Fp& w2) {
  return tau * w2 - w * tau2;
}

HeisenbergElement HeisenbergElement::operator*(const HeisenbergElement& o) const {
  const std::uint32_t p = modulus();
  const Fp half = Fp(2, p).inverse();
  return {tau + o.tau, w + o.w, z + o.z + half * symplectic_form(tau, w, o.tau, o.w)};
}

HeisenbergElement HeisenbergElement::inverse() const { return {-tau, -w, -z}; }

SL2Element::SL2Element(const Fp& a, const Fp& b, const Fp& c, const Fp& d) : a_(a), b_(b), c_(c), d_(d) {
  if ((a * d - b * c).value() != 1) {
    throw Error(Errc::NotUnimodular, "det != 1 for " + to_string());
  }
}

SL2Element::SL2Element(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::uint32_t p)
    : SL2Element(Fp(a, p), Fp(b, p), Fp(c, p), Fp(d, p)) {}

SL2Element SL2Element::operator*(const SL2Element& o) const {
  return SL2Element(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                    c_ * o.b_ + d_ * o.d_);
}

SL2Element SL2Element::inverse() const { return SL2Element(d_, -b_, -c_, a_); }

SL2Element SL2Element::pow(std::uint64_t e) const {
  SL2Element result = identity(modulus());
  SL2Element base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

bool SL2Element::is_identity() const noexcept {
  return a_.value() == 1 && b_.is_zero() && c_.is_zero() && d_.value() == 1;
}

HeisenbergElement SL2Element::act(const HeisenbergElement& h) const {
  return {a_ * h.tau + b_ * h.w, c_ * h.tau + d_ * h.w, h.z};
}

std::string SL2Element::to_string() const {
  return "[[" + std::to_string(a_.value()) + "," + std::to_string(b_.value()) + "],[" +
         std::to_string(c_.value()) + "," + std::to_string(d_.value()) + "]]";
}

std::uint64_t order(const SL2Element& g) {
  SL2Element x = g;
  const std::uint64_t p = g.modulus();
  for (std::uint64_t k = 1; k <= p * p * p; ++k) {
    if (x.is_identity()) return k;
    x = x * g;
  }
  throw Error(Errc::InvalidArgument, "order search did not terminate");
}

namespace {

std::string heis_label(const HeisenbergElement& h) {
  return "(" + std::to_string(h.tau.value()) + "," + std::to_string(h.w.value()) + "," +
         std::to_string(h.z.value()) + ")";
}

}  // namespace

UnitaryOp heis_op(const HeisenbergElement& h) {
  const std::uint32_t p = h.modulus();
  const CharacterTable chi(p);
  const Fp half = Fp(2, p).inverse();
  // pi(tau, w, z) = psi(z - tau w / 2) pi(tau, 0) pi(0, w); row t has a single
  // entry in column t + tau.
  const Fp base = h.z - half * h.tau * h.w;
  CMatrix m(p, p);
  for (std::uint32_t t = 0; t < p; ++t) {
    const Fp shifted = Fp(t, p) + h.tau;
    m(t, shifted.value()) = chi(base + h.w * shifted);
  }
  return {std::move(m), OperatorKind::heisenberg, heis_label(h)};
}

UnitaryOp weil_scaling(const Fp& a) {
  if (a.is_zero()) throw Error(Errc::ZeroScaling, "scaling by zero");
  const std::uint32_t p = a.modulus();
  const double sigma = legendre(a);
  const Fp a_inv = a.inverse();
  CMatrix m(p, p);
  for (std::uint32_t t = 0; t < p; ++t) m(t, (a_inv * Fp(t, p)).value()) = sigma;
  return {std::move(m), OperatorKind::weil, "S_" + std::to_string(a.value())};
}

UnitaryOp weil_chirp(const Fp& u) {
  const std::uint32_t p = u.modulus();
  const CharacterTable chi(p);
  const Fp coeff = -(u * Fp(2, p).inverse());
  CMatrix m(p, p);
  for (std::uint32_t t = 0; t < p; ++t) {
    const Fp x(t, p);
    m(t, t) = chi(coeff * x * x);
  }
  return {std::move(m), OperatorKind::weil, "M_" + std::to_string(u.value())};
}

UnitaryOp weil_fourier(std::uint32_t p) {
  const CharacterTable chi(p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  CMatrix m(p, p);
  for (std::uint32_t w = 0; w < p; ++w) {
    for (std::uint32_t t = 0; t < p; ++t) {
      m(w, t) = scale * chi(static_cast<std::int64_t>(w) * t);
    }
  }
  return {std::move(m), OperatorKind::weil, "F"};
}

UnitaryOp weil_op(const SL2Element& g) {
  const std::uint32_t p = g.modulus();
  require_field_prime(p);
  const CharacterTable chi(p);
  const Fp half = Fp(2, p).inverse();
  CMatrix m(p, p);

  if (!g.b().is_zero()) {
    // S_b M_{bd} F M_{a/b}, entry (x, t) with y = x / b:
    //   sigma(b) p^(-1/2) psi(-(bd/2) y^2 + y t - (a/(2b)) t^2)
    const Fp b_inv = g.b().inverse();
    const Fp chirp_out = -(half * g.b() * g.d());
    const Fp chirp_in = -(half * g.a() * b_inv);
    const double amp = legendre(g.b()) / std::sqrt(static_cast<double>(p));
    for (std::uint32_t x = 0; x < p; ++x) {
      const Fp y = b_inv * Fp(x, p);
      const Fp outer = chirp_out * y * y;
      for (std::uint32_t t = 0; t < p; ++t) {
        const Fp tt(t, p);
        m(x, t) = amp * chi(outer + y * tt + chirp_in * tt * tt);
      }
    }
  } else {
    // M_{c/a} S_a, entry (x, x / a) = sigma(a) psi(-(c/(2a)) x^2)
    const Fp a_inv = g.a().inverse();
    const Fp chirp = -(half * g.c() * a_inv);
    const double sigma = legendre(g.a());
    for (std::uint32_t x = 0; x < p; ++x) {
      const Fp xx(x, p);
      m(x, (a_inv * xx).value()) = sigma * chi(chirp * xx * xx);
    }
  }
  return {std::move(m), OperatorKind::weil, g.to_string()};
}

UnitaryOp jacobi_op(const SL2Element& g, const HeisenbergElement& h) {
  if (g.modulus() != h.modulus()) throw Error(Errc::InvalidArgument, "mixed moduli in Jacobi element");
  UnitaryOp rho = weil_op(g);
  UnitaryOp pi = heis_op(h);
  return {rho.matrix * pi.matrix, OperatorKind::jacobi, g.to_string() + heis_label(h)};
}

JacobiElement JacobiElement::operator*(const JacobiElement& o) const {
  return {g * o.g, o.g.inverse().act(h) * o.h};
}

CMatrix normalize_global_phase(const CMatrix& m) {
  double largest = 0.0;
  for (const auto& x : m.data()) largest = std::max(largest, std::abs(x));
  if (largest == 0.0) return m;
  std::size_t pivot = 0;
  while (std::abs(m.data()[pivot]) < largest - 1e-9) ++pivot;
  const cplx v = m.data()[pivot];
  return m * (std::conj(v) / std::abs(v));
}

}  // namespace srip
