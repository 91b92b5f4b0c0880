#include "srip/ffield.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "srip/error.hpp"

namespace srip {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

void require_field_prime(std::uint64_t p) {
  if (p > std::numeric_limits<std::uint32_t>::max() || !is_prime(p)) {
    throw Error(Errc::InvalidArgument, "p = " + std::to_string(p) + " is not a supported prime");
  }
  if (p < 5) {
    // The Weil representation is not uniquely linearizable over F_3.
    throw Error(Errc::InvalidArgument, "p = " + std::to_string(p) + " is below the minimum of 5");
  }
}

Fp::Fp(std::int64_t value, std::uint32_t p) : p_(p) {
  if (p < 2) throw Error(Errc::InvalidArgument, "modulus must be >= 2");
  const auto m = static_cast<std::int64_t>(p);
  std::int64_t r = value % m;
  if (r < 0) r += m;
  value_ = static_cast<std::uint32_t>(r);
}

void Fp::check_same_field(const Fp& o) const {
  if (p_ != o.p_) throw Error(Errc::InvalidArgument, "mixed moduli in field arithmetic");
}

Fp Fp::operator+(const Fp& o) const {
  check_same_field(o);
  return Fp(static_cast<std::int64_t>(value_) + o.value_, p_);
}

Fp Fp::operator-(const Fp& o) const {
  check_same_field(o);
  return Fp(static_cast<std::int64_t>(value_) - o.value_, p_);
}

Fp Fp::operator*(const Fp& o) const {
  check_same_field(o);
  const std::uint64_t prod = static_cast<std::uint64_t>(value_) * o.value_;
  return Fp(static_cast<std::int64_t>(prod % p_), p_);
}

Fp Fp::operator-() const { return Fp(-static_cast<std::int64_t>(value_), p_); }

Fp Fp::pow(std::uint64_t e) const {
  Fp result(1, p_);
  Fp base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

Fp Fp::inverse() const {
  if (is_zero()) throw Error(Errc::InvalidArgument, "zero has no multiplicative inverse");
  return pow(p_ - 2);
}

cplx psi(const Fp& z) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(z.value()) /
                       static_cast<double>(z.modulus());
  return std::polar(1.0, angle);
}

CharacterTable::CharacterTable(std::uint32_t p) : p_(p), values_(p) {
  for (std::uint32_t z = 0; z < p; ++z) values_[z] = psi(Fp(z, p));
}

cplx CharacterTable::operator()(std::int64_t k) const noexcept {
  const auto m = static_cast<std::int64_t>(p_);
  std::int64_t r = k % m;
  if (r < 0) r += m;
  return values_[static_cast<std::size_t>(r)];
}

int legendre(const Fp& a) {
  if (a.is_zero()) return 0;
  const Fp e = a.pow((a.modulus() - 1) / 2);
  return e.value() == 1 ? 1 : -1;
}

Fp find_nonresidue(std::uint32_t p) {
  if (p < 3 || p % 2 == 0) throw Error(Errc::InvalidArgument, "find_nonresidue needs an odd prime");
  for (std::uint32_t d = 2; d < p; ++d) {
    const Fp candidate(d, p);
    if (legendre(candidate) == -1) return candidate;
  }
  throw Error(Errc::InvalidArgument, "no non-residue found; modulus is not prime");
}

Fp2::Fp2(const Fp& a, const Fp& b, const Fp& delta) : a_(a), b_(b), delta_(delta) {
  if (a.modulus() != b.modulus() || a.modulus() != delta.modulus()) {
    throw Error(Errc::InvalidArgument, "mixed moduli in F_p^2 element");
  }
}

Fp2 Fp2::operator*(const Fp2& o) const {
  if (!(delta_ == o.delta_)) throw Error(Errc::InvalidArgument, "mixed extensions");
  return Fp2(a_ * o.a_ + delta_ * b_ * o.b_, a_ * o.b_ + b_ * o.a_, delta_);
}

Fp2 Fp2::pow(std::uint64_t e) const {
  const std::uint32_t p = a_.modulus();
  Fp2 result(Fp(1, p), Fp(0, p), delta_);
  Fp2 base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

std::uint64_t multiplicative_order(const Fp2& x) {
  if (x.a().is_zero() && x.b().is_zero()) {
    throw Error(Errc::InvalidArgument, "zero has no multiplicative order");
  }
  const std::uint64_t p = x.a().modulus();
  Fp2 y = x;
  for (std::uint64_t k = 1; k <= p * p; ++k) {
    if (y.is_one()) return k;
    y = y * x;
  }
  throw Error(Errc::InvalidArgument, "order search did not terminate");
}

Fp2 norm_one_generator(std::uint32_t p, const Fp& delta) {
  if (legendre(delta) != -1) {
    throw Error(Errc::InvalidArgument, "delta must be a quadratic non-residue");
  }
  // The norm-one group is cyclic of order p + 1; x generates iff x^((p+1)/q) != 1
  // for each prime q dividing p + 1.
  std::vector<std::uint64_t> prime_factors;
  std::uint64_t rest = static_cast<std::uint64_t>(p) + 1;
  for (std::uint64_t q = 2; q * q <= rest; ++q) {
    if (rest % q == 0) {
      prime_factors.push_back(q);
      while (rest % q == 0) rest /= q;
    }
  }
  if (rest > 1) prime_factors.push_back(rest);

  const std::uint64_t order = static_cast<std::uint64_t>(p) + 1;
  for (std::uint32_t a = 0; a < p; ++a) {
    for (std::uint32_t b = 0; b < p; ++b) {
      const Fp2 x(Fp(a, p), Fp(b, p), delta);
      if (x.norm().value() != 1) continue;
      bool generates = true;
      for (const auto q : prime_factors) {
        if (x.pow(order / q).is_one()) {
          generates = false;
          break;
        }
      }
      if (generates) return x;
    }
  }
  throw Error(Errc::InvalidArgument, "no generator of the norm-one group found");
}

}  // namespace srip
