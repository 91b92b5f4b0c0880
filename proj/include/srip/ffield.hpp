/**
 * @file ffield.hpp
 * @brief Exact arithmetic in F_p and in the quadratic extension F_p[sqrt(delta)].
 *
 * All group-theoretic structure is kept in integers; the only place a complex
 * number appears is the additive character psi(z) = exp(2 pi i z / p).
 */
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace srip {

using cplx = std::complex<double>;

bool is_prime(std::uint64_t n) noexcept;

/// Throws InvalidArgument unless p is a prime >= 5 that fits the 32-bit residue type.
void require_field_prime(std::uint64_t p);

/// Element of the prime field F_p. The modulus travels with the value so that
/// mixing residues of different fields is caught at run time.
class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t value, std::uint32_t p);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return p_; }
  bool is_zero() const noexcept { return value_ == 0; }

  Fp operator+(const Fp& o) const;
  Fp operator-(const Fp& o) const;
  Fp operator*(const Fp& o) const;
  Fp operator-() const;
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp pow(std::uint64_t e) const;
  /// Multiplicative inverse; InvalidArgument on zero.
  Fp inverse() const;

  friend bool operator==(const Fp& a, const Fp& b) noexcept {
    return a.value_ == b.value_ && a.p_ == b.p_;
  }
  friend auto operator<=>(const Fp& a, const Fp& b) noexcept { return a.value_ <=> b.value_; }

 private:
  void check_same_field(const Fp& o) const;

  std::uint32_t value_ = 0;
  std::uint32_t p_ = 0;
};

/// psi(z) = exp(2 pi i z / p).
cplx psi(const Fp& z);

/// Precomputed table of psi over F_p; psi(k) for an arbitrary integer k.
class CharacterTable {
 public:
  explicit CharacterTable(std::uint32_t p);
  std::uint32_t p() const noexcept { return p_; }
  cplx operator()(std::int64_t k) const noexcept;
  cplx operator()(const Fp& z) const noexcept { return values_[z.value()]; }

 private:
  std::uint32_t p_;
  std::vector<cplx> values_;
};

/// Legendre symbol via Euler's criterion: +1, -1, or 0 for a = 0.
int legendre(const Fp& a);

/// Smallest positive quadratic non-residue mod p.
Fp find_nonresidue(std::uint32_t p);

/// a + b sqrt(delta) with delta a fixed non-residue.
class Fp2 {
 public:
  Fp2(const Fp& a, const Fp& b, const Fp& delta);

  const Fp& a() const noexcept { return a_; }
  const Fp& b() const noexcept { return b_; }
  const Fp& delta() const noexcept { return delta_; }

  Fp norm() const { return a_ * a_ - delta_ * b_ * b_; }
  bool is_one() const noexcept { return a_.value() == 1 && b_.is_zero(); }

  Fp2 operator*(const Fp2& o) const;
  Fp2 pow(std::uint64_t e) const;

  friend bool operator==(const Fp2& x, const Fp2& y) noexcept {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.delta_ == y.delta_;
  }

 private:
  Fp a_, b_, delta_;
};

/// Multiplicative order by repeated multiplication (exact, O(order)).
std::uint64_t multiplicative_order(const Fp2& x);

/// Lexicographically smallest (a, b) with a^2 - delta b^2 = 1 and order p + 1.
Fp2 norm_one_generator(std::uint32_t p, const Fp& delta);

}  // namespace srip
