/**
 * @file linalg.hpp
 * @brief Dense complex matrices and a cyclic-Jacobi Hermitian eigensolver.
 *
 * Matrices here are small (at most a few hundred rows), so everything is a
 * plain row-major buffer and the eigensolver favours determinism and accuracy
 * over asymptotic speed.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace srip {

using cplx = std::complex<double>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::vector<cplx> col(std::size_t c) const;

  const std::vector<cplx>& data() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(cplx s) const;
  std::vector<cplx> apply(std::span<const cplx> v) const;

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Standard inner product <f, g> = sum_t f(t) conj(g(t)).
cplx inner(std::span<const cplx> f, std::span<const cplx> g);
double norm(std::span<const cplx> f);

/// max |A - A^dagger| entrywise.
double hermitian_defect(const CMatrix& a);
/// (A + A^dagger) / 2.
CMatrix hermitize(const CMatrix& a);
/// max |U^dagger U - I| entrywise.
double unitarity_defect(const CMatrix& u);

struct HermitianEig {
  std::vector<double> eigenvalues;  // descending
  CMatrix eigenvectors;             // column j pairs with eigenvalues[j]
};

inline constexpr double kHermitianTolerance = 1e-12;

/// Full spectral decomposition of a Hermitian matrix (cyclic Jacobi).
/// Throws NotHermitian when max|A - A^dagger| > tolerance.
HermitianEig hermitian_eig(const CMatrix& a, double hermitian_tolerance = kHermitianTolerance);

/// Eigenvalues only, same algorithm.
std::vector<double> hermitian_eigenvalues(const CMatrix& a,
                                          double hermitian_tolerance = kHermitianTolerance);

struct UnitaryEig {
  std::vector<cplx> eigenvalues;  // v^dagger U v per column
  CMatrix vectors;                // columns are phase-normalized unit eigenvectors
};

/// Eigenbasis of a unitary with simple spectrum. Columns are ordered by
/// descending eigenvalue phase in [0, 2 pi) and phase-normalized.
UnitaryEig unitary_eigenbasis(const CMatrix& u);

/// Rotates v so that its largest-magnitude entry (lowest index on ties within
/// 1e-9) is real and positive.
void normalize_phase(std::span<cplx> v);

double op_norm(const CMatrix& a);
double trace_power(const CMatrix& a, unsigned k);

/// G_ij = <v_i, v_j>.
CMatrix gram(std::span<const std::span<const cplx>> vectors);
CMatrix gram(const std::vector<std::vector<cplx>>& vectors);

}  // namespace srip
