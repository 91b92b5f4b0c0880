#include "srip/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "srip/error.hpp"

namespace srip {

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw Error(Errc::DimensionMismatch, "buffer size does not match matrix shape");
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<cplx> CMatrix::col(std::size_t c) const {
  std::vector<cplx> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
  CMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      const cplx a = (*this)(i, k);
      if (a == cplx{}) continue;
      const auto o_row = o.row(k);
      for (std::size_t j = 0; j < o.cols_; ++j) out_row[j] += a * o_row[j];
    }
  }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::DimensionMismatch, "sum shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::DimensionMismatch, "difference shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

CMatrix CMatrix::operator*(cplx s) const {
  CMatrix out = *this;
  for (auto& x : out.data_) x *= s;
  return out;
}

std::vector<cplx> CMatrix::apply(std::span<const cplx> v) const {
  if (v.size() != cols_) throw Error(Errc::DimensionMismatch, "matrix-vector shape mismatch");
  std::vector<cplx> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    cplx acc{};
    const auto rr = row(r);
    for (std::size_t c = 0; c < cols_; ++c) acc += rr[c] * v[c];
    out[r] = acc;
  }
  return out;
}

double CMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

double CMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

cplx inner(std::span<const cplx> f, std::span<const cplx> g) {
  if (f.size() != g.size()) throw Error(Errc::DimensionMismatch, "inner product length mismatch");
  cplx acc{};
  for (std::size_t t = 0; t < f.size(); ++t) acc += f[t] * std::conj(g[t]);
  return acc;
}

double norm(std::span<const cplx> f) {
  double s = 0.0;
  for (const auto& x : f) s += std::norm(x);
  return std::sqrt(s);
}

double hermitian_defect(const CMatrix& a) {
  if (!a.is_square()) throw Error(Errc::DimensionMismatch, "matrix is not square");
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  }
  return d;
}

CMatrix hermitize(const CMatrix& a) {
  if (!a.is_square()) throw Error(Errc::DimensionMismatch, "matrix is not square");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

double unitarity_defect(const CMatrix& u) {
  if (!u.is_square()) throw Error(Errc::DimensionMismatch, "matrix is not square");
  return (u.adjoint() * u - CMatrix::identity(u.rows())).max_abs();
}

namespace {

constexpr int kMaxSweeps = 80;

void require_hermitian(const CMatrix& a, double tolerance) {
  if (!a.is_square()) throw Error(Errc::NotHermitian, "matrix is not square");
  if (!a.all_finite()) throw Error(Errc::NotHermitian, "matrix has non-finite entries");
  const double defect = hermitian_defect(a);
  if (defect > tolerance) {
    throw Error(Errc::NotHermitian, "max |A - A^dagger| = " + std::to_string(defect));
  }
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

// Cyclic Jacobi on a Hermitian copy. Each rotation is U = P R where P rotates
// the (p, q) entry onto the positive real axis and R is the real Jacobi
// rotation that annihilates it.
void jacobi_diagonalize(CMatrix& a, CMatrix* v) {
  const std::size_t n = a.rows();
  const double scale = a.frobenius_norm();
  if (n < 2 || scale == 0.0) return;
  const double stop = 1e-16 * scale;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (sweep > 3 && mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cplx e = apq / mag;
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx u_pp = c;
        const cplx u_pq = s;
        const cplx u_qp = -s * std::conj(e);
        const cplx u_qq = c * std::conj(e);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * u_pp + akq * u_qp;
          a(k, q) = akp * u_pq + akq * u_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
          a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = (*v)(k, p);
            const cplx vkq = (*v)(k, q);
            (*v)(k, p) = vkp * u_pp + vkq * u_qp;
            (*v)(k, q) = vkp * u_pq + vkq * u_qq;
          }
        }
      }
    }
  }
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
  return order;
}

}  // namespace

HermitianEig hermitian_eig(const CMatrix& a, double hermitian_tolerance) {
  require_hermitian(a, hermitian_tolerance);
  const std::size_t n = a.rows();
  CMatrix work = hermitize(a);
  CMatrix vecs = CMatrix::identity(n);
  jacobi_diagonalize(work, &vecs);

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = work(i, i).real();
  const auto order = descending_order(diag);

  HermitianEig out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = vecs(i, order[j]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& a, double hermitian_tolerance) {
  require_hermitian(a, hermitian_tolerance);
  CMatrix work = hermitize(a);
  jacobi_diagonalize(work, nullptr);
  std::vector<double> diag(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) diag[i] = work(i, i).real();
  std::sort(diag.begin(), diag.end(), std::greater<>());
  return diag;
}

void normalize_phase(std::span<cplx> v) {
  double largest = 0.0;
  for (const auto& x : v) largest = std::max(largest, std::abs(x));
  if (largest == 0.0) return;
  std::size_t pivot = 0;
  while (std::abs(v[pivot]) < largest - 1e-9) ++pivot;
  const double mag = std::abs(v[pivot]);
  const cplx rot = std::conj(v[pivot]) / mag;
  for (auto& x : v) x *= rot;
  v[pivot] = mag;
}

namespace {

constexpr double kEigenResidualTolerance = 1e-8;
constexpr double kMinEigenvalueGap = 1e-6;

double phase_angle(cplx z) {
  double a = std::arg(z);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

UnitaryEig unitary_eigenbasis(const CMatrix& u) {
  if (!u.is_square()) throw Error(Errc::DimensionMismatch, "unitary must be square");
  const double defect = unitarity_defect(u);
  if (defect > 1e-10) {
    throw Error(Errc::InvalidArgument, "operator is not unitary (defect " + std::to_string(defect) + ")");
  }
  const std::size_t n = u.rows();
  const CMatrix u_adj = u.adjoint();

  // alpha = exp(i * 0.5371), then the phase doubled on each retry.
  constexpr std::array<double, 4> kPhases = {0.5371, 1.0742, 2.1484, 4.2968};
  std::string last_failure;
  for (const double phase : kPhases) {
    const cplx alpha = std::polar(1.0, phase);
    const CMatrix h = hermitize(u * alpha + u_adj * std::conj(alpha));
    const HermitianEig eig = hermitian_eig(h);

    std::vector<cplx> lambdas(n);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      const auto v = eig.eigenvectors.col(j);
      const auto uv = u.apply(v);
      const cplx lambda = inner(uv, v);
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual += std::norm(uv[i] - lambda * v[i]);
      residual = std::sqrt(residual);
      if (residual > kEigenResidualTolerance) {
        ok = false;
        last_failure = "eigenvector residual " + std::to_string(residual);
      }
      lambdas[j] = lambda;
    }
    if (!ok) continue;

    double min_gap = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) min_gap = std::min(min_gap, std::abs(lambdas[i] - lambdas[j]));
    }
    if (n > 1 && min_gap < kMinEigenvalueGap) {
      throw Error(Errc::DegenerateSpectrum, "eigenvalue gap " + std::to_string(min_gap));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return phase_angle(lambdas[a]) > phase_angle(lambdas[b]);
    });

    UnitaryEig out{std::vector<cplx>(n), CMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
      auto v = eig.eigenvectors.col(order[j]);
      normalize_phase(v);
      out.eigenvalues[j] = lambdas[order[j]];
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v[i];
    }
    return out;
  }
  throw Error(Errc::DegenerateSpectrum, "no phase separated the spectrum: " + last_failure);
}

double op_norm(const CMatrix& a) {
  const auto ev = hermitian_eigenvalues(a);
  double m = 0.0;
  for (const double x : ev) m = std::max(m, std::abs(x));
  return m;
}

double trace_power(const CMatrix& a, unsigned k) {
  if (k == 0) throw Error(Errc::InvalidArgument, "trace_power needs k >= 1");
  const auto ev = hermitian_eigenvalues(a);
  double s = 0.0;
  for (const double x : ev) s += std::pow(x, static_cast<double>(k));
  return s;
}

CMatrix gram(std::span<const std::span<const cplx>> vectors) {
  const std::size_t n = vectors.size();
  CMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != vectors[0].size()) {
      throw Error(Errc::DimensionMismatch, "gram vectors differ in length");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = inner(vectors[i], vectors[i]).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = inner(vectors[i], vectors[j]);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

CMatrix gram(const std::vector<std::vector<cplx>>& vectors) {
  std::vector<std::span<const cplx>> views(vectors.begin(), vectors.end());
  return gram(std::span<const std::span<const cplx>>(views));
}

}  // namespace srip
