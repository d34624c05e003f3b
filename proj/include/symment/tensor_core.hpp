#pragma once

// Small dense complex kernels: truncated SVD (one-sided Jacobi) and
// Hermitian eigendecomposition (cyclic complex Jacobi). Matrices in this
// library are at most a few dozen rows, so both routines favour accuracy
// over asymptotic cost.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symment {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("ComplexMatrix: non-finite entry");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> entries() { return data_; }
  std::span<const cplx> entries() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm_sq() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return s;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("ComplexMatrix: shape mismatch in product");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("ComplexMatrix: shape mismatch in difference");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("ComplexMatrix: shape mismatch in sum");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (auto& z : out.data_) z *= s;
    return out;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& a, cplx s) { return s * a; }

  /// Kronecker product a ⊗ b.
  friend ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        for (std::size_t k = 0; k < b.rows_; ++k)
          for (std::size_t l = 0; l < b.cols_; ++l)
            out(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Largest elementwise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

inline bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) <= tol;
}

/// Orthonormal columns: m^dag m = 1.
inline bool is_isometry(const ComplexMatrix& m, double tol) {
  return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.cols())) <= tol;
}

struct SvdResult {
  ComplexMatrix left_isometry;       // rows x r, orthonormal columns
  std::vector<double> singular_values;  // r values, descending
  ComplexMatrix right_isometry_dag;  // r x cols, orthonormal rows
  double discarded_weight = 0.0;     // dropped sum sigma^2 / total sigma^2
};

/// Singular values below this absolute level count as exact zeros.
inline constexpr double kSingularValueFloor = 1e-14;

namespace detail {

// One-sided Jacobi on the columns of `a` (m x n, m >= n). On return the
// columns of `a` are mutually orthogonal, `v` holds the accumulated unitary.
inline void hestenes_orthogonalize(ComplexMatrix& a, ComplexMatrix& v) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  constexpr int kMaxSweeps = 80;
  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{0.0, 0.0};
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(a(i, p));
          beta += std::norm(a(i, q));
          gamma += std::conj(a(i, p)) * a(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Rotate column q by the phase of gamma so the 2x2 Gram block is real.
        const cplx phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const cplx ap = a(i, p);
          const cplx aq = a(i, q) * phase;
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < v.rows(); ++i) {
          const cplx vp = v(i, p);
          const cplx vq = v(i, q) * phase;
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) return;
  }
  throw std::runtime_error("svd_truncate: Jacobi iteration did not converge");
}

// Full thin SVD of a tall-or-square matrix; singular values sorted descending
// with a stable sort so ties keep the factorization's column order.
inline void thin_svd_tall(const ComplexMatrix& m_in, ComplexMatrix& u, std::vector<double>& s,
                          ComplexMatrix& v) {
  ComplexMatrix a = m_in;
  const std::size_t rows = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix vacc = ComplexMatrix::identity(n);
  hestenes_orthogonalize(a, vacc);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += std::norm(a(i, j));
    norms[j] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  u = ComplexMatrix(rows, n);
  v = ComplexMatrix(n, n);
  s.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    s[k] = norms[j];
    for (std::size_t i = 0; i < n; ++i) v(i, k) = vacc(i, j);
    if (norms[j] > 0.0)
      for (std::size_t i = 0; i < rows; ++i) u(i, k) = a(i, j) / norms[j];
  }
}

}  // namespace detail

/// Truncated SVD M ≈ U·diag(S)·V†. The kept rank is
/// min(max_rank, #{k : sigma_k > 1e-14 and sigma_k^2 / sum sigma^2 > tol}).
inline SvdResult svd_truncate(const ComplexMatrix& m, std::size_t max_rank, double tol) {
  if (m.empty()) throw std::invalid_argument("svd_truncate: empty matrix");
  if (max_rank < 1) throw std::invalid_argument("svd_truncate: max_rank must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("svd_truncate: tol must be >= 0");

  ComplexMatrix u, v;
  std::vector<double> s;
  const bool wide = m.rows() < m.cols();
  if (wide) {
    // M† = U' S V'†  =>  M = V' S U'†
    detail::thin_svd_tall(m.adjoint(), v, s, u);
  } else {
    detail::thin_svd_tall(m, u, s, v);
  }
  for (double& x : s)
    if (x < kSingularValueFloor) x = 0.0;

  double total = 0.0;
  for (double x : s) total += x * x;
  if (total == 0.0) throw std::invalid_argument("svd_truncate: zero matrix has no rank");

  std::size_t significant = 0;
  for (double x : s)
    if (x > 0.0 && x * x / total > tol) ++significant;
  const std::size_t rank = std::max<std::size_t>(1, std::min(max_rank, significant));

  double kept = 0.0;
  for (std::size_t k = 0; k < rank; ++k) kept += s[k] * s[k];

  SvdResult out;
  out.left_isometry = ComplexMatrix(m.rows(), rank);
  out.right_isometry_dag = ComplexMatrix(rank, m.cols());
  out.singular_values.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(rank));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < rank; ++k) out.left_isometry(i, k) = u(i, k);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t j = 0; j < m.cols(); ++j) out.right_isometry_dag(k, j) = std::conj(v(j, k));
  out.discarded_weight = std::clamp((total - kept) / total, 0.0, 1.0);
  return out;
}

struct HermitianEigs {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
inline HermitianEigs hermitian_eigs(const ComplexMatrix& m, double hermitian_tol = 1e-10) {
  if (m.rows() != m.cols() || m.empty())
    throw std::invalid_argument("hermitian_eigs: matrix must be square and non-empty");
  if (!is_hermitian(m, hermitian_tol))
    throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian within tolerance");

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) s += std::norm(a(r, c));
    return s;
  };
  const double scale = std::max(m.frobenius_norm_sq(), 1e-300);

  constexpr int kMaxSweeps = 80;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-32 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const cplx phase = std::conj(apq) / g;  // e^{-i arg apq}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // W on the (p, q) plane: [[c, s], [-s·phase, c·phase]].
        const cplx wpp = c, wpq = s, wqp = -s * phase, wqq = c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * wpp + akq * wqp;
          a(k, q) = akp * wpq + akq * wqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
          a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * wpp + vkq * wqp;
          v(k, q) = vkp * wpq + vkq * wqq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && off_norm() > 1e-28 * scale)
    throw std::runtime_error("hermitian_eigs: Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigs out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace symment
