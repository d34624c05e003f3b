#pragma once

#include <stdexcept>
#include <utility>

#include "symment/tensor_core.hpp"

namespace symment {

/// Reduced state of an ordered qubit pair (q_i, q_j), basis |00>,|01>,|10>,|11>
/// with q_i the high bit.
class PairDensityMatrix {
 public:
  PairDensityMatrix() : m_(4, 4) {}
  explicit PairDensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != 4 || m_.cols() != 4)
      throw std::invalid_argument("PairDensityMatrix: expected a 4x4 matrix");
  }

  const ComplexMatrix& matrix() const { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  /// Same state with the two qubits exchanged.
  PairDensityMatrix swapped() const {
    static constexpr std::size_t perm[4] = {0, 2, 1, 3};
    ComplexMatrix out(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) out(perm[r], perm[c]) = m_(r, c);
    return PairDensityMatrix(std::move(out));
  }

 private:
  ComplexMatrix m_;
};

/// Throws std::invalid_argument unless rho is Hermitian, unit-trace and PSD
/// within `tol`.
inline void validate_density_matrix(const PairDensityMatrix& rho, double tol = 1e-10) {
  const auto& m = rho.matrix();
  if (!is_hermitian(m, tol)) throw std::invalid_argument("invalid density matrix: not Hermitian");
  if (std::abs(m.trace() - 1.0) > tol)
    throw std::invalid_argument("invalid density matrix: trace differs from 1");
  const auto eig = hermitian_eigs(m, tol);
  if (eig.eigenvalues.front() < -tol)
    throw std::invalid_argument("invalid density matrix: negative eigenvalue");
}

}  // namespace symment
