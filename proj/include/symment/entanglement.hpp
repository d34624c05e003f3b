#pragma once

// Two-qubit concurrence.
//
// General path: with rho = W W^dag, the square roots of the eigenvalues of
// R = rho (sy x sy) rho^* (sy x sy) are the singular values of the complex
// symmetric matrix tau = W^T (sy x sy) W. Taking singular values directly
// keeps the error at machine precision near concurrence zeros instead of
// square-rooting eigenvalue roundoff.
//
// X-state path: closed form 2 max{0, |u| - sqrt(y z), |delta| - sqrt(x w)}.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "symment/density.hpp"
#include "symment/tensor_core.hpp"

namespace symment {

/// Eigenvalues of rho at or below this level are dropped from the factor W.
inline constexpr double kRhoEigenFloor = 1e-14;
/// Entries off the X pattern at or below this magnitude count as zero when
/// dispatching to the X-state formula.
inline constexpr double kXStateTol = 1e-12;

enum class ConcurrenceMethod { general, xstate };

struct ConcurrenceResult {
  double value = 0.0;
  ConcurrenceMethod method = ConcurrenceMethod::general;
};

/// Diagonal x, y, z_diag, w; corner u = rho(0,3); inner delta = rho(1,2).
struct XStateParams {
  double x = 0.0, y = 0.0, z_diag = 0.0, w = 0.0;
  double u = 0.0;
  double delta = 0.0;
};

inline const ComplexMatrix& spin_flip() {
  static const ComplexMatrix yy(4, 4, {0, 0, 0, -1,  //
                                       0, 0, 1, 0,   //
                                       0, 1, 0, 0,   //
                                       -1, 0, 0, 0});
  return yy;
}

/// Wootters concurrence through the general route (no structure assumed).
inline ConcurrenceResult wootters_concurrence(const PairDensityMatrix& rho) {
  validate_density_matrix(rho, 1e-10);
  const auto eig = hermitian_eigs(rho.matrix(), 1e-10);
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
    if (eig.eigenvalues[k] > kRhoEigenFloor) kept.push_back(k);
  if (kept.empty()) throw std::invalid_argument("invalid density matrix: no positive eigenvalue");

  ComplexMatrix w(4, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const double scale = std::sqrt(eig.eigenvalues[kept[c]]);
    for (std::size_t r = 0; r < 4; ++r) w(r, c) = eig.eigenvectors(r, kept[c]) * scale;
  }
  const ComplexMatrix tau = w.transpose() * spin_flip() * w;

  std::vector<double> roots;
  if (tau.frobenius_norm_sq() > 0.0) {
    const auto svd = svd_truncate(tau, tau.rows(), 0.0);
    roots = svd.singular_values;
  }
  double value = 0.0;
  if (!roots.empty()) {
    value = roots.front();
    for (std::size_t k = 1; k < roots.size(); ++k) value -= roots[k];
  }
  return {std::clamp(value, 0.0, 1.0), ConcurrenceMethod::general};
}

inline bool is_xstate(const PairDensityMatrix& rho, double tol = kXStateTol) {
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (r != c && r + c != 3 && std::abs(rho(r, c)) > tol) return false;
  return true;
}

/// Reads the X-state parameters off rho. Complex anti-diagonal entries are
/// taken by modulus; real ones keep their sign.
inline XStateParams extract_xstate(const PairDensityMatrix& rho, double tol = kXStateTol) {
  if (!is_xstate(rho, tol)) throw std::invalid_argument("not an X state");
  auto real_or_modulus = [&](cplx z) { return std::abs(z.imag()) <= tol ? z.real() : std::abs(z); };
  XStateParams p;
  p.x = rho(0, 0).real();
  p.y = rho(1, 1).real();
  p.z_diag = rho(2, 2).real();
  p.w = rho(3, 3).real();
  p.u = real_or_modulus(rho(0, 3));
  p.delta = real_or_modulus(rho(1, 2));
  return p;
}

inline PairDensityMatrix xstate_matrix(const XStateParams& p) {
  return PairDensityMatrix(ComplexMatrix(4, 4, {p.x, 0, 0, p.u,            //
                                                0, p.y, p.delta, 0,        //
                                                0, p.delta, p.z_diag, 0,   //
                                                p.u, 0, 0, p.w}));
}

inline ConcurrenceResult xstate_concurrence(const XStateParams& p) {
  auto nonneg = [](double v) { return std::max(v, 0.0); };
  const double outer = std::abs(p.u) - std::sqrt(nonneg(p.y) * nonneg(p.z_diag));
  const double inner = std::abs(p.delta) - std::sqrt(nonneg(p.x) * nonneg(p.w));
  const double value = 2.0 * std::max({0.0, outer, inner});
  return {std::min(value, 1.0), ConcurrenceMethod::xstate};
}

/// Concurrence with the X-state fast path when the structure allows it.
inline ConcurrenceResult concurrence(const PairDensityMatrix& rho) {
  if (is_xstate(rho)) {
    validate_density_matrix(rho, 1e-10);
    return xstate_concurrence(extract_xstate(rho));
  }
  return wootters_concurrence(rho);
}

}  // namespace symment
