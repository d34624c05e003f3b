#pragma once

// Matrix-product-state engine with a single orthogonality center.
//
// Tensors left of the center are left-isometric, tensors right of it are
// right-isometric, so the two-site block at the center carries the full
// wave function coefficients psi(l, s1, s2, r). Moving the center one site
// (shift_center) is the basis change between neighbouring two-block
// positions of a finite-system sweep; the left/right isometries are the
// SVD factors of the block.
//
// Qubits keep their logical labels while their physical chain positions
// may be permuted by SWAP routing, which is how gates between non-adjacent
// qubits (the star protocol) are realized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symment/density.hpp"
#include "symment/protocols.hpp"
#include "symment/statevector.hpp"
#include "symment/tensor_core.hpp"

namespace symment {

inline constexpr int kDefaultChiMax = 16;
inline constexpr double kDefaultTruncTol = 1e-12;

/// Rank-3 site tensor A[l, s, r] with physical dimension 2.
struct SiteTensor {
  std::size_t left = 1;
  std::size_t right = 1;
  std::vector<cplx> data;

  SiteTensor() = default;
  SiteTensor(std::size_t l, std::size_t r) : left(l), right(r), data(l * 2 * r, cplx{}) {}

  cplx& at(std::size_t l, std::size_t s, std::size_t r) { return data[(l * 2 + s) * right + r]; }
  const cplx& at(std::size_t l, std::size_t s, std::size_t r) const {
    return data[(l * 2 + s) * right + r];
  }

  /// Rows (l, s), columns r.
  ComplexMatrix as_left_matrix() const { return ComplexMatrix(left * 2, right, data); }
  /// Rows l, columns (s, r).
  ComplexMatrix as_right_matrix() const { return ComplexMatrix(left, 2 * right, data); }
};

enum class Direction { left, right };

class MpsState {
 public:
  MpsState(int n, int chi_max = kDefaultChiMax, double trunc_tol = kDefaultTruncTol)
      : n_(n), chi_max_(chi_max), trunc_tol_(trunc_tol) {
    if (n < 2) throw std::invalid_argument("MpsState: n must be >= 2");
    if (chi_max < 2) throw std::invalid_argument("MpsState: chi_max must be >= 2 for two-site gates");
    if (!(trunc_tol >= 0.0)) throw std::invalid_argument("MpsState: trunc_tol must be >= 0");
    tensors_.assign(static_cast<std::size_t>(n), SiteTensor(1, 1));
    for (auto& t : tensors_) t.at(0, 0, 0) = 1.0;
    position_.resize(static_cast<std::size_t>(n));
    std::iota(position_.begin(), position_.end(), 1);
    qubit_.resize(static_cast<std::size_t>(n));
    std::iota(qubit_.begin(), qubit_.end(), 1);
  }

  int n_qubits() const { return n_; }
  int chi_max() const { return chi_max_; }
  double trunc_tol() const { return trunc_tol_; }
  /// 1-based chain position of the orthogonality center.
  int center() const { return center_; }
  double discarded_weight_total() const { return discarded_; }

  const SiteTensor& tensor(int position) const { return tensors_.at(idx(position)); }

  /// Chain position currently holding logical qubit `qubit`.
  int position_of(int qubit) const {
    check_qubit(qubit, "position_of");
    return position_[static_cast<std::size_t>(qubit - 1)];
  }
  int qubit_at(int position) const {
    check_position(position, "qubit_at");
    return qubit_[static_cast<std::size_t>(position - 1)];
  }

  /// Bond dimensions chi_1 .. chi_{N-1}.
  std::vector<std::size_t> bond_dimensions() const {
    std::vector<std::size_t> out;
    for (int p = 1; p < n_; ++p) out.push_back(tensors_[idx(p)].right);
    return out;
  }
  std::size_t max_bond_dimension() const {
    const auto b = bond_dimensions();
    return b.empty() ? 1 : *std::max_element(b.begin(), b.end());
  }

  /// Contracts the gate into the physical leg of `qubit`. Canonical form is
  /// preserved because the gate is unitary.
  void apply_1q(const ComplexMatrix& gate, int qubit) {
    check_qubit(qubit, "apply_1q");
    if (gate.rows() != 2 || gate.cols() != 2 || !is_unitary(gate, 1e-12))
      throw std::invalid_argument("MpsState::apply_1q: gate must be a 2x2 unitary");
    auto& t = tensors_[idx(position_of(qubit))];
    for (std::size_t l = 0; l < t.left; ++l)
      for (std::size_t r = 0; r < t.right; ++r) {
        const cplx a0 = t.at(l, 0, r), a1 = t.at(l, 1, r);
        t.at(l, 0, r) = gate(0, 0) * a0 + gate(0, 1) * a1;
        t.at(l, 1, r) = gate(1, 0) * a0 + gate(1, 1) * a1;
      }
  }

  /// Moves the orthogonality center one position, restoring the isometry of
  /// the vacated tensor.
  void shift_center(Direction d) {
    if (d == Direction::right) {
      if (center_ == n_) throw std::out_of_range("MpsState::shift_center: center already at right boundary");
      auto& a = tensors_[idx(center_)];
      auto& b = tensors_[idx(center_ + 1)];
      const auto svd = svd_truncate(a.as_left_matrix(), a.as_left_matrix().cols(), 0.0);
      discarded_ += svd.discarded_weight;
      const std::size_t k = svd.singular_values.size();
      SiteTensor na(a.left, k);
      na.data.assign(svd.left_isometry.entries().begin(), svd.left_isometry.entries().end());
      ComplexMatrix sv = svd.right_isometry_dag;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < sv.cols(); ++c) sv(r, c) *= svd.singular_values[r];
      const ComplexMatrix nb = sv * b.as_right_matrix();
      SiteTensor bb(k, b.right);
      bb.data.assign(nb.entries().begin(), nb.entries().end());
      a = std::move(na);
      b = std::move(bb);
      ++center_;
    } else {
      if (center_ == 1) throw std::out_of_range("MpsState::shift_center: center already at left boundary");
      auto& a = tensors_[idx(center_)];
      auto& b = tensors_[idx(center_ - 1)];
      const auto m = a.as_right_matrix();
      const auto svd = svd_truncate(m, m.rows(), 0.0);
      discarded_ += svd.discarded_weight;
      const std::size_t k = svd.singular_values.size();
      SiteTensor na(k, a.right);
      na.data.assign(svd.right_isometry_dag.entries().begin(), svd.right_isometry_dag.entries().end());
      ComplexMatrix us = svd.left_isometry;
      for (std::size_t r = 0; r < us.rows(); ++r)
        for (std::size_t c = 0; c < k; ++c) us(r, c) *= svd.singular_values[c];
      const ComplexMatrix nb = b.as_left_matrix() * us;
      SiteTensor bb(b.left, k);
      bb.data.assign(nb.entries().begin(), nb.entries().end());
      a = std::move(na);
      b = std::move(bb);
      --center_;
    }
  }

  void move_center_to(int position) {
    check_position(position, "move_center_to");
    while (center_ < position) shift_center(Direction::right);
    while (center_ > position) shift_center(Direction::left);
  }

  /// Applies a 4x4 gate to chain positions (position, position+1), gate basis
  /// |s_position s_position+1>. The center must already sit on one of the two
  /// sites; afterwards it is left on the side given by `leave`.
  void apply_2q(const ComplexMatrix& gate, int position, Direction leave = Direction::right) {
    if (position < 1 || position >= n_) throw std::out_of_range("MpsState::apply_2q: position out of range");
    if (gate.rows() != 4 || gate.cols() != 4 || !is_unitary(gate, 1e-12))
      throw std::invalid_argument("MpsState::apply_2q: gate must be a 4x4 unitary");
    if (center_ != position && center_ != position + 1)
      throw std::logic_error("MpsState::apply_2q: orthogonality center is not on the gate; shift first");

    const auto& a = tensors_[idx(position)];
    const auto& b = tensors_[idx(position + 1)];
    const std::size_t cl = a.left, cm = a.right, cr = b.right;
    // theta[(l, t1), (t2, r)] = sum_{s1 s2 m} G[t1 t2, s1 s2] A[l, s1, m] B[m, s2, r]
    std::vector<cplx> block(cl * 4 * cr, cplx{});
    for (std::size_t l = 0; l < cl; ++l)
      for (std::size_t s1 = 0; s1 < 2; ++s1)
        for (std::size_t m = 0; m < cm; ++m) {
          const cplx av = a.at(l, s1, m);
          if (av == cplx{}) continue;
          for (std::size_t s2 = 0; s2 < 2; ++s2)
            for (std::size_t r = 0; r < cr; ++r)
              block[((l * 2 + s1) * 2 + s2) * cr + r] += av * b.at(m, s2, r);
        }
    ComplexMatrix theta(cl * 2, 2 * cr);
    for (std::size_t l = 0; l < cl; ++l)
      for (std::size_t t1 = 0; t1 < 2; ++t1)
        for (std::size_t t2 = 0; t2 < 2; ++t2)
          for (std::size_t r = 0; r < cr; ++r) {
            cplx acc{};
            for (std::size_t s1 = 0; s1 < 2; ++s1)
              for (std::size_t s2 = 0; s2 < 2; ++s2)
                acc += gate(t1 * 2 + t2, s1 * 2 + s2) * block[((l * 2 + s1) * 2 + s2) * cr + r];
            theta(l * 2 + t1, t2 * cr + r) = acc;
          }

    auto svd = svd_truncate(theta, static_cast<std::size_t>(chi_max_), trunc_tol_);
    discarded_ += svd.discarded_weight;
    // Renormalize the kept spectrum so the state stays unit-norm.
    double kept = 0.0;
    for (double s : svd.singular_values) kept += s * s;
    const double renorm = 1.0 / std::sqrt(kept);
    const std::size_t k = svd.singular_values.size();

    SiteTensor na(cl, k), nb(k, cr);
    for (std::size_t row = 0; row < cl * 2; ++row)
      for (std::size_t c = 0; c < k; ++c) {
        const double w = leave == Direction::left ? svd.singular_values[c] * renorm : 1.0;
        na.data[row * k + c] = svd.left_isometry(row, c) * w;
      }
    for (std::size_t r = 0; r < k; ++r) {
      const double w = leave == Direction::right ? svd.singular_values[r] * renorm : 1.0;
      for (std::size_t c = 0; c < 2 * cr; ++c) nb.data[r * 2 * cr + c] = svd.right_isometry_dag(r, c) * w;
    }
    tensors_[idx(position)] = std::move(na);
    tensors_[idx(position + 1)] = std::move(nb);
    center_ = leave == Direction::left ? position : position + 1;
  }

  /// Applies a two-qubit gate on logical qubits (first, second), gate basis
  /// |q_first q_second>. Non-adjacent qubits are brought together by moving
  /// `second` along the chain with SWAPs.
  void apply_gate(const ComplexMatrix& gate, int first, int second,
                  std::optional<Direction> leave = std::nullopt) {
    check_qubit(first, "apply_gate");
    check_qubit(second, "apply_gate");
    if (first == second) throw std::invalid_argument("MpsState::apply_gate: qubits must differ");
    while (std::abs(position_of(first) - position_of(second)) > 1) {
      const int ps = position_of(second);
      const int step = position_of(first) < ps ? -1 : 1;
      const int lo = std::min(ps, ps + step);
      bring_center_to_pair(lo);
      apply_2q(swap_gate(), lo, step < 0 ? Direction::left : Direction::right);
      exchange_positions(lo);
    }
    const int pf = position_of(first), ps = position_of(second);
    const int lo = std::min(pf, ps);
    const ComplexMatrix oriented = pf < ps ? gate : swap_gate() * gate * swap_gate();
    bring_center_to_pair(lo);
    Direction d = leave.value_or(center_ == lo ? Direction::left : Direction::right);
    apply_2q(oriented, lo, d);
  }

  /// Runs every gate in list order. After each two-qubit gate the center is
  /// left on the side of the next two-qubit gate, so single-direction
  /// staircases never move the center backwards.
  void run(const Circuit& circuit) {
    if (circuit.n_qubits() != n_) throw std::invalid_argument("MpsState::run: qubit count mismatch");
    const auto& ops = circuit.ops();
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const auto& op = ops[k];
      if (op.kind == GateOp::Kind::single) {
        apply_1q(single_qubit_gate(op.family, op.theta), op.site);
        continue;
      }
      std::optional<Direction> leave;
      for (std::size_t m = k + 1; m < ops.size(); ++m) {
        if (ops[m].kind != GateOp::Kind::cx) continue;
        const int here = std::min(position_of(op.control), position_of(op.target));
        const int next = std::min(position_of(ops[m].control), position_of(ops[m].target));
        leave = next <= here ? Direction::left : Direction::right;
        break;
      }
      apply_gate(cx_gate(), op.control, op.target, leave);
    }
  }

  /// Reduced state of logical qubits (i, j), basis |q_i q_j>, by exact
  /// transfer-matrix contraction between the two sites.
  PairDensityMatrix pair_rdm(int qi, int qj) const {
    check_qubit(qi, "pair_rdm");
    check_qubit(qj, "pair_rdm");
    if (qi == qj) throw std::invalid_argument("MpsState::pair_rdm: i equals j");
    const int pi = position_of(qi), pj = position_of(qj);
    const int lo = std::min(pi, pj), hi = std::max(pi, pj);

    // T[s, s'][r, r'] after the first site.
    const ComplexMatrix left = left_environment(lo);
    const auto& a = tensors_[idx(lo)];
    std::vector<cplx> t(4 * a.right * a.right, cplx{});
    auto tix = [](std::size_t s, std::size_t sp, std::size_t r, std::size_t rp, std::size_t dim) {
      return ((s * 2 + sp) * dim + r) * dim + rp;
    };
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t sp = 0; sp < 2; ++sp)
        for (std::size_t l = 0; l < a.left; ++l)
          for (std::size_t lp = 0; lp < a.left; ++lp) {
            const cplx e = left(l, lp);
            if (e == cplx{}) continue;
            for (std::size_t r = 0; r < a.right; ++r)
              for (std::size_t rp = 0; rp < a.right; ++rp)
                t[tix(s, sp, r, rp, a.right)] += e * a.at(l, s, r) * std::conj(a.at(lp, sp, rp));
          }
    std::size_t dim = a.right;
    for (int p = lo + 1; p < hi; ++p) {
      const auto& m = tensors_[idx(p)];
      std::vector<cplx> nt(4 * m.right * m.right, cplx{});
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t sp = 0; sp < 2; ++sp)
          for (std::size_t x = 0; x < dim; ++x)
            for (std::size_t xp = 0; xp < dim; ++xp) {
              const cplx e = t[tix(s, sp, x, xp, dim)];
              if (e == cplx{}) continue;
              for (std::size_t u = 0; u < 2; ++u)
                for (std::size_t r = 0; r < m.right; ++r)
                  for (std::size_t rp = 0; rp < m.right; ++rp)
                    nt[tix(s, sp, r, rp, m.right)] += e * m.at(x, u, r) * std::conj(m.at(xp, u, rp));
            }
      t = std::move(nt);
      dim = m.right;
    }
    const ComplexMatrix right = right_environment(hi);
    const auto& b = tensors_[idx(hi)];
    ComplexMatrix rho(4, 4);
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t sp = 0; sp < 2; ++sp)
        for (std::size_t x = 0; x < dim; ++x)
          for (std::size_t xp = 0; xp < dim; ++xp) {
            const cplx e = t[tix(s, sp, x, xp, dim)];
            if (e == cplx{}) continue;
            for (std::size_t u = 0; u < 2; ++u)
              for (std::size_t up = 0; up < 2; ++up)
                for (std::size_t r = 0; r < b.right; ++r)
                  for (std::size_t rp = 0; rp < b.right; ++rp)
                    rho(s * 2 + u, sp * 2 + up) += e * b.at(x, u, r) * std::conj(b.at(xp, up, rp)) * right(r, rp);
          }
    PairDensityMatrix out(std::move(rho));
    return pi < pj ? out : out.swapped();
  }

  /// Probability that measuring `qubit` yields `outcome`.
  double outcome_probability(int qubit, int outcome) const {
    check_qubit(qubit, "outcome_probability");
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    const int p = position_of(qubit);
    const ComplexMatrix left = left_environment(p);
    const ComplexMatrix right = right_environment(p);
    const auto& a = tensors_[idx(p)];
    cplx acc{};
    for (std::size_t l = 0; l < a.left; ++l)
      for (std::size_t lp = 0; lp < a.left; ++lp)
        for (std::size_t r = 0; r < a.right; ++r)
          for (std::size_t rp = 0; rp < a.right; ++rp)
            acc += left(l, lp) * a.at(l, static_cast<std::size_t>(outcome), r) *
                   std::conj(a.at(lp, static_cast<std::size_t>(outcome), rp)) * right(r, rp);
    return acc.real();
  }

  /// Projects `qubit` onto |outcome> and renormalizes; returns the branch
  /// probability.
  double postselect(int qubit, int outcome) {
    const double p = outcome_probability(qubit, outcome);
    if (p < kZeroProbability) throw std::domain_error("MpsState::postselect: outcome has zero probability");
    move_center_to(position_of(qubit));
    auto& a = tensors_[idx(center_)];
    const double scale = 1.0 / std::sqrt(p);
    for (std::size_t l = 0; l < a.left; ++l)
      for (std::size_t r = 0; r < a.right; ++r) {
        a.at(l, static_cast<std::size_t>(1 - outcome), r) = 0.0;
        a.at(l, static_cast<std::size_t>(outcome), r) *= scale;
      }
    return p;
  }

  double norm_sq() const {
    ComplexMatrix env = ComplexMatrix::identity(1);
    for (int p = 1; p <= n_; ++p) env = transfer_right(env, tensors_[idx(p)]);
    return env(0, 0).real();
  }

  /// Max deviation from the isometry conditions implied by the center.
  double canonical_error() const {
    double err = 0.0;
    for (int p = 1; p <= n_; ++p) {
      if (p == center_) continue;
      const auto& t = tensors_[idx(p)];
      if (p < center_) {
        const auto m = t.as_left_matrix();
        err = std::max(err, max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.cols())));
      } else {
        const auto m = t.as_right_matrix();
        err = std::max(err, max_abs_diff(m * m.adjoint(), ComplexMatrix::identity(m.rows())));
      }
    }
    return err;
  }

  /// Full contraction into the logical qubit order (n <= 12).
  PureState to_statevector() const {
    if (n_ > kStatevectorMaxQubits)
      throw std::invalid_argument("MpsState::to_statevector: more than 12 qubits");
    // psi[(physical prefix), bond]
    std::vector<cplx> acc(tensors_[0].data.begin(), tensors_[0].data.end());
    std::size_t prefix = 2, bond = tensors_[0].right;
    for (int p = 2; p <= n_; ++p) {
      const auto& t = tensors_[idx(p)];
      std::vector<cplx> next(prefix * 2 * t.right, cplx{});
      for (std::size_t x = 0; x < prefix; ++x)
        for (std::size_t m = 0; m < bond; ++m) {
          const cplx v = acc[x * bond + m];
          if (v == cplx{}) continue;
          for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t r = 0; r < t.right; ++r) next[((x * 2 + s) * t.right) + r] += v * t.at(m, s, r);
        }
      acc = std::move(next);
      prefix *= 2;
      bond = t.right;
    }
    std::vector<cplx> amps(acc.size(), cplx{});
    for (std::size_t phys = 0; phys < acc.size(); ++phys) {
      std::size_t logical = 0;
      for (int p = 1; p <= n_; ++p) {
        const std::size_t bit = (phys >> (n_ - p)) & 1u;
        logical |= bit << (n_ - qubit_at(p));
      }
      amps[logical] = acc[phys];
    }
    return PureState(n_, std::move(amps));
  }

 private:
  std::size_t idx(int position) const { return static_cast<std::size_t>(position - 1); }

  void check_qubit(int q, const char* what) const {
    if (q < 1 || q > n_) throw std::out_of_range(std::string("MpsState::") + what + ": qubit out of range");
  }
  void check_position(int p, const char* what) const {
    if (p < 1 || p > n_) throw std::out_of_range(std::string("MpsState::") + what + ": position out of range");
  }

  void bring_center_to_pair(int lo) {
    if (center_ < lo) move_center_to(lo);
    else if (center_ > lo + 1) move_center_to(lo + 1);
  }

  void exchange_positions(int lo) {
    const int qa = qubit_at(lo), qb = qubit_at(lo + 1);
    qubit_[idx(lo)] = qb;
    qubit_[idx(lo + 1)] = qa;
    position_[static_cast<std::size_t>(qa - 1)] = lo + 1;
    position_[static_cast<std::size_t>(qb - 1)] = lo;
  }

  // E'[r, r'] = sum E[l, l'] A[l, s, r] conj(A[l', s, r'])
  static ComplexMatrix transfer_right(const ComplexMatrix& env, const SiteTensor& a) {
    ComplexMatrix out(a.right, a.right);
    for (std::size_t l = 0; l < a.left; ++l)
      for (std::size_t lp = 0; lp < a.left; ++lp) {
        const cplx e = env(l, lp);
        if (e == cplx{}) continue;
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t r = 0; r < a.right; ++r)
            for (std::size_t rp = 0; rp < a.right; ++rp)
              out(r, rp) += e * a.at(l, s, r) * std::conj(a.at(lp, s, rp));
      }
    return out;
  }

  // E'[l, l'] = sum A[l, s, r] conj(A[l', s, r']) E[r, r']
  static ComplexMatrix transfer_left(const ComplexMatrix& env, const SiteTensor& a) {
    ComplexMatrix out(a.left, a.left);
    for (std::size_t r = 0; r < a.right; ++r)
      for (std::size_t rp = 0; rp < a.right; ++rp) {
        const cplx e = env(r, rp);
        if (e == cplx{}) continue;
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t l = 0; l < a.left; ++l)
            for (std::size_t lp = 0; lp < a.left; ++lp)
              out(l, lp) += a.at(l, s, r) * std::conj(a.at(lp, s, rp)) * e;
      }
    return out;
  }

  // Environment on the bond left of `position`; identity when every site to
  // the left is left-isometric.
  ComplexMatrix left_environment(int position) const {
    if (position <= center_) return ComplexMatrix::identity(tensors_[idx(position)].left);
    ComplexMatrix env = ComplexMatrix::identity(tensors_[idx(center_)].left);
    for (int p = center_; p < position; ++p) env = transfer_right(env, tensors_[idx(p)]);
    return env;
  }

  ComplexMatrix right_environment(int position) const {
    if (position >= center_) return ComplexMatrix::identity(tensors_[idx(position)].right);
    ComplexMatrix env = ComplexMatrix::identity(tensors_[idx(center_)].right);
    for (int p = center_; p > position; --p) env = transfer_left(env, tensors_[idx(p)]);
    return env;
  }

  int n_;
  int chi_max_;
  double trunc_tol_;
  int center_ = 1;
  double discarded_ = 0.0;
  std::vector<SiteTensor> tensors_;
  std::vector<int> position_;  // logical qubit -> chain position
  std::vector<int> qubit_;     // chain position -> logical qubit
};

}  // namespace symment
