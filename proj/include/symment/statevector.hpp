#pragma once

// Exact 2^N amplitude simulator, capped at 12 qubits. This is the reference
// every other path in the library is checked against.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symment/density.hpp"
#include "symment/protocols.hpp"
#include "symment/tensor_core.hpp"

namespace symment {

inline constexpr int kStatevectorMaxQubits = 12;
inline constexpr double kZeroProbability = 1e-14;

/// Amplitudes of an n-qubit pure state; basis index = sum_i q_i 2^(n-i).
class PureState {
 public:
  PureState(int n_qubits, std::vector<cplx> amplitudes)
      : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_ < 1 || n_ > kStatevectorMaxQubits)
      throw std::invalid_argument("PureState: qubit count outside [1, 12]");
    if (amps_.size() != (std::size_t{1} << n_))
      throw std::invalid_argument("PureState: amplitude count must be 2^n");
  }

  int n_qubits() const { return n_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  const cplx& operator[](std::size_t idx) const { return amps_[idx]; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& z : amps_) s += std::norm(z);
    return s;
  }

  /// Bit position (from the least significant end) of 1-based qubit `site`.
  std::size_t bit_of(int site) const { return static_cast<std::size_t>(n_ - site); }

 private:
  int n_;
  std::vector<cplx> amps_;
};

namespace sv {

namespace detail {
inline void check_site(const PureState& s, int site, const char* what) {
  if (site < 1 || site > s.n_qubits())
    throw std::out_of_range(std::string(what) + ": site out of range");
}
}  // namespace detail

inline PureState init(int n) {
  if (n < 1 || n > kStatevectorMaxQubits)
    throw std::invalid_argument("sv::init: statevector backend supports 1..12 qubits");
  std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0, 0.0});
  amps[0] = 1.0;
  return PureState(n, std::move(amps));
}

inline PureState apply_1q(const PureState& state, const ComplexMatrix& gate, int site) {
  detail::check_site(state, site, "sv::apply_1q");
  if (gate.rows() != 2 || gate.cols() != 2 || !is_unitary(gate, 1e-12))
    throw std::invalid_argument("sv::apply_1q: gate must be a 2x2 unitary");
  std::vector<cplx> out = state.amplitudes();
  const std::size_t mask = std::size_t{1} << state.bit_of(site);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    if (idx & mask) continue;
    const cplx a0 = out[idx], a1 = out[idx | mask];
    out[idx] = gate(0, 0) * a0 + gate(0, 1) * a1;
    out[idx | mask] = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
  return PureState(state.n_qubits(), std::move(out));
}

inline PureState apply_cx(const PureState& state, int control, int target) {
  detail::check_site(state, control, "sv::apply_cx");
  detail::check_site(state, target, "sv::apply_cx");
  if (control == target) throw std::invalid_argument("sv::apply_cx: control equals target");
  std::vector<cplx> out = state.amplitudes();
  const std::size_t cmask = std::size_t{1} << state.bit_of(control);
  const std::size_t tmask = std::size_t{1} << state.bit_of(target);
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    if ((idx & cmask) && !(idx & tmask)) std::swap(out[idx], out[idx | tmask]);
  return PureState(state.n_qubits(), std::move(out));
}

inline PureState run(PureState state, const Circuit& circuit) {
  if (circuit.n_qubits() != state.n_qubits())
    throw std::invalid_argument("sv::run: circuit and state qubit counts differ");
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateOp::Kind::single)
      state = apply_1q(state, single_qubit_gate(op.family, op.theta), op.site);
    else
      state = apply_cx(state, op.control, op.target);
  }
  return state;
}

inline PureState run(const Circuit& circuit) { return run(init(circuit.n_qubits()), circuit); }

/// Brute-force partial trace over every qubit except i and j.
inline PairDensityMatrix pair_rdm(const PureState& state, int i, int j) {
  detail::check_site(state, i, "sv::pair_rdm");
  detail::check_site(state, j, "sv::pair_rdm");
  if (i == j) throw std::invalid_argument("sv::pair_rdm: i equals j");
  const std::size_t mi = std::size_t{1} << state.bit_of(i);
  const std::size_t mj = std::size_t{1} << state.bit_of(j);
  const std::size_t pair_offsets[4] = {0, mj, mi, mi | mj};
  ComplexMatrix rho(4, 4);
  const auto& a = state.amplitudes();
  for (std::size_t env = 0; env < a.size(); ++env) {
    if (env & (mi | mj)) continue;
    cplx v[4];
    for (int k = 0; k < 4; ++k) v[k] = a[env | pair_offsets[k]];
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) rho(r, c) += v[r] * std::conj(v[c]);
  }
  return PairDensityMatrix(std::move(rho));
}

/// 2x2 reduced state of a single qubit.
inline ComplexMatrix single_rdm(const PureState& state, int i) {
  detail::check_site(state, i, "sv::single_rdm");
  const std::size_t mi = std::size_t{1} << state.bit_of(i);
  ComplexMatrix rho(2, 2);
  const auto& a = state.amplitudes();
  for (std::size_t env = 0; env < a.size(); ++env) {
    if (env & mi) continue;
    const cplx v[2] = {a[env], a[env | mi]};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) rho(r, c) += v[r] * std::conj(v[c]);
  }
  return rho;
}

inline double outcome_probability(const PureState& state, int site, int outcome) {
  detail::check_site(state, site, "sv::outcome_probability");
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  const std::size_t mask = std::size_t{1} << state.bit_of(site);
  double p = 0.0;
  const auto& a = state.amplitudes();
  for (std::size_t idx = 0; idx < a.size(); ++idx)
    if (((idx & mask) != 0) == (outcome == 1)) p += std::norm(a[idx]);
  return p;
}

struct Postselected {
  PureState state;
  double probability;
};

/// Projects `site` onto |outcome> and renormalizes the surviving branch.
inline Postselected postselect(const PureState& state, int site, int outcome) {
  const double p = outcome_probability(state, site, outcome);
  if (p < kZeroProbability) throw std::domain_error("sv::postselect: outcome has zero probability");
  const std::size_t mask = std::size_t{1} << state.bit_of(site);
  std::vector<cplx> out = state.amplitudes();
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    out[idx] = (((idx & mask) != 0) == (outcome == 1)) ? out[idx] * scale : cplx{0.0, 0.0};
  return {PureState(state.n_qubits(), std::move(out)), p};
}

}  // namespace sv
}  // namespace symment
