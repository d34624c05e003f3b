#pragma once

// Gate sequences for the star, linear (cases 1-4) and periodic protocols.
// Sites are 1-based everywhere; qubit 1 is the most significant bit of a
// basis index.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "symment/tensor_core.hpp"

namespace symment {

/// Which single-qubit family a `single` gate instantiates.
///   reflection: U(θ) = [[a, b], [b, -a]], a = sin(θ/2), b = cos(θ/2)
///   rotation:   R_y(θ) = [[c, -s], [s, c]], c = cos(θ/2), s = sin(θ/2)
/// Every protocol uses `reflection`; `rotation` reproduces the closed-form
/// states written for the end-to-end chain (cases 1 and 3) in rotation form.
enum class SingleQubitFamily { reflection, rotation };

inline ComplexMatrix unitary_gate(double theta) {
  const double a = std::sin(theta / 2.0);
  const double b = std::cos(theta / 2.0);
  return ComplexMatrix(2, 2, {a, b, b, -a});
}

inline ComplexMatrix rotation_gate(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return ComplexMatrix(2, 2, {c, -s, s, c});
}

inline ComplexMatrix single_qubit_gate(SingleQubitFamily family, double theta) {
  return family == SingleQubitFamily::reflection ? unitary_gate(theta) : rotation_gate(theta);
}

/// CX on an ordered pair (first qubit = control), basis |q_first q_second>.
inline ComplexMatrix cx_gate() {
  return ComplexMatrix(4, 4, {1, 0, 0, 0,  //
                              0, 1, 0, 0,  //
                              0, 0, 0, 1,  //
                              0, 0, 1, 0});
}

/// CX with control on the second qubit of the ordered pair.
inline ComplexMatrix cx_reversed_gate() {
  return ComplexMatrix(4, 4, {1, 0, 0, 0,  //
                              0, 0, 0, 1,  //
                              0, 0, 1, 0,  //
                              0, 1, 0, 0});
}

inline ComplexMatrix swap_gate() {
  return ComplexMatrix(4, 4, {1, 0, 0, 0,  //
                              0, 0, 1, 0,  //
                              0, 1, 0, 0,  //
                              0, 0, 0, 1});
}

struct GateOp {
  enum class Kind { single, cx };
  Kind kind = Kind::single;
  int site = 0;     // single
  double theta = 0.0;
  SingleQubitFamily family = SingleQubitFamily::reflection;
  int control = 0;  // cx
  int target = 0;

  static GateOp single(int site, double theta,
                       SingleQubitFamily family = SingleQubitFamily::reflection) {
    GateOp op;
    op.kind = Kind::single;
    op.site = site;
    op.theta = theta;
    op.family = family;
    return op;
  }
  static GateOp cx(int control, int target) {
    GateOp op;
    op.kind = Kind::cx;
    op.control = control;
    op.target = target;
    return op;
  }

  bool operator==(const GateOp&) const = default;
};

class Circuit {
 public:
  explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("Circuit: n_qubits must be >= 1");
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<GateOp>& ops() const { return ops_; }

  void append(const GateOp& op) {
    auto in_range = [&](int s) { return s >= 1 && s <= n_qubits_; };
    if (op.kind == GateOp::Kind::single) {
      if (!in_range(op.site)) throw std::out_of_range("Circuit: gate site out of range");
      if (!std::isfinite(op.theta)) throw std::invalid_argument("Circuit: non-finite angle");
    } else {
      if (!in_range(op.control) || !in_range(op.target))
        throw std::out_of_range("Circuit: CX site out of range");
      if (op.control == op.target) throw std::invalid_argument("Circuit: CX control equals target");
    }
    ops_.push_back(op);
  }

  bool operator==(const Circuit&) const = default;

 private:
  int n_qubits_;
  std::vector<GateOp> ops_;
};

// ---------------------------------------------------------------------------
// Protocol descriptions

struct StarProtocol {
  int n_outer = 3;
  double theta = 0.0;
};

struct LinearProtocol {
  int n = 10;
  int case_id = 4;
  double theta = 0.0;
};

struct PeriodicProtocol {
  int n = 10;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

using ProtocolSpec = std::variant<StarProtocol, LinearProtocol, PeriodicProtocol>;

/// Outer qubits are 1..n_outer, the central qubit is n_outer + 1. For
/// k = n_outer down to 1: U(θ) on k, then CX(k -> central).
inline Circuit build_star(int n_outer, double theta) {
  if (n_outer < 1) throw std::invalid_argument("build_star: n_outer must be >= 1");
  const int central = n_outer + 1;
  Circuit c(central);
  for (int k = n_outer; k >= 1; --k) {
    c.append(GateOp::single(k, theta));
    c.append(GateOp::cx(k, central));
  }
  return c;
}

/// Linear chain orderings:
///   case 1: i = n..2,   U on i, CX(i -> i-1)
///   case 2: i = 2..n,   U on i, CX(i -> i-1)
///   case 3: i = 1..n-1, U on i, CX(i -> i+1)
///   case 4: i = n-1..1, U on i, CX(i -> i+1)
inline Circuit build_linear(int n, int case_id, double theta,
                            SingleQubitFamily family = SingleQubitFamily::reflection) {
  if (n < 2) throw std::invalid_argument("build_linear: n must be >= 2");
  Circuit c(n);
  auto step = [&](int site, int target) {
    c.append(GateOp::single(site, theta, family));
    c.append(GateOp::cx(site, target));
  };
  switch (case_id) {
    case 1:
      for (int i = n; i >= 2; --i) step(i, i - 1);
      break;
    case 2:
      for (int i = 2; i <= n; ++i) step(i, i - 1);
      break;
    case 3:
      for (int i = 1; i <= n - 1; ++i) step(i, i + 1);
      break;
    case 4:
      for (int i = n - 1; i >= 1; --i) step(i, i + 1);
      break;
    default:
      throw std::invalid_argument("build_linear: case must be 1, 2, 3 or 4");
  }
  return c;
}

/// Angle applied on site i by the periodic protocol: θ1 on even sites,
/// θ2 on odd sites. With this anchoring every bulk pair (i, i+1) with i even
/// carries the first closed-form family and i odd the second, for any n.
inline double periodic_site_angle(int site, double theta1, double theta2) {
  return site % 2 == 0 ? theta1 : theta2;
}

/// Case-4 ordering with alternating angles.
inline Circuit build_periodic(int n, double theta1, double theta2) {
  if (n < 4) throw std::invalid_argument("build_periodic: n must be >= 4");
  Circuit c(n);
  for (int i = n - 1; i >= 1; --i) {
    c.append(GateOp::single(i, periodic_site_angle(i, theta1, theta2)));
    c.append(GateOp::cx(i, i + 1));
  }
  return c;
}

inline int protocol_qubits(const ProtocolSpec& spec) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StarProtocol>)
          return p.n_outer + 1;
        else
          return p.n;
      },
      spec);
}

inline Circuit build_protocol(const ProtocolSpec& spec) {
  return std::visit(
      [](const auto& p) -> Circuit {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StarProtocol>) {
          return build_star(p.n_outer, p.theta);
        } else if constexpr (std::is_same_v<T, LinearProtocol>) {
          if (p.n < 3) throw std::invalid_argument("linear protocol: n must be >= 3");
          return build_linear(p.n, p.case_id, p.theta);
        } else {
          return build_periodic(p.n, p.theta1, p.theta2);
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Text format: header `QUBITS <n>`, then one op per line,
// `U <site> <theta>`, `RY <site> <theta>` or `CX <control> <target>`.
// Angles are printed with 17 significant digits.

inline std::string to_text(const Circuit& c) {
  std::ostringstream out;
  out << "QUBITS " << c.n_qubits() << '\n';
  char buf[64];
  for (const auto& op : c.ops()) {
    if (op.kind == GateOp::Kind::single) {
      std::snprintf(buf, sizeof buf, "%.17g", op.theta);
      out << (op.family == SingleQubitFamily::reflection ? "U " : "RY ") << op.site << ' ' << buf
          << '\n';
    } else {
      out << "CX " << op.control << ' ' << op.target << '\n';
    }
  }
  return out.str();
}

inline Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int n = 0;
  if (!(in >> word) || word != "QUBITS" || !(in >> n))
    throw std::invalid_argument("parse_circuit: missing QUBITS header");
  Circuit c(n);
  while (in >> word) {
    if (word == "U" || word == "RY") {
      int site = 0;
      std::string angle;
      if (!(in >> site >> angle)) throw std::invalid_argument("parse_circuit: malformed " + word);
      const auto family = word == "U" ? SingleQubitFamily::reflection : SingleQubitFamily::rotation;
      c.append(GateOp::single(site, std::stod(angle), family));
    } else if (word == "CX") {
      int control = 0, target = 0;
      if (!(in >> control >> target)) throw std::invalid_argument("parse_circuit: malformed CX");
      c.append(GateOp::cx(control, target));
    } else {
      throw std::invalid_argument("parse_circuit: unknown op '" + word + "'");
    }
  }
  return c;
}

}  // namespace symment
