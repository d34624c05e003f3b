#pragma once

// Closed-form pair states and concurrences for each protocol family.
//
// Pair bases are |left, right> along the chain and |outer, central> for the
// star. The star central-pair matrix is the exact partial trace of the
// 4-qubit star state (w = a^4 b^2 + b^6). The periodic families follow the
// even-site anchoring of build_periodic: pairs (i, i+1) with i even see
// angles (theta2, theta1, theta2) on sites (i-1, i, i+1), odd pairs the
// reverse.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symment/density.hpp"
#include "symment/entanglement.hpp"

namespace symment {

enum class FormulaFamily {
  star_central,
  star_ring_0,
  star_ring_1,
  linear_bulk,
  linear_edge,
  periodic_even,
  periodic_odd,
  end_pair_case13,
};

inline constexpr FormulaFamily kAllFamilies[] = {
    FormulaFamily::star_central,  FormulaFamily::star_ring_0,   FormulaFamily::star_ring_1,
    FormulaFamily::linear_bulk,   FormulaFamily::linear_edge,   FormulaFamily::periodic_even,
    FormulaFamily::periodic_odd,  FormulaFamily::end_pair_case13,
};

inline std::string_view family_name(FormulaFamily f) {
  switch (f) {
    case FormulaFamily::star_central: return "star_central";
    case FormulaFamily::star_ring_0: return "star_ring_0";
    case FormulaFamily::star_ring_1: return "star_ring_1";
    case FormulaFamily::linear_bulk: return "linear_bulk";
    case FormulaFamily::linear_edge: return "linear_edge";
    case FormulaFamily::periodic_even: return "periodic_even";
    case FormulaFamily::periodic_odd: return "periodic_odd";
    case FormulaFamily::end_pair_case13: return "end_pair_case13";
  }
  return "unknown";
}

inline bool needs_second_angle(FormulaFamily f) {
  return f == FormulaFamily::periodic_even || f == FormulaFamily::periodic_odd;
}

/// a = sin(theta/2), b = cos(theta/2), and the same for the optional theta2.
struct AngleParams {
  double theta = 0.0;
  double a = 0.0, b = 1.0;
  std::optional<double> theta2;
  double a2 = 0.0, b2 = 1.0;
};

inline AngleParams unitary_params(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("unitary_params: non-finite angle");
  AngleParams p;
  p.theta = theta;
  p.a = std::sin(theta / 2.0);
  p.b = std::cos(theta / 2.0);
  return p;
}

inline AngleParams unitary_params(double theta1, double theta2) {
  AngleParams p = unitary_params(theta1);
  const AngleParams q = unitary_params(theta2);
  p.theta2 = theta2;
  p.a2 = q.a;
  p.b2 = q.b;
  return p;
}

namespace detail {
inline void check_arity(FormulaFamily f, const AngleParams& p) {
  if (needs_second_angle(f) != p.theta2.has_value())
    throw std::invalid_argument(std::string("family ") + std::string(family_name(f)) +
                                (needs_second_angle(f) ? " needs two angles" : " takes one angle"));
}

inline PairDensityMatrix xmatrix(double x, double y, double z, double w, double u, double d) {
  return xstate_matrix(XStateParams{x, y, z, w, u, d});
}
}  // namespace detail

inline PairDensityMatrix analytic_pair_rdm(FormulaFamily family, const AngleParams& p) {
  detail::check_arity(family, p);
  const double a = p.a, b = p.b;
  const double a2 = a * a, b2 = b * b;
  switch (family) {
    case FormulaFamily::star_central:
      return detail::xmatrix(a2 * a2 * a2 + a2 * b2 * b2, 2 * a2 * a2 * b2, 2 * a2 * b2 * b2,
                             a2 * a2 * b2 + b2 * b2 * b2, a * b * (a2 * a2 + b2 * b2), 2 * a2 * a * b2 * b);
    case FormulaFamily::star_ring_0: {
      const double norm = a2 * a2 * a2 + 3 * a2 * b2 * b2;
      if (norm < 1e-14) throw std::domain_error("star_ring_0: outcome 0 has zero probability");
      const double k = 1.0 / norm;
      return detail::xmatrix(k * a2 * a2 * a2, k * a2 * b2 * b2, k * a2 * b2 * b2, k * a2 * b2 * b2,
                             k * a2 * a2 * b2, k * a2 * b2 * b2);
    }
    case FormulaFamily::star_ring_1: {
      const double norm = 3 * a2 * a2 * b2 + b2 * b2 * b2;
      if (norm < 1e-14) throw std::domain_error("star_ring_1: outcome 1 has zero probability");
      const double k = 1.0 / norm;
      return detail::xmatrix(k * a2 * a2 * b2, k * a2 * a2 * b2, k * a2 * a2 * b2, k * b2 * b2 * b2,
                             k * a2 * b2 * b2, k * a2 * a2 * b2);
    }
    case FormulaFamily::linear_bulk: {
      const double w = a2 * b2;
      return detail::xmatrix(a2 * a2 * a2 + b2 * b2 * b2, w, w, w, a * b * (a2 * a2 + b2 * b2),
                             2 * (a2 * a2 * a * b2 * b + a2 * a * b2 * b2 * b));
    }
    case FormulaFamily::periodic_odd: {
      // sites (i-1, i, i+1) carry (theta1, theta2, theta1)
      const double c1 = a2, d1 = b2, c2 = p.a2 * p.a2, d2 = p.b2 * p.b2;
      const double y = c1 * d1;
      return detail::xmatrix(c1 * c1 * c2 + d1 * d1 * d2, y, y, c1 * c1 * d2 + d1 * d1 * c2,
                             p.a2 * p.b2 * (c1 * c1 + d1 * d1), 2 * c1 * p.a2 * d1 * p.b2);
    }
    case FormulaFamily::periodic_even: {
      // sites (i-1, i, i+1) carry (theta2, theta1, theta2)
      const double c1 = a2, d1 = b2, c2 = p.a2 * p.a2, d2 = p.b2 * p.b2;
      const double y = c2 * d2;
      return detail::xmatrix(c1 * c2 * c2 + d1 * d2 * d2, y, y, c1 * d2 * d2 + d1 * c2 * c2,
                             a * b * (c2 * c2 + d2 * d2), 2 * a * c2 * b * d2);
    }
    case FormulaFamily::linear_edge:
    case FormulaFamily::end_pair_case13:
      break;
  }
  throw std::invalid_argument(std::string("family ") + std::string(family_name(family)) +
                              " has no closed-form pair matrix");
}

inline double analytic_concurrence(FormulaFamily family, const AngleParams& p) {
  detail::check_arity(family, p);
  const double t = p.theta;
  double value = 0.0;
  switch (family) {
    case FormulaFamily::star_central: {
      const double u = p.a * p.b * (std::pow(p.a, 4) + std::pow(p.b, 4));
      const double d = 2.0 * std::pow(p.a * p.b, 3);
      value = 2.0 * std::max(0.0, std::abs(u) - std::abs(d));
      break;
    }
    case FormulaFamily::star_ring_0:
    case FormulaFamily::star_ring_1:
      value = xstate_concurrence(extract_xstate(analytic_pair_rdm(family, p))).value;
      break;
    case FormulaFamily::linear_bulk: {
      const double common = -2.0 + 2.0 * std::cos(2.0 * t);
      const double odd = 5.0 * std::sin(t) + std::sin(3.0 * t);
      value = std::max({0.0, (common + odd) / 8.0, (common - odd) / 8.0});
      break;
    }
    case FormulaFamily::linear_edge:
      value = std::abs(std::sin(t) * std::cos(t));
      break;
    case FormulaFamily::periodic_even: {
      const double t2 = *p.theta2;
      const double common = -1.0 + std::cos(2.0 * t2);
      const double odd = (3.0 + std::cos(2.0 * t2)) * std::sin(t);
      value = std::max({0.0, (common + odd) / 4.0, (common - odd) / 4.0});
      break;
    }
    case FormulaFamily::periodic_odd: {
      const double t2 = *p.theta2;
      const double sc = std::sin(t / 2.0) * std::cos(t / 2.0);
      const double common = -2.0 * sc * sc;
      const double odd = 0.25 * (3.0 + std::cos(2.0 * t)) * std::sin(t2);
      value = std::max({0.0, common + odd, common - odd});
      break;
    }
    case FormulaFamily::end_pair_case13: {
      const double c = std::cos(t / 2.0), s = std::sin(t / 2.0);
      value = 2.0 * std::abs(c * s * (c * c - s * s));
      break;
    }
  }
  return std::min(value, 1.0);
}

/// Angle of maximal bulk concurrence on [0, pi/2]: sin(theta) = (sqrt(7) - 1) / 3.
inline double linear_theta_opt() { return std::asin((std::sqrt(7.0) - 1.0) / 3.0); }

}  // namespace symment
