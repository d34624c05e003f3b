#pragma once

// Angle sweeps over the protocols: pair concurrences as tables, comparison
// against the closed forms, and MPS-versus-statevector validation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "symment/analytic.hpp"
#include "symment/entanglement.hpp"
#include "symment/mps.hpp"
#include "symment/parallel.hpp"
#include "symment/protocols.hpp"
#include "symment/statevector.hpp"

namespace symment {

/// Bad user input (maps to exit code 2 in the CLI).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kCompareThreshold = 1e-8;
inline constexpr double kOracleRdmThreshold = 1e-12;
inline constexpr double kOracleConcurrenceThreshold = 1e-10;
inline constexpr double kExactSweepDiscardLimit = 1e-14;

/// Parses "1.5", "pi", "2pi", "pi/2", "3pi/4", "-0.25pi".
inline double parse_angle(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw UsageError("empty angle");
  double divisor = 1.0;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    try {
      divisor = std::stod(s.substr(slash + 1));
    } catch (const std::exception&) {
      throw UsageError("malformed angle '" + text + "'");
    }
    s = s.substr(0, slash);
  }
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = s.substr(0, s.size() - 2);
    if (s.empty() || s == "+") s = "1";
    if (s == "-") s = "-1";
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("malformed angle '" + text + "'");
  }
  if (used != s.size() || divisor == 0.0) throw UsageError("malformed angle '" + text + "'");
  return v * factor / divisor;
}

/// Inclusive angle grid; a single-point grid has start == stop.
struct AngleGrid {
  double start = 0.0;
  double stop = 2.0 * std::numbers::pi;
  int steps = 201;

  std::vector<double> points() const {
    if (steps == 1) return {start};
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) out[static_cast<std::size_t>(k)] = start + (stop - start) * k / (steps - 1);
    out.back() = stop;
    return out;
  }

  /// "a:b:steps" (endpoints inclusive) or a single angle.
  static AngleGrid parse(const std::string& text) {
    const auto first = text.find(':');
    if (first == std::string::npos) {
      const double v = parse_angle(text);
      return {v, v, 1};
    }
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos) throw UsageError("angle grid must be 'start:stop:steps'");
    AngleGrid g;
    g.start = parse_angle(text.substr(0, first));
    g.stop = parse_angle(text.substr(first + 1, second - first - 1));
    try {
      g.steps = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
      throw UsageError("angle grid steps must be an integer");
    }
    if (g.steps < 2) throw UsageError("angle grid needs steps >= 2");
    if (!(g.start < g.stop)) throw UsageError("angle grid needs start < stop");
    return g;
  }
};

enum class ProtocolKind { star, linear, periodic };
enum class Backend { mps, statevector, automatic };
enum class OutputFormat { csv, json };

struct SweepConfig {
  ProtocolKind protocol = ProtocolKind::linear;
  int case_id = 4;
  int n = 10;
  int n_outer = 3;
  AngleGrid theta;
  std::optional<AngleGrid> theta2;
  std::optional<double> theta2_offset;
  std::string pairs = "all-adjacent";
  std::optional<int> postselect;
  Backend backend = Backend::automatic;
  int chi_max = kDefaultChiMax;
  double trunc_tol = kDefaultTruncTol;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::uint64_t> seed;
  /// Test hook: added to every closed-form value.
  double analytic_offset = 0.0;

  int qubits() const { return protocol == ProtocolKind::star ? n_outer + 1 : n; }
  int central() const { return n_outer + 1; }
};

struct QubitPair {
  int left = 0;
  int right = 0;
  auto operator<=>(const QubitPair&) const = default;
};

struct GridPoint {
  double theta = 0.0;
  std::optional<double> theta2;
};

struct OutputRow {
  double theta = 0.0;
  std::optional<double> theta2;
  int pair_left = 0;
  int pair_right = 0;
  std::optional<double> concurrence_numeric;  // empty when the post-selected branch has zero probability
  std::optional<double> concurrence_analytic;
  std::optional<double> abs_error;
  std::optional<int> postselect_outcome;
  std::optional<double> postselect_probability;

  bool operator==(const OutputRow&) const = default;
};

inline void validate(const SweepConfig& c) {
  if (c.protocol == ProtocolKind::star) {
    if (c.n_outer < 1) throw UsageError("--n-outer must be >= 1");
  } else {
    if (c.protocol == ProtocolKind::linear && c.n < 3) throw UsageError("--n must be >= 3 for the linear protocol");
    if (c.protocol == ProtocolKind::periodic && c.n < 4) throw UsageError("--n must be >= 4 for the periodic protocol");
    if (c.protocol == ProtocolKind::linear && (c.case_id < 1 || c.case_id > 4)) throw UsageError("--case must be 1..4");
  }
  if (c.postselect && c.protocol != ProtocolKind::star) throw UsageError("--postselect is only valid with the star protocol");
  if (c.postselect && *c.postselect != 0 && *c.postselect != 1) throw UsageError("--postselect must be 0 or 1");
  if (c.postselect && c.n_outer < 2) throw UsageError("--postselect needs at least two outer qubits");
  const bool has_second = c.theta2.has_value() || c.theta2_offset.has_value();
  if (c.theta2 && c.theta2_offset) throw UsageError("use either --theta2 or --theta2-offset, not both");
  if (c.protocol == ProtocolKind::periodic && !has_second) throw UsageError("periodic protocol needs --theta2 or --theta2-offset");
  if (c.protocol != ProtocolKind::periodic && has_second) throw UsageError("--theta2 applies to the periodic protocol only");
  if (c.chi_max < 2) throw UsageError("--chi-max must be >= 2");
  if (!(c.trunc_tol >= 0.0)) throw UsageError("--trunc-tol must be >= 0");
  if (c.backend == Backend::statevector && c.qubits() > kStatevectorMaxQubits)
    throw UsageError("statevector backend supports at most 12 qubits; use --backend mps or auto for " +
                     std::to_string(c.qubits()) + " qubits");
}

inline Backend resolve_backend(const SweepConfig& c) {
  if (c.backend != Backend::automatic) return c.backend;
  return c.qubits() <= kStatevectorMaxQubits ? Backend::statevector : Backend::mps;
}

inline std::vector<GridPoint> grid_points(const SweepConfig& c) {
  std::vector<GridPoint> out;
  for (double t : c.theta.points()) {
    if (c.theta2) {
      for (double t2 : c.theta2->points()) out.push_back({t, t2});
    } else if (c.theta2_offset) {
      out.push_back({t, t + *c.theta2_offset});
    } else {
      out.push_back({t, std::nullopt});
    }
  }
  return out;
}

inline ProtocolSpec protocol_at(const SweepConfig& c, const GridPoint& p) {
  switch (c.protocol) {
    case ProtocolKind::star: return StarProtocol{c.n_outer, p.theta};
    case ProtocolKind::linear: return LinearProtocol{c.n, c.case_id, p.theta};
    case ProtocolKind::periodic: return PeriodicProtocol{c.n, p.theta, p.theta2.value_or(p.theta)};
  }
  throw std::logic_error("unknown protocol");
}

/// Expands the --pairs argument: explicit "i-j,k-l" or one of the keywords
/// all-adjacent | bulk | bulk-center | edges | star-all.
inline std::vector<QubitPair> resolve_pairs(const SweepConfig& c) {
  const int n = c.qubits();
  std::vector<QubitPair> out;
  const bool star = c.protocol == ProtocolKind::star;
  const std::string& spec = c.pairs;
  auto star_central_pairs = [&] {
    for (int k = 1; k <= c.n_outer; ++k) out.push_back({k, c.central()});
  };
  if (spec == "all-adjacent") {
    if (star) star_central_pairs();
    else for (int i = 1; i < n; ++i) out.push_back({i, i + 1});
  } else if (spec == "star-all") {
    if (!star) throw UsageError("pairs 'star-all' is only valid for the star protocol");
    if (c.postselect) {
      for (int k = 1; k <= c.n_outer; ++k)
        for (int l = k + 1; l <= c.n_outer; ++l) out.push_back({k, l});
    } else {
      star_central_pairs();
    }
  } else if (spec == "bulk" || spec == "bulk-center" || spec == "edges") {
    if (star) throw UsageError("pairs '" + spec + "' is not valid for the star topology");
    if (spec == "bulk") for (int i = 2; i <= n - 2; ++i) out.push_back({i, i + 1});
    if (spec == "bulk-center") out.push_back({n / 2, n / 2 + 1});
    if (spec == "edges") out.push_back({1, 2}), out.push_back({n - 1, n});
  } else {
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) throw UsageError("pair '" + item + "' must look like i-j");
      QubitPair p;
      try {
        p.left = std::stoi(item.substr(0, dash));
        p.right = std::stoi(item.substr(dash + 1));
      } catch (const std::exception&) {
        throw UsageError("pair '" + item + "' must look like i-j");
      }
      if (p.left < 1 || p.right < 1 || p.left > n || p.right > n || p.left == p.right)
        throw UsageError("pair '" + item + "' is invalid for " + std::to_string(n) + " qubits");
      if (star && c.postselect && (p.left == c.central() || p.right == c.central()))
        throw UsageError("pair '" + item + "' includes the measured central qubit");
      out.push_back(p);
    }
    if (out.empty()) throw UsageError("no pairs requested");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Closed-form family governing `pair` under `c`, if any.
inline std::optional<FormulaFamily> family_for(const SweepConfig& c, const QubitPair& pair) {
  const int n = c.qubits();
  const bool adjacent = pair.right == pair.left + 1;
  switch (c.protocol) {
    case ProtocolKind::linear:
      if (!adjacent) return std::nullopt;
      if (c.case_id == 4) return (pair.left == 1 || pair.left == n - 1) ? FormulaFamily::linear_edge : FormulaFamily::linear_bulk;
      if (c.case_id == 1 && pair.left == 1) return FormulaFamily::end_pair_case13;
      if (c.case_id == 3 && pair.left == n - 1) return FormulaFamily::end_pair_case13;
      return std::nullopt;
    case ProtocolKind::periodic:
      if (!adjacent || pair.left < 2 || pair.left > n - 2) return std::nullopt;
      return pair.left % 2 == 0 ? FormulaFamily::periodic_even : FormulaFamily::periodic_odd;
    case ProtocolKind::star:
      if (c.n_outer != 3) return std::nullopt;
      if (!c.postselect) {
        if (pair.right == c.central() && pair.left <= c.n_outer) return FormulaFamily::star_central;
        return std::nullopt;
      }
      if (pair.left <= c.n_outer && pair.right <= c.n_outer)
        return *c.postselect == 0 ? FormulaFamily::star_ring_0 : FormulaFamily::star_ring_1;
      return std::nullopt;
  }
  return std::nullopt;
}

inline AngleParams angles_for(const GridPoint& p, FormulaFamily f) {
  return needs_second_angle(f) ? unitary_params(p.theta, p.theta2.value_or(p.theta)) : unitary_params(p.theta);
}

/// Final state of one protocol run on either backend.
class SimulatedState {
 public:
  explicit SimulatedState(PureState s) : state_(std::move(s)) {}
  explicit SimulatedState(MpsState s) : state_(std::move(s)) {}

  static SimulatedState run(const ProtocolSpec& spec, Backend backend, int chi_max = kDefaultChiMax,
                            double trunc_tol = kDefaultTruncTol) {
    const Circuit circuit = build_protocol(spec);
    if (backend == Backend::statevector) return SimulatedState(sv::run(circuit));
    MpsState mps(circuit.n_qubits(), chi_max, trunc_tol);
    mps.run(circuit);
    return SimulatedState(std::move(mps));
  }

  PairDensityMatrix pair_rdm(int i, int j) const {
    if (const auto* p = std::get_if<PureState>(&state_)) return sv::pair_rdm(*p, i, j);
    return std::get<MpsState>(state_).pair_rdm(i, j);
  }

  double outcome_probability(int site, int outcome) const {
    if (const auto* p = std::get_if<PureState>(&state_)) return sv::outcome_probability(*p, site, outcome);
    return std::get<MpsState>(state_).outcome_probability(site, outcome);
  }

  double postselect(int site, int outcome) {
    if (auto* p = std::get_if<PureState>(&state_)) {
      auto r = sv::postselect(*p, site, outcome);
      *p = std::move(r.state);
      return r.probability;
    }
    return std::get<MpsState>(state_).postselect(site, outcome);
  }

  double discarded_weight() const {
    if (const auto* m = std::get_if<MpsState>(&state_)) return m->discarded_weight_total();
    return 0.0;
  }

  const MpsState* mps() const { return std::get_if<MpsState>(&state_); }

 private:
  std::variant<PureState, MpsState> state_;
};

inline void require_exact_sweep(const SimulatedState& s) {
  if (s.discarded_weight() >= kExactSweepDiscardLimit)
    throw std::runtime_error("MPS sweep discarded weight " + std::to_string(s.discarded_weight()) +
                             " exceeds 1e-14; the single-sweep protocol should be exact");
}

inline std::vector<OutputRow> run_sweep(const SweepConfig& config) {
  validate(config);
  const auto pairs = resolve_pairs(config);
  const auto points = grid_points(config);
  const Backend backend = resolve_backend(config);
  std::vector<std::vector<OutputRow>> per_point(points.size());

  parallel_for(points.size(), [&](std::size_t k) {
    const GridPoint& pt = points[k];
    auto state = SimulatedState::run(protocol_at(config, pt), backend, config.chi_max, config.trunc_tol);
    if (backend == Backend::mps) require_exact_sweep(state);
    std::optional<double> probability;
    bool defined = true;
    if (config.postselect) {
      probability = state.outcome_probability(config.central(), *config.postselect);
      if (*probability < kZeroProbability) defined = false;
      else state.postselect(config.central(), *config.postselect);
    }
    auto& rows = per_point[k];
    for (const auto& pair : pairs) {
      OutputRow row;
      row.theta = pt.theta;
      row.theta2 = pt.theta2;
      row.pair_left = pair.left;
      row.pair_right = pair.right;
      row.postselect_outcome = config.postselect;
      row.postselect_probability = probability;
      if (defined) {
        row.concurrence_numeric = concurrence(state.pair_rdm(pair.left, pair.right)).value;
        if (const auto fam = family_for(config, pair)) {
          row.concurrence_analytic = analytic_concurrence(*fam, angles_for(pt, *fam)) + config.analytic_offset;
          row.abs_error = std::abs(*row.concurrence_numeric - *row.concurrence_analytic);
        }
      }
      rows.push_back(row);
    }
  });

  std::vector<OutputRow> out;
  for (auto& rows : per_point) out.insert(out.end(), rows.begin(), rows.end());
  std::stable_sort(out.begin(), out.end(), [](const OutputRow& a, const OutputRow& b) {
    const double a2 = a.theta2.value_or(0.0), b2 = b.theta2.value_or(0.0);
    if (a.theta != b.theta) return a.theta < b.theta;
    if (a2 != b2) return a2 < b2;
    if (a.pair_left != b.pair_left) return a.pair_left < b.pair_left;
    return a.pair_right < b.pair_right;
  });
  return out;
}

// ---------------------------------------------------------------------------
// CSV / JSON

inline constexpr const char* kCsvHeader =
    "theta,theta2,pair_left,pair_right,concurrence_numeric,concurrence_analytic,abs_error,"
    "postselect_outcome,postselect_probability";

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<OutputRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_real(r.theta) << ',' << opt(r.theta2) << ',' << r.pair_left << ',' << r.pair_right << ','
        << opt(r.concurrence_numeric) << ',' << opt(r.concurrence_analytic) << ',' << opt(r.abs_error) << ','
        << (r.postselect_outcome ? std::to_string(*r.postselect_outcome) : std::string()) << ','
        << opt(r.postselect_probability) << '\n';
  }
}

inline std::vector<OutputRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("read_csv: missing or unexpected header");
  std::vector<OutputRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 9) throw std::invalid_argument("read_csv: expected 9 fields");
    auto real = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    OutputRow r;
    r.theta = std::stod(f[0]);
    r.theta2 = real(f[1]);
    r.pair_left = std::stoi(f[2]);
    r.pair_right = std::stoi(f[3]);
    r.concurrence_numeric = real(f[4]);
    r.concurrence_analytic = real(f[5]);
    r.abs_error = real(f[6]);
    if (!f[7].empty()) r.postselect_outcome = std::stoi(f[7]);
    r.postselect_probability = real(f[8]);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json to_json(const std::vector<OutputRow>& rows) {
  auto opt = [](const auto& v) -> nlohmann::json { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"theta", r.theta},
                   {"theta2", opt(r.theta2)},
                   {"pair_left", r.pair_left},
                   {"pair_right", r.pair_right},
                   {"concurrence_numeric", opt(r.concurrence_numeric)},
                   {"concurrence_analytic", opt(r.concurrence_analytic)},
                   {"abs_error", opt(r.abs_error)},
                   {"postselect_outcome", opt(r.postselect_outcome)},
                   {"postselect_probability", opt(r.postselect_probability)}});
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Comparison against the closed forms

struct FamilyReport {
  FormulaFamily family;
  std::size_t samples = 0;
  double max_abs_error = 0.0;
  double theta_at_max = 0.0;
  std::optional<double> theta2_at_max;
  /// Largest spread (max - min) of numeric values across pairs of this
  /// family at a fixed grid point.
  double max_spread = 0.0;
  bool passed = true;
};

struct CompareReport {
  double threshold = kCompareThreshold;
  std::vector<FamilyReport> families;
  bool passed = true;
};

inline std::string valid_pair_classes(const SweepConfig& c) {
  switch (c.protocol) {
    case ProtocolKind::linear:
      if (c.case_id == 4) return "adjacent pairs (edges -> linear_edge, bulk -> linear_bulk)";
      if (c.case_id == 1) return "pair 1-2 (end_pair_case13)";
      if (c.case_id == 3) return "pair " + std::to_string(c.n - 1) + "-" + std::to_string(c.n) + " (end_pair_case13)";
      return "none: case 2 has no closed form";
    case ProtocolKind::periodic:
      return "bulk adjacent pairs i-(i+1), 2 <= i <= n-2 (periodic_even / periodic_odd)";
    case ProtocolKind::star:
      if (c.n_outer != 3) return "none: closed forms exist for n_outer = 3 only";
      return c.postselect ? "outer pairs (star_ring_0 / star_ring_1)" : "central-outer pairs (star_central)";
  }
  return "none";
}

inline CompareReport run_compare(const SweepConfig& config) {
  validate(config);
  for (const auto& pair : resolve_pairs(config))
    if (!family_for(config, pair))
      throw UsageError("no closed form for pair " + std::to_string(pair.left) + "-" + std::to_string(pair.right) +
                       "; valid options: " + valid_pair_classes(config));

  const auto rows = run_sweep(config);
  CompareReport report;
  auto entry = [&](FormulaFamily f) -> FamilyReport& {
    for (auto& fr : report.families)
      if (fr.family == f) return fr;
    report.families.push_back(FamilyReport{f});
    return report.families.back();
  };
  // Rows are grouped by grid point; track per-point min/max per family.
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].theta == rows[i].theta && rows[j].theta2 == rows[i].theta2) ++j;
    std::vector<std::pair<FormulaFamily, std::pair<double, double>>> range;
    for (std::size_t k = i; k < j; ++k) {
      const auto& r = rows[k];
      if (!r.abs_error) continue;
      const auto fam = *family_for(config, {r.pair_left, r.pair_right});
      auto& fr = entry(fam);
      ++fr.samples;
      if (fr.samples == 1 || *r.abs_error > fr.max_abs_error) {
        fr.max_abs_error = *r.abs_error;
        fr.theta_at_max = r.theta;
        fr.theta2_at_max = r.theta2;
      }
      auto it = std::find_if(range.begin(), range.end(), [&](const auto& e) { return e.first == fam; });
      const double v = *r.concurrence_numeric;
      if (it == range.end()) range.push_back({fam, {v, v}});
      else it->second = {std::min(it->second.first, v), std::max(it->second.second, v)};
    }
    for (const auto& [fam, mm] : range) {
      auto& fr = entry(fam);
      fr.max_spread = std::max(fr.max_spread, mm.second - mm.first);
    }
    i = j;
  }
  std::sort(report.families.begin(), report.families.end(),
            [](const FamilyReport& a, const FamilyReport& b) { return a.family < b.family; });
  for (auto& fr : report.families) {
    fr.passed = fr.max_abs_error <= report.threshold;
    report.passed = report.passed && fr.passed;
  }
  return report;
}

// ---------------------------------------------------------------------------
// MPS versus statevector

struct OracleReport {
  double max_rdm_deviation = 0.0;
  double max_concurrence_deviation = 0.0;
  double max_discarded_weight = 0.0;
  std::size_t max_bond_dimension = 0;
  std::size_t points = 0;
  std::size_t comparisons = 0;
  bool rdm_passed = true;
  bool concurrence_passed = true;
  bool passed() const { return rdm_passed && concurrence_passed; }
};

inline OracleReport run_oracle_check(const SweepConfig& config) {
  SweepConfig c = config;
  c.backend = Backend::statevector;
  if (c.qubits() > kStatevectorMaxQubits)
    throw UsageError("oracle check needs at most 12 qubits (got " + std::to_string(c.qubits()) + ")");
  validate(c);
  auto points = grid_points(c);
  if (c.seed) {
    std::mt19937_64 rng(*c.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 8; ++k) {
      GridPoint p{angle(rng), std::nullopt};
      if (c.protocol == ProtocolKind::periodic) p.theta2 = angle(rng);
      points.push_back(p);
    }
  }

  std::vector<std::optional<int>> branches{std::nullopt};
  if (c.protocol == ProtocolKind::star && c.n_outer >= 2) branches = {std::nullopt, 0, 1};

  std::vector<OracleReport> partial(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    const auto spec = protocol_at(c, points[k]);
    const auto exact0 = SimulatedState::run(spec, Backend::statevector);
    const auto mps0 = SimulatedState::run(spec, Backend::mps, c.chi_max, c.trunc_tol);
    auto& rep = partial[k];
    rep.points = 1;
    rep.max_discarded_weight = mps0.discarded_weight();
    rep.max_bond_dimension = mps0.mps()->max_bond_dimension();
    for (const auto& branch : branches) {
      SimulatedState exact = exact0, mps = mps0;
      SweepConfig bc = c;
      bc.postselect = branch;
      if (branch) {
        if (exact.outcome_probability(c.central(), *branch) < kZeroProbability) continue;
        exact.postselect(c.central(), *branch);
        mps.postselect(c.central(), *branch);
      }
      std::vector<QubitPair> pairs;
      if (c.protocol == ProtocolKind::star) {
        bc.pairs = "star-all";
        pairs = resolve_pairs(bc);
      } else {
        pairs = resolve_pairs(c);
      }
      for (const auto& pr : pairs) {
        const auto re = exact.pair_rdm(pr.left, pr.right);
        const auto rm = mps.pair_rdm(pr.left, pr.right);
        rep.max_rdm_deviation = std::max(rep.max_rdm_deviation, max_abs_diff(re.matrix(), rm.matrix()));
        rep.max_concurrence_deviation =
            std::max(rep.max_concurrence_deviation, std::abs(concurrence(re).value - concurrence(rm).value));
        ++rep.comparisons;
      }
    }
  });

  OracleReport out;
  for (const auto& r : partial) {
    out.max_rdm_deviation = std::max(out.max_rdm_deviation, r.max_rdm_deviation);
    out.max_concurrence_deviation = std::max(out.max_concurrence_deviation, r.max_concurrence_deviation);
    out.max_discarded_weight = std::max(out.max_discarded_weight, r.max_discarded_weight);
    out.max_bond_dimension = std::max(out.max_bond_dimension, r.max_bond_dimension);
    out.points += r.points;
    out.comparisons += r.comparisons;
  }
  out.rdm_passed = out.max_rdm_deviation <= kOracleRdmThreshold && out.max_discarded_weight < kExactSweepDiscardLimit;
  out.concurrence_passed = out.max_concurrence_deviation <= kOracleConcurrenceThreshold;
  return out;
}

}  // namespace symment
