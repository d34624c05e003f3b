// symment: protocol sweeps, closed-form comparison and MPS validation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "symment/symment.hpp"

namespace {

using namespace symment;

struct RawOptions {
  std::string protocol = "linear";
  int case_id = 4;
  int n = 10;
  int n_outer = 3;
  std::string theta = "0:2pi:201";
  std::string theta2;
  std::string theta2_offset;
  std::string pairs = "all-adjacent";
  std::string postselect;
  std::string backend = "auto";
  int chi_max = kDefaultChiMax;
  double trunc_tol = kDefaultTruncTol;
  std::string format = "csv";
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, RawOptions& o) {
  cmd->add_option("--protocol", o.protocol, "star | linear | periodic")
      ->check(CLI::IsMember({"star", "linear", "periodic"}));
  cmd->add_option("--case", o.case_id, "linear gate ordering 1..4")->check(CLI::Range(1, 4));
  cmd->add_option("--n", o.n, "chain length (linear, periodic)");
  cmd->add_option("--n-outer", o.n_outer, "outer qubits (star)");
  cmd->add_option("--theta", o.theta, "angle grid start:stop:steps, or a single angle (pi allowed)");
  cmd->add_option("--theta2", o.theta2, "second angle grid (periodic)");
  cmd->add_option("--theta2-offset", o.theta2_offset, "theta2 = theta + offset (periodic)");
  cmd->add_option("--pairs", o.pairs, "i-j,k-l | all-adjacent | bulk | bulk-center | edges | star-all");
  cmd->add_option("--postselect", o.postselect, "central qubit outcome 0 | 1 (star)")->check(CLI::IsMember({"0", "1"}));
  cmd->add_option("--backend", o.backend, "mps | statevector | auto")
      ->check(CLI::IsMember({"mps", "statevector", "auto"}));
  cmd->add_option("--chi-max", o.chi_max, "MPS bond dimension cap");
  cmd->add_option("--trunc-tol", o.trunc_tol, "MPS truncation tolerance");
  cmd->add_option("--seed", o.seed, "extra random grid points (oracle-check)");
}

SweepConfig to_config(const RawOptions& o) {
  SweepConfig c;
  static const std::map<std::string, ProtocolKind> protocols{
      {"star", ProtocolKind::star}, {"linear", ProtocolKind::linear}, {"periodic", ProtocolKind::periodic}};
  static const std::map<std::string, Backend> backends{
      {"mps", Backend::mps}, {"statevector", Backend::statevector}, {"auto", Backend::automatic}};
  c.protocol = protocols.at(o.protocol);
  c.case_id = o.case_id;
  c.n = o.n;
  c.n_outer = o.n_outer;
  c.theta = AngleGrid::parse(o.theta);
  if (!o.theta2.empty()) c.theta2 = AngleGrid::parse(o.theta2);
  if (!o.theta2_offset.empty()) c.theta2_offset = parse_angle(o.theta2_offset);
  c.pairs = o.pairs;
  if (!o.postselect.empty()) c.postselect = std::stoi(o.postselect);
  c.backend = backends.at(o.backend);
  c.chi_max = o.chi_max;
  c.trunc_tol = o.trunc_tol;
  c.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
  c.seed = o.seed;
  validate(c);
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

int cmd_sweep(const RawOptions& o) {
  const SweepConfig c = to_config(o);
  const auto rows = run_sweep(c);
  std::ostringstream text;
  if (c.format == OutputFormat::json) text << to_json(rows).dump(2) << '\n';
  else write_csv(text, rows);
  emit(o.out, text.str());
  return 0;
}

int cmd_compare(const RawOptions& o) {
  const auto report = run_compare(to_config(o));
  nlohmann::json j;
  j["threshold"] = report.threshold;
  j["passed"] = report.passed;
  j["families"] = nlohmann::json::array();
  for (const auto& f : report.families) {
    nlohmann::json e{{"family", family_name(f.family)},
                     {"samples", f.samples},
                     {"max_abs_error", f.max_abs_error},
                     {"theta_at_max", f.theta_at_max},
                     {"max_spread", f.max_spread},
                     {"passed", f.passed}};
    if (f.theta2_at_max) e["theta2_at_max"] = *f.theta2_at_max;
    j["families"].push_back(e);
  }
  if (o.format == "json") {
    emit(o.out, j.dump(2) + "\n");
  } else {
    std::ostringstream text;
    for (const auto& f : report.families) {
      text << (f.passed ? "PASS " : "FAIL ") << family_name(f.family) << " samples=" << f.samples
           << " max_abs_error=" << fmt(f.max_abs_error) << " at theta=" << format_real(f.theta_at_max);
      if (f.theta2_at_max) text << " theta2=" << format_real(*f.theta2_at_max);
      text << " spread=" << fmt(f.max_spread) << '\n';
    }
    text << (report.passed ? "PASS" : "FAIL") << " threshold=" << fmt(report.threshold) << '\n';
    emit(o.out, text.str());
  }
  return report.passed ? 0 : 1;
}

int cmd_oracle(const RawOptions& o) {
  const auto r = run_oracle_check(to_config(o));
  std::ostringstream text;
  if (o.format == "json") {
    nlohmann::json j{{"points", r.points},
                     {"comparisons", r.comparisons},
                     {"max_rdm_deviation", r.max_rdm_deviation},
                     {"max_concurrence_deviation", r.max_concurrence_deviation},
                     {"max_discarded_weight", r.max_discarded_weight},
                     {"max_bond_dimension", r.max_bond_dimension},
                     {"passed", r.passed()}};
    text << j.dump(2) << '\n';
  } else {
    text << (r.rdm_passed ? "PASS" : "FAIL") << " rdm max_dev=" << fmt(r.max_rdm_deviation)
         << " discarded=" << fmt(r.max_discarded_weight) << '\n'
         << (r.concurrence_passed ? "PASS" : "FAIL") << " concurrence max_dev=" << fmt(r.max_concurrence_deviation)
         << '\n'
         << "points=" << r.points << " comparisons=" << r.comparisons << " max_bond=" << r.max_bond_dimension << '\n';
  }
  emit(o.out, text.str());
  return r.passed() ? 0 : 1;
}

int cmd_circuit(const RawOptions& o) {
  const SweepConfig c = to_config(o);
  const auto points = grid_points(c);
  emit(o.out, to_text(build_protocol(protocol_at(c, points.front()))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled-state protocol simulator"};
  app.require_subcommand(1);
  RawOptions o;

  auto* sweep = app.add_subcommand("sweep", "pair concurrences over an angle grid");
  auto* compare = app.add_subcommand("compare", "numeric versus closed-form concurrence");
  auto* oracle = app.add_subcommand("oracle-check", "MPS versus statevector");
  auto* circuit = app.add_subcommand("circuit", "print the gate list at the first grid angle");
  for (auto* cmd : {sweep, compare, oracle, circuit}) {
    add_common(cmd, o);
    cmd->add_option("--out", o.out, "output path (default stdout)");
  }
  for (auto* cmd : {sweep, compare, oracle})
    cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sweep) return cmd_sweep(o);
    if (*compare) return cmd_compare(o);
    if (*oracle) return cmd_oracle(o);
    if (*circuit) return cmd_circuit(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
