// facloc: command-line front end for the mechanism library.
//
// Exit codes: 0 pass / success, 1 axiom failure, 2 inconclusive, 3 usage or
// input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "facloc/analysis.hpp"
#include "facloc/axioms.hpp"
#include "facloc/catalog.hpp"
#include "facloc/io.hpp"
#include "facloc/numeric.hpp"
#include "facloc/table.hpp"

using namespace facloc;

namespace {

constexpr int kUsageError = 3;

struct Common {
  std::string mechanism;
  std::string profile;
  std::size_t n = 3;
  std::int64_t grid = 6;
  std::int64_t window = 10;
  std::string domain = "unit";
  std::string format = "markdown";
  std::uint64_t seed = NumericOptions{}.seed;
  std::string out;
  bool serial = false;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

std::string joined(std::span<const Rational> xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i].to_string();
  return s + ")";
}

CheckDomain domain_of(const Common& c) {
  CheckDomain d;
  d.n = c.n;
  d.grid = c.grid;
  d.window = c.window;
  d.domain = parse_domain(c.domain);
  d.exec = c.serial ? Execution::Serial : Execution::Parallel;
  return d;
}

void add_domain_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--n", c.n, "Number of agents")->check(CLI::Range(2, 64));
  cmd->add_option("--grid", c.grid, "Grid denominator m: locations j/m")->check(CLI::PositiveNumber);
  cmd->add_option("--window", c.window, "Real-line grid covers [-window, window]")->check(CLI::PositiveNumber);
  cmd->add_option("--domain", c.domain, "unit | real")->check(CLI::IsMember({"unit", "unit_interval", "real", "real_line"}));
  cmd->add_flag("--serial", c.serial, "Disable OpenMP in the scan");
}

void add_output_flags(CLI::App* cmd, Common& c, std::vector<std::string> formats) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("--out", c.out, "Write the report to this file");
}

int cmd_run(const Common& c, const std::string& numeric_mode, std::uint64_t samples) {
  const Profile x = load_profile(c.profile, parse_domain(c.domain));
  const RandomizedMechanism m = MechanismSpec::parse(c.mechanism, x.size(), x.domain()).build();
  const ExpectedOutcome exact = expected_outcome(m, x);

  std::optional<OutcomeDistribution> atoms;
  try {
    atoms = outcome_distribution(m, x);
  } catch (const RequiresNumericOracle&) {
  }
  std::optional<NumericEstimate> numeric;
  if (!numeric_mode.empty()) {
    NumericOptions opt;
    opt.mode = numeric_mode == "quadrature" ? NumericMode::Quadrature : NumericMode::MonteCarlo;
    opt.seed = c.seed;
    opt.samples = samples;
    opt.exec = c.serial ? Execution::Serial : Execution::Parallel;
    numeric = numeric_expectation_oracle(m, x, opt);
  }

  if (c.format == "json") {
    json j = {{"mechanism", m.name()}, {"profile", to_json(x)}};
    if (atoms) j["outcome"] = to_json(*atoms);
    j["expected_location"] = exact.expected_location.to_string();
    json d = json::array();
    for (const auto& v : exact.expected_distance) d.push_back(v.to_string());
    j["expected_distance"] = d;
    if (numeric) j["numeric"] = to_json(*numeric);
    emit(c, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream out;
  out << "mechanism: " << m.name() << "\nprofile: " << x.to_string() << "\n";
  if (atoms) {
    out << "atoms:";
    for (const auto& a : atoms->atoms()) out << " " << a.x << ":" << a.p;
    out << "\n";
  } else {
    out << "atoms: continuous (closed-form expectations below)\n";
  }
  out << "expected location: " << exact.expected_location << "\n";
  for (std::size_t i = 0; i < exact.expected_distance.size(); ++i)
    out << "agent " << i + 1 << " expected distance: " << exact.expected_distance[i] << "\n";
  if (numeric) {
    out << "numeric (" << to_string(numeric->mode) << (numeric->exact ? ", exact" : "")
        << "): location " << numeric->expected_location << " +- " << numeric->error_bound << "\n";
  }
  emit(c, out.str());
  return 0;
}

int exit_code(Status s) { return s == Status::Pass ? 0 : s == Status::Fail ? 1 : 2; }

int cmd_check(const Common& c, const std::string& axiom, const std::string& variant, bool all_subsets,
              std::size_t subset_cap, bool grid_only_breakpoints) {
  CheckDomain dom = domain_of(c);
  dom.all_subsets = all_subsets;
  dom.subset_cap = subset_cap;
  dom.exhaustive = !grid_only_breakpoints;
  const MechanismSpec spec = MechanismSpec::parse(c.mechanism, c.n, dom.domain);
  const RandomizedMechanism m = spec.build();
  const AxiomVerdict v = check(parse_axiom(axiom), m, parse_variant(variant), dom);
  if (c.format == "json") {
    json j = to_json(v);
    j["mechanism"] = spec.to_string();
    j["n"] = c.n;
    j["grid"] = c.grid;
    j["domain"] = to_string(dom.domain);
    if (v.status == Status::Fail) j["reverified"] = reverify(m, v);
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << spec.to_string() << " " << to_string(v.axiom) << "/" << to_string(v.variant) << ": "
        << to_string(v.status) << " (" << v.instances << " instances)\n";
    if (v.witness) out << "witness: " << describe(v) << "\n";
    if (v.status == Status::Fail) out << "reverified: " << (reverify(m, v) ? "yes" : "NO") << "\n";
    if (!v.note.empty()) out << "note: " << v.note << "\n";
    emit(c, out.str());
  }
  return exit_code(v.status);
}

int cmd_table(const Common& c, const std::string& p, const std::string& numeric_mode, std::uint64_t samples) {
  TableOptions opt;
  opt.n = c.n;
  opt.grid = c.grid;
  opt.p = Rational::parse(p);
  opt.exec = c.serial ? Execution::Serial : Execution::Parallel;
  opt.numeric.mode = numeric_mode == "monte_carlo" ? NumericMode::MonteCarlo : NumericMode::Quadrature;
  opt.numeric.seed = c.seed;
  opt.numeric.samples = samples;
  opt.numeric.exec = opt.exec;
  const PropertyTable t = build_property_table(opt);
  if (c.format == "json")
    emit(c, to_json(t).dump(2) + "\n");
  else if (c.format == "csv")
    emit(c, render_csv(t));
  else
    emit(c, render_markdown(t));
  return 0;
}

int cmd_search(const Common& c) {
  const CheckDomain dom = domain_of(c);
  const MechanismSpec spec = MechanismSpec::parse(c.mechanism, c.n, dom.domain);
  const auto best = search_manipulation(spec.build(), dom);
  if (c.format == "json") {
    json j = {{"mechanism", spec.to_string()}, {"n", c.n}, {"grid", c.grid}};
    j["manipulation"] = best ? to_json(*best) : json(nullptr);
    emit(c, j.dump(2) + "\n");
  } else if (best) {
    std::ostringstream out;
    out << "gain " << best->gain << " at (" << joined(best->profile) << ", agent " << best->agent << " -> "
        << best->to << "): cost " << best->truthful_cost << " -> " << best->misreport_cost << "\n";
    emit(c, out.str());
  } else {
    emit(c, "none found\n");
  }
  return 0;
}

// "w1=0", "w2<=1/5", "w3>=1/10".
LinearConstraint parse_extra(const std::string& text, std::size_t n) {
  static const std::pair<const char*, Relation> ops[] = {
      {"<=", Relation::LessEqual}, {">=", Relation::GreaterEqual}, {"=", Relation::Equal}};
  for (const auto& [op, rel] : ops) {
    const auto pos = text.find(op);
    if (pos == std::string::npos) continue;
    const std::string var = text.substr(0, pos);
    if (var.size() < 2 || var[0] != 'w') break;
    const std::size_t k = std::stoul(var.substr(1));
    if (k < 1 || k > n) throw std::invalid_argument("no weight " + var + " for n=" + std::to_string(n));
    LinearConstraint c;
    c.coefficients.assign(n, Rational(0));
    c.coefficients[k - 1] = 1;
    c.relation = rel;
    c.rhs = Rational::parse(text.substr(pos + std::string(op).size()));
    c.provenance.push_back("user constraint " + text);
    return c;
  }
  throw std::invalid_argument("constraint '" + text + "' should look like w1=0 or w2<=1/5");
}

int cmd_solve_weights(const Common& c, const std::vector<std::string>& extra) {
  const CheckDomain dom = domain_of(c);
  ConstraintSystem sys = rank_weight_constraints(c.n, dom);
  for (const auto& e : extra) sys.add_constraint(parse_extra(e, c.n));
  const RankWeightsResult r = solve_rank_weights(sys);
  if (c.format == "json") {
    json j = to_json(r);
    j["n"] = c.n;
    j["system"] = to_json(sys);
    if (r.certificate) j["certificate_verified"] = verify_infeasibility(sys, *r.certificate);
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "status: " << to_string(r.status) << " (" << sys.constraints().size() << " constraints after merging)\n";
    if (r.status == SolveStatus::Unique) out << "weights: " << joined(r.weights) << "\n";
    if (r.status == SolveStatus::NonUnique)
      out << "min: " << joined(r.min_weights) << "\nmax: " << joined(r.max_weights) << "\n";
    if (r.certificate) {
      out << "certificate verified: " << (verify_infeasibility(sys, *r.certificate) ? "yes" : "NO") << "\n";
      for (std::size_t i = 0; i < sys.constraints().size(); ++i) {
        const Rational& l = r.certificate->constraint_multipliers[i];
        if (!l.is_zero()) out << "  " << l << " x [" << sys.constraints()[i].provenance.front() << "]\n";
      }
    }
    emit(c, out.str());
  }
  return 0;
}

int cmd_prop1(const Common& c, const std::string& samples_text, std::int64_t sweep) {
  std::vector<Rational> samples;
  std::stringstream ss(samples_text);
  for (std::string item; std::getline(ss, item, ',');) samples.push_back(Rational::parse(item));
  const Prop1Result r = prop1_infeasibility(samples);
  std::vector<std::vector<Rational>> survivors;
  if (sweep > 0) survivors = phantom_grid_sweep(r.forced, sweep);

  if (c.format == "json") {
    json j = to_json(r);
    if (r.certificate) j["certificate_verified"] = verify_infeasibility(r.system, *r.certificate);
    if (sweep > 0) {
      j["sweep"] = {{"grid", sweep}, {"satisfying", survivors.size()}};
    }
    emit(c, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream out;
  for (const auto& f : r.forced) out << "profile (0," << f.t << ") forces output " << f.forced << "\n";
  if (r.infeasible) {
    out << "infeasible; certificate verified: " << (verify_infeasibility(r.system, *r.certificate) ? "yes" : "NO")
        << "\n";
    if (r.conflicting_pair)
      out << "conflicting samples: " << r.conflicting_pair->first.t << " and " << r.conflicting_pair->second.t << "\n";
    if (r.manipulation)
      out << "manipulation: at " << joined(r.manipulation->profile) << " agent " << r.manipulation->agent
          << " reports " << r.manipulation->to << ", cost " << r.manipulation->truthful_cost << " -> "
          << r.manipulation->misreport_cost << "\n";
  } else if (r.satisfying_phantoms) {
    out << "feasible: Phantom" << joined(*r.satisfying_phantoms) << "\n";
  }
  if (sweep > 0) out << "grid sweep 1/" << sweep << ": " << survivors.size() << " phantom vectors satisfy every sample\n";
  emit(c, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility-location mechanisms on exact rationals"};
  app.require_subcommand(1);
  Common c;

  std::string numeric_mode;
  std::uint64_t samples = NumericOptions{}.samples;
  auto* run = app.add_subcommand("run", "Outcome law and expected distances on one profile");
  run->add_option("--mechanism", c.mechanism, "Mechanism spec, e.g. random_rank or avg_or_rr:p=1/2")->required();
  run->add_option("--profile", c.profile, "Inline (0,0,1/3) or a profile JSON file")->required();
  run->add_option("--domain", c.domain, "unit | real (inline profiles)")
      ->check(CLI::IsMember({"unit", "unit_interval", "real", "real_line"}));
  run->add_option("--numeric", numeric_mode, "Also run the numeric oracle")
      ->check(CLI::IsMember({"quadrature", "monte_carlo"}));
  run->add_option("--samples", samples, "Monte Carlo samples");
  run->add_option("--seed", c.seed, "Monte Carlo seed");
  run->add_flag("--serial", c.serial, "Disable OpenMP");
  add_output_flags(run, c, {"markdown", "text", "json"});

  std::string axiom, variant = "exp";
  bool all_subsets = false, breakpoints_only = false;
  std::size_t subset_cap = 0;
  auto* chk = app.add_subcommand("check", "Decide one axiom on a finite grid");
  chk->add_option("--mechanism", c.mechanism, "Mechanism spec")->required();
  chk->add_option("--axiom", axiom,
                  "anonymity | strategyproofness | efficiency | proportionality | strong_proportionality | spf")
      ->required();
  chk->add_option("--variant", variant, "det | exp | universal");
  chk->add_flag("--all-subsets", all_subsets, "Check every subset of co-located groups");
  chk->add_option("--subset-cap", subset_cap, "Largest SPF group (0: default)");
  chk->add_flag("--breakpoints-only", breakpoints_only, "Leave grid points out of the misreport set");
  add_domain_flags(chk, c);
  add_output_flags(chk, c, {"markdown", "text", "json"});

  std::string p = "1/2";
  auto* tbl = app.add_subcommand("table", "Mechanism by property matrix");
  tbl->add_option("--p", p, "AverageOrRandomRank probability");
  tbl->add_option("--numeric", numeric_mode, "Oracle for continuous-family cells")
      ->check(CLI::IsMember({"quadrature", "monte_carlo"}));
  tbl->add_option("--samples", samples, "Monte Carlo samples");
  tbl->add_option("--seed", c.seed, "Monte Carlo seed");
  add_domain_flags(tbl, c);
  add_output_flags(tbl, c, {"markdown", "csv", "json"});

  auto* srch = app.add_subcommand("search-manipulation", "Largest exact gain from misreporting");
  srch->add_option("--mechanism", c.mechanism, "Mechanism spec")->required();
  add_domain_flags(srch, c);
  add_output_flags(srch, c, {"markdown", "text", "json"});

  std::vector<std::string> extra;
  auto* sw = app.add_subcommand("solve-weights", "Rank-mixture weights forced by strong proportionality");
  sw->add_option("--constraint", extra, "Extra constraint such as w1=0 (repeatable)");
  add_domain_flags(sw, c);
  add_output_flags(sw, c, {"markdown", "text", "json"});

  std::string prop_samples = "1/2,1";
  std::int64_t sweep = 0;
  auto* prop = app.add_subcommand("prop1", "Two-agent impossibility certificate");
  prop->add_option("--samples", prop_samples, "Comma-separated t values in (0,1]");
  prop->add_option("--sweep", sweep, "Also sweep phantom vectors on grid 1/m");
  add_output_flags(prop, c, {"markdown", "text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) return cmd_run(c, numeric_mode, samples);
    if (*chk) return cmd_check(c, axiom, variant, all_subsets, subset_cap, breakpoints_only);
    if (*tbl) return cmd_table(c, p, numeric_mode, samples);
    if (*srch) return cmd_search(c);
    if (*sw) return cmd_solve_weights(c, extra);
    if (*prop) return cmd_prop1(c, prop_samples, sweep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
