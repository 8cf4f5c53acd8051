#include "facloc/io.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace facloc {

namespace {

json rationals(std::span<const Rational> xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.to_string());
  return out;
}

Rational rational_field(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw std::invalid_argument(where + ": expected a rational string such as \"1/3\"");
}

std::string profile_text(const std::vector<Rational>& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ",";
    out += x[i].to_string();
  }
  return out + ")";
}

}  // namespace

Profile parse_profile_inline(std::string_view text, Domain domain) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && ((s.front() == '(' && s.back() == ')') || (s.front() == '[' && s.back() == ']'))) {
    s.remove_prefix(1);
    s.remove_suffix(1);
  }
  std::vector<Rational> xs;
  std::size_t field = 1;
  while (true) {
    const auto comma = s.find(',');
    const std::string_view item = s.substr(0, comma);
    try {
      xs.push_back(Rational::parse(item));
    } catch (const std::exception& e) {
      throw std::invalid_argument("profile entry " + std::to_string(field) + ": " + e.what());
    }
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
    ++field;
  }
  return Profile(domain, std::move(xs));
}

Profile profile_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("profile: expected a JSON object");
  Domain domain = Domain::UnitInterval;
  if (j.contains("domain")) {
    if (!j["domain"].is_string()) throw std::invalid_argument("profile.domain: expected a string");
    domain = parse_domain(j["domain"].get<std::string>());
  }
  if (!j.contains("locations") || !j["locations"].is_array())
    throw std::invalid_argument("profile.locations: expected an array");
  std::vector<Rational> xs;
  for (std::size_t i = 0; i < j["locations"].size(); ++i)
    xs.push_back(rational_field(j["locations"][i], "profile.locations[" + std::to_string(i) + "]"));
  return Profile(domain, std::move(xs));
}

json to_json(const Profile& x) { return {{"domain", to_string(x.domain())}, {"locations", rationals(x.locations())}}; }

Profile load_profile(const std::string& path_or_inline, Domain domain) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_inline, ec)) {
    std::ifstream in(path_or_inline);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(path_or_inline + ": " + e.what());
    }
    return profile_from_json(j);
  }
  return parse_profile_inline(path_or_inline, domain);
}

json to_json(const OutcomeDistribution& d) {
  json atoms = json::array();
  for (const auto& a : d.atoms()) atoms.push_back({{"x", a.x.to_string()}, {"p", a.p.to_string()}});
  return {{"atoms", atoms}};
}

OutcomeDistribution outcome_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw std::invalid_argument("outcome.atoms: expected an array");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
    const auto& a = j["atoms"][i];
    const std::string where = "outcome.atoms[" + std::to_string(i) + "]";
    if (!a.is_object() || !a.contains("x") || !a.contains("p"))
      throw std::invalid_argument(where + ": expected {\"x\", \"p\"}");
    atoms.push_back({rational_field(a["x"], where + ".x"), rational_field(a["p"], where + ".p")});
  }
  return OutcomeDistribution(std::move(atoms));
}

json to_json(const Witness& w) {
  json out;
  out["profile"] = rationals(w.profile);
  if (!w.group.empty()) out["group"] = w.group;
  if (w.agent) out["agent"] = *w.agent;
  if (w.misreport) out["misreport"] = {{"agent", w.misreport->agent}, {"to", w.misreport->to.to_string()}};
  if (w.swap) out["swap"] = {w.swap->first, w.swap->second};
  if (w.component) out["component"] = *w.component;
  out["lhs"] = w.lhs.to_string();
  out["bound"] = w.bound.to_string();
  if (!w.note.empty()) out["note"] = w.note;
  return out;
}

json to_json(const AxiomVerdict& v) {
  json out;
  out["axiom"] = to_string(v.axiom);
  out["variant"] = to_string(v.variant);
  out["status"] = to_string(v.status);
  if (v.witness) out["witness"] = to_json(*v.witness);
  out["instances"] = v.instances;
  if (v.partial_coverage) out["partial_coverage"] = true;
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

json to_json(const Manipulation& m) {
  return {{"profile", rationals(m.profile)},
          {"agent", m.agent},
          {"to", m.to.to_string()},
          {"truthful_cost", m.truthful_cost.to_string()},
          {"misreport_cost", m.misreport_cost.to_string()},
          {"gain", m.gain.to_string()}};
}

json to_json(const ConstraintSystem& s) {
  json vars = json::array();
  for (const auto& v : s.variables()) {
    json j = {{"name", v.name}, {"lower", v.lower.to_string()}};
    if (v.upper) j["upper"] = v.upper->to_string();
    vars.push_back(j);
  }
  json rows = json::array();
  for (const auto& c : s.constraints())
    rows.push_back({{"coefficients", rationals(c.coefficients)},
                    {"relation", to_string(c.relation)},
                    {"rhs", c.rhs.to_string()},
                    {"provenance", c.provenance}});
  return {{"variables", vars}, {"constraints", rows}};
}

json to_json(const FarkasCertificate& c) {
  return {{"constraint_multipliers", rationals(c.constraint_multipliers)},
          {"upper_multipliers", rationals(c.upper_multipliers)}};
}

json to_json(const RankWeightsResult& r) {
  json out = {{"status", to_string(r.status)}};
  if (!r.weights.empty()) out["weights"] = rationals(r.weights);
  if (!r.min_weights.empty()) out["min_weights"] = rationals(r.min_weights);
  if (!r.max_weights.empty()) out["max_weights"] = rationals(r.max_weights);
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  return out;
}

json to_json(const Prop1Result& r) {
  json forced = json::array();
  for (const auto& f : r.forced)
    forced.push_back({{"profile", {"0", f.t.to_string()}}, {"forced_output", f.forced.to_string()}});
  json out = {{"infeasible", r.infeasible}, {"forced", forced}, {"system", to_json(r.system)}};
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  if (r.conflicting_pair)
    out["conflicting_pair"] = {r.conflicting_pair->first.t.to_string(), r.conflicting_pair->second.t.to_string()};
  if (r.manipulation)
    out["manipulation"] = {{"profile", rationals(r.manipulation->profile)},
                           {"agent", r.manipulation->agent},
                           {"to", r.manipulation->to.to_string()},
                           {"truthful_cost", r.manipulation->truthful_cost.to_string()},
                           {"misreport_cost", r.manipulation->misreport_cost.to_string()}};
  if (r.satisfying_phantoms) out["satisfying_phantoms"] = rationals(*r.satisfying_phantoms);
  return out;
}

json to_json(const NumericEstimate& e) {
  json out = {{"exact", e.exact},
              {"mode", to_string(e.mode)},
              {"expected_location", e.expected_location},
              {"expected_distance", e.expected_distance},
              {"error_bound", e.error_bound}};
  if (e.mode == NumericMode::MonteCarlo && !e.exact) {
    out["samples"] = e.samples;
    out["seed"] = e.seed;
  }
  return out;
}

std::string describe(const AxiomVerdict& v) {
  if (!v.witness) return to_string(v.status);
  const Witness& w = *v.witness;
  std::ostringstream out;
  if (w.component) out << "component " << *w.component << ", ";
  out << "profile " << profile_text(w.profile);
  switch (v.axiom) {
    case Axiom::Anonymity:
      if (w.swap) out << " swap " << w.swap->first << "<->" << w.swap->second;
      out << ": " << w.lhs << " != " << w.bound;
      break;
    case Axiom::Strategyproofness:
      if (w.misreport) out << " agent " << w.misreport->agent << " -> " << w.misreport->to;
      out << ": cost " << w.lhs << " < " << w.bound;
      break;
    case Axiom::Efficiency:
      out << ": outcome " << w.lhs << " beyond " << w.bound;
      break;
    default:
      if (w.agent) out << " agent " << *w.agent;
      out << ": " << w.lhs << " > " << w.bound;
      break;
  }
  if (!w.note.empty()) out << " (" << w.note << ")";
  return out.str();
}

}  // namespace facloc
