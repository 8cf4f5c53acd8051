#include "facloc/catalog.hpp"

#include <algorithm>
#include <regex>

#include "json.hpp"

namespace facloc {

namespace {

using json = nlohmann::json;

Rational inverse(std::size_t n) { return Rational(1, static_cast<std::int64_t>(n)); }

void require_agents(std::size_t n) {
  if (n < 2) throw std::invalid_argument("mechanisms need n >= 2");
}

// Accepts the relaxed object syntax {atoms:[...]} as well as strict JSON.
json parse_relaxed_json(std::string_view text) {
  static const std::regex bare_key(R"(([\{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:)");
  const std::string quoted = std::regex_replace(std::string(text), bare_key, "$1\"$2\":");
  try {
    return json::parse(quoted);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed parameter block '" + std::string(text) + "': " + e.what());
  }
}

Rational json_rational(const json& v) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw std::invalid_argument("expected a rational string, got " + v.dump());
}

DiscreteAtoms parse_atoms(const std::string& text) {
  json j = parse_relaxed_json(text);
  const json& arr = j.is_object() ? j.at("atoms") : j;
  DiscreteAtoms atoms;
  for (const auto& a : arr) {
    if (!a.is_array() || a.size() != 2) throw std::invalid_argument("atom must be [location, probability]");
    atoms.atoms.emplace_back(json_rational(a[0]), json_rational(a[1]));
  }
  return atoms;
}

std::string atoms_text(const DiscreteAtoms& atoms) {
  std::string out = "[";
  for (std::size_t i = 0; i < atoms.atoms.size(); ++i) {
    if (i) out += ",";
    out += "[\"" + atoms.atoms[i].first.to_string() + "\",\"" + atoms.atoms[i].second.to_string() + "\"]";
  }
  return out + "]";
}

std::vector<ExtLocation> parse_phantom_list(std::string_view text) {
  std::string_view s = text;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("phantom list must look like [0,1/2,1]");
  s = s.substr(1, s.size() - 2);
  std::vector<ExtLocation> out;
  while (!s.empty()) {
    auto comma = s.find(',');
    out.push_back(ExtLocation::parse(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::size_t parse_index(const std::string& v, const char* what) {
  try {
    std::size_t pos = 0;
    long long k = std::stoll(v, &pos);
    if (pos != v.size() || k < 1) throw std::invalid_argument("");
    return static_cast<std::size_t>(k);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad ") + what + " '" + v + "'");
  }
}

// Enumerates count vectors (c_1..c_K) with sum `total` in lexicographic order.
template <class Fn>
void for_each_composition(std::size_t total, std::size_t parts, Fn&& fn) {
  std::vector<std::size_t> c(parts, 0);
  auto rec = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
    if (idx + 1 == parts) {
      c[idx] = left;
      fn(c);
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      c[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, total);
}

}  // namespace

RandomizedMechanism random_rank(std::size_t n, Domain domain) {
  require_agents(n);
  std::vector<WeightedMechanism> parts;
  for (std::size_t k = 1; k <= n; ++k) parts.push_back({DeterministicMechanism::rank(k), inverse(n)});
  return RandomizedMechanism("random_rank", n, domain, std::move(parts));
}

RandomizedMechanism random_dictator(std::size_t n, Domain domain) {
  require_agents(n);
  std::vector<WeightedMechanism> parts;
  for (std::size_t i = 1; i <= n; ++i) parts.push_back({DeterministicMechanism::dictator(i), inverse(n)});
  return RandomizedMechanism("random_dictator", n, domain, std::move(parts));
}

RandomizedMechanism average_or_random_rank(const Rational& p, std::size_t n, Domain domain) {
  require_agents(n);
  if (p < Rational(0) || p > Rational(1)) throw std::invalid_argument("p must lie in [0,1], got " + p.to_string());
  std::vector<WeightedMechanism> parts{{DeterministicMechanism::average(), p}};
  const Rational each = (Rational(1) - p) * inverse(n);
  for (std::size_t k = 1; k <= n; ++k) parts.push_back({DeterministicMechanism::rank(k), each});
  return RandomizedMechanism("avg_or_rr:p=" + p.to_string(), n, domain, std::move(parts));
}

RandomizedMechanism random_phantom(std::size_t n) {
  require_agents(n);
  return RandomizedMechanism("random_phantom", n, Domain::UnitInterval, {},
                             ContinuousFamily{IIDPhantomSpec{UniformOn01{}}, 1});
}

RandomizedMechanism iid_phantom(const IIDPhantomSpec& spec, std::size_t n, std::size_t component_cap) {
  require_agents(n);
  if (spec.is_uniform()) {
    RandomizedMechanism m = random_phantom(n);
    return RandomizedMechanism("iid_phantom:uniform", n, Domain::UnitInterval, {}, m.continuous_family());
  }
  const auto& raw = std::get<DiscreteAtoms>(spec.distribution).atoms;
  std::vector<std::pair<Rational, Rational>> atoms;
  Rational total = 0;
  for (const auto& [x, p] : raw) {
    if (x < Rational(0) || x > Rational(1)) throw std::invalid_argument("phantom atom " + x.to_string() + " outside [0,1]");
    if (p.sign() < 0) throw std::invalid_argument("negative atom probability");
    total += p;
    if (p.is_zero()) continue;
    atoms.emplace_back(x, p);
  }
  if (total != Rational(1)) throw std::invalid_argument("atom probabilities sum to " + total.to_string());
  std::sort(atoms.begin(), atoms.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().first == a.first) merged.back().second += a.second;
    else merged.push_back(a);
  }

  const std::size_t draws = n - 1;
  const std::size_t kinds = merged.size();
  // C(draws + kinds - 1, kinds - 1) multisets
  long double count = 1;
  for (std::size_t i = 1; i < kinds; ++i) count = count * static_cast<long double>(draws + i) / static_cast<long double>(i);
  if (count > static_cast<long double>(component_cap))
    throw ExpansionTooLarge("I.I.D. expansion needs " + std::to_string(static_cast<unsigned long long>(count)) +
                            " components, cap is " + std::to_string(component_cap));

  std::vector<Rational> factorial(draws + 1, Rational(1));
  for (std::size_t i = 1; i <= draws; ++i) factorial[i] = factorial[i - 1] * Rational(static_cast<std::int64_t>(i));

  std::vector<WeightedMechanism> parts;
  for_each_composition(draws, kinds, [&](const std::vector<std::size_t>& c) {
    Rational w = factorial[draws];
    std::vector<ExtLocation> phantoms{ExtLocation(0)};
    for (std::size_t k = 0; k < kinds; ++k) {
      w = w / factorial[c[k]] * pow(merged[k].second, static_cast<unsigned>(c[k]));
      phantoms.insert(phantoms.end(), c[k], ExtLocation(merged[k].first));
    }
    phantoms.emplace_back(1);
    parts.push_back({DeterministicMechanism::phantom(std::move(phantoms)), w});
  });
  return RandomizedMechanism("iid_phantom:{atoms:" + atoms_text(DiscreteAtoms{merged}) + "}", n,
                             Domain::UnitInterval, std::move(parts));
}

RandomizedMechanism median_mechanism(std::size_t n, Domain domain) {
  return RandomizedMechanism::deterministic("median", DeterministicMechanism::median(), n, domain);
}

RandomizedMechanism uniform_phantom_mechanism(std::size_t n) {
  return RandomizedMechanism::deterministic("uniform_phantom", DeterministicMechanism::uniform_phantom(), n,
                                            Domain::UnitInterval);
}

MechanismSpec MechanismSpec::parse(std::string_view text, std::size_t n, Domain domain) {
  MechanismSpec spec;
  spec.n = n;
  spec.domain = domain;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  const std::string rest = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));

  if (spec.name == "phantom") {
    spec.parameters["phantoms"] = rest;
  } else if (spec.name == "iid_phantom") {
    if (rest.empty()) throw std::invalid_argument("iid_phantom needs {atoms:[...]} or uniform");
    spec.parameters["atoms"] = rest == "uniform" ? "uniform" : atoms_text(parse_atoms(rest));
  } else if (!rest.empty()) {
    std::string_view params = rest;
    while (!params.empty()) {
      auto comma = params.find(',');
      std::string_view kv = params.substr(0, comma);
      auto eq = kv.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument("parameter '" + std::string(kv) + "' must be key=value");
      spec.parameters[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      params.remove_prefix(comma + 1);
    }
  }
  spec.build();  // validate eagerly
  return spec;
}

std::string MechanismSpec::to_string() const {
  if (name == "phantom") return "phantom:" + parameters.at("phantoms");
  if (name == "iid_phantom") {
    const auto& atoms = parameters.at("atoms");
    return atoms == "uniform" ? "iid_phantom:uniform" : "iid_phantom:{atoms:" + atoms + "}";
  }
  std::string out = name;
  char sep = ':';
  for (const auto& [k, v] : parameters) {
    out += sep + k + "=" + v;
    sep = ',';
  }
  return out;
}

RandomizedMechanism MechanismSpec::build() const {
  auto param = [&](const std::string& key) -> const std::string& {
    auto it = parameters.find(key);
    if (it == parameters.end()) throw std::invalid_argument(name + " needs parameter '" + key + "'");
    return it->second;
  };
  auto no_params = [&] {
    if (!parameters.empty()) throw std::invalid_argument(name + " takes no parameters");
  };
  auto unit_only = [&] {
    if (domain != Domain::UnitInterval) throw std::invalid_argument(name + " is only defined on the unit interval");
  };

  if (name == "random_rank") return no_params(), random_rank(n, domain);
  if (name == "random_dictator") return no_params(), random_dictator(n, domain);
  if (name == "avg_or_rr") return average_or_random_rank(Rational::parse(param("p")), n, domain);
  if (name == "median") return no_params(), median_mechanism(n, domain);
  if (name == "uniform_phantom") return no_params(), unit_only(), uniform_phantom_mechanism(n);
  if (name == "random_phantom") return no_params(), unit_only(), random_phantom(n);
  if (name == "average")
    return no_params(), RandomizedMechanism::deterministic("average", DeterministicMechanism::average(), n, domain);
  if (name == "rank") {
    auto m = DeterministicMechanism::rank(parse_index(param("k"), "rank index"));
    return RandomizedMechanism::deterministic(to_string(), m, n, domain);
  }
  if (name == "dictator") {
    auto m = DeterministicMechanism::dictator(parse_index(param("i"), "dictator index"));
    return RandomizedMechanism::deterministic(to_string(), m, n, domain);
  }
  if (name == "phantom") {
    auto m = DeterministicMechanism::phantom(parse_phantom_list(param("phantoms")));
    return RandomizedMechanism::deterministic(to_string(), m, n, domain);
  }
  if (name == "iid_phantom") {
    unit_only();
    const auto& atoms = param("atoms");
    if (atoms == "uniform") return iid_phantom(IIDPhantomSpec{UniformOn01{}}, n);
    return iid_phantom(IIDPhantomSpec{parse_atoms(atoms)}, n);
  }
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

}  // namespace facloc
