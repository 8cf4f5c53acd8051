#include "facloc/axioms.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace facloc {

namespace {

using Result = InstanceResult<Witness>;

const char* const kAxiomNames[] = {"anonymity",       "strategyproofness",      "efficiency",
                                   "proportionality", "strong_proportionality", "spf"};

std::uint64_t checked_power(std::size_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > (std::uint64_t{1} << 62) / base)
      throw std::length_error("check domain too large: " + std::to_string(base) + "^" + std::to_string(exp));
    r *= base;
  }
  return r;
}

// Agent 0 is the most significant digit, so index order is lexicographic.
void decode(std::uint64_t idx, const std::vector<Rational>& grid, std::vector<Rational>& out) {
  const std::uint64_t g = grid.size();
  for (std::size_t a = out.size(); a-- > 0;) {
    out[a] = grid[idx % g];
    idx /= g;
  }
}

Rational group_share(std::size_t n, std::size_t group) {
  return Rational(static_cast<std::int64_t>(n - group), static_cast<std::int64_t>(n));
}

void require_compatible(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  if (dom.n != m.n())
    throw std::invalid_argument("check domain has n=" + std::to_string(dom.n) + " but mechanism expects " +
                                std::to_string(m.n()));
  if (dom.domain != m.domain()) throw std::invalid_argument("check domain and mechanism domains differ");
  if (dom.grid < 1) throw std::invalid_argument("grid denominator must be positive");
  if (v == Variant::Deterministic && !m.is_deterministic())
    throw std::invalid_argument("deterministic variant needs a single-component mechanism, got " + m.name());
}

struct MisreportBasis {
  std::vector<Rational> fixed;
  bool has_average = false;
};

MisreportBasis make_basis(const RandomizedMechanism& m, const CheckDomain& dom) {
  MisreportBasis b;
  b.fixed = m.finite_phantom_values();
  if (dom.exhaustive) {
    const auto g = dom.grid_points();
    b.fixed.insert(b.fixed.end(), g.begin(), g.end());
  }
  if (m.domain() == Domain::UnitInterval) {
    b.fixed.emplace_back(0);
    b.fixed.emplace_back(1);
  }
  for (const auto& c : m.components()) b.has_average |= c.mechanism.as<AverageRule>() != nullptr;
  std::sort(b.fixed.begin(), b.fixed.end());
  b.fixed.erase(std::unique(b.fixed.begin(), b.fixed.end()), b.fixed.end());
  return b;
}

std::vector<Rational> candidates_from(const MisreportBasis& basis, Domain domain, std::span<const Rational> x,
                                      std::size_t agent) {
  std::vector<Rational> c = basis.fixed;
  c.insert(c.end(), x.begin(), x.end());
  if (basis.has_average) {
    // The average equals x_i exactly when agent i reports n*x_i - sum of the others.
    Rational others = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != agent) others += x[j];
    const Rational kink = Rational(static_cast<std::int64_t>(x.size())) * x[agent] - others;
    if (in_domain(domain, kink)) c.push_back(kink);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  const std::size_t k = c.size();
  for (std::size_t i = 0; i + 1 < k; ++i) c.push_back((c[i] + c[i + 1]) / Rational(2));
  if (domain == Domain::RealLine) {
    c.push_back(c[0] - Rational(1));
    c.push_back(c[k - 1] + Rational(1));
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

RandomizedMechanism component_mechanism(const RandomizedMechanism& m, std::size_t c) {
  const auto& comp = m.components().at(c);
  return RandomizedMechanism::deterministic(comp.mechanism.name(), comp.mechanism, m.n(), m.domain());
}

AxiomVerdict base_verdict(Axiom a, Variant v) {
  AxiomVerdict out;
  out.axiom = a;
  out.variant = v;
  return out;
}

AxiomVerdict finish(Axiom a, Variant v, ScanResult<Witness> r, std::uint64_t instances) {
  AxiomVerdict out = base_verdict(a, v);
  out.status = r.status;
  out.witness = std::move(r.payload);
  out.instances = instances;
  return out;
}

template <class Fn>
Result guarded(const std::vector<Rational>& x, Fn&& fn) {
  try {
    return fn();
  } catch (const OverflowError& e) {
    Witness w;
    w.profile = x;
    w.note = std::string("exact arithmetic overflow: ") + e.what();
    return Result::inconclusive(std::move(w));
  }
}

using Checker = AxiomVerdict (*)(const RandomizedMechanism&, Variant, const CheckDomain&);

// Universal variant: the deterministic axiom on every component, in order.
AxiomVerdict universal(Axiom a, Checker check_one, const RandomizedMechanism& m, const CheckDomain& dom) {
  AxiomVerdict out = base_verdict(a, Variant::Universal);
  std::optional<AxiomVerdict> inconclusive;
  for (std::size_t c = 0; c < m.components().size(); ++c) {
    AxiomVerdict v = check_one(component_mechanism(m, c), Variant::Deterministic, dom);
    out.instances += v.instances;
    out.partial_coverage |= v.partial_coverage;
    if (v.status == Status::Pass) continue;
    if (v.witness) v.witness->component = c;
    if (v.status == Status::Fail) {
      out.status = Status::Fail;
      out.witness = std::move(v.witness);
      out.note = "component " + std::to_string(c) + " (" + m.components()[c].mechanism.name() + ")";
      return out;
    }
    if (!inconclusive) inconclusive = std::move(v);
  }
  if (inconclusive) {
    out.status = Status::Inconclusive;
    out.witness = std::move(inconclusive->witness);
    return out;
  }
  if (m.has_continuous_family()) {
    if (a == Axiom::Anonymity || a == Axiom::Strategyproofness || a == Axiom::Efficiency) {
      out.note = "every realization of the continuous family is a phantom mechanism with end phantoms 0 and 1";
    } else {
      out.status = Status::Inconclusive;
      out.note = "realizations of the continuous phantom family cannot be enumerated";
    }
  }
  return out;
}

AxiomVerdict anonymity_scan(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  const auto grid = dom.grid_points();
  const std::uint64_t count = checked_power(grid.size(), dom.n);
  auto r = scan<Witness>(count, dom.exec, [&](std::uint64_t idx) {
    std::vector<Rational> x(dom.n);
    decode(idx, grid, x);
    return guarded(x, [&]() -> Result {
      const Rational f = expected_location(m, x);
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i] == x[i + 1]) continue;
        std::vector<Rational> y = x;
        std::swap(y[i], y[i + 1]);
        const Rational g = expected_location(m, y);
        if (g != f) {
          Witness w;
          w.profile = x;
          w.swap = std::make_pair(i + 1, i + 2);
          w.lhs = g;
          w.bound = f;
          return Result::fail(std::move(w));
        }
      }
      return Result::pass();
    });
  });
  return finish(Axiom::Anonymity, v, std::move(r), count);
}

AxiomVerdict strategyproofness_scan(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  const auto grid = dom.grid_points();
  const std::uint64_t count = checked_power(grid.size(), dom.n);
  const MisreportBasis basis = make_basis(m, dom);
  auto r = scan<Witness>(count, dom.exec, [&](std::uint64_t idx) {
    std::vector<Rational> x(dom.n);
    decode(idx, grid, x);
    return guarded(x, [&]() -> Result {
      const auto truthful = expected_distances(m, x);
      std::vector<Rational> y = x;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (const auto& to : candidates_from(basis, m.domain(), x, i)) {
          if (to == x[i]) continue;
          y[i] = to;
          const Rational cost = expected_distance(m, y, x[i]);
          if (cost < truthful[i]) {
            Witness w;
            w.profile = x;
            w.agent = i + 1;
            w.misreport = Misreport{i + 1, to};
            w.lhs = cost;
            w.bound = truthful[i];
            return Result::fail(std::move(w));
          }
        }
        y[i] = x[i];
      }
      return Result::pass();
    });
  });
  AxiomVerdict out = finish(Axiom::Strategyproofness, v, std::move(r), count);
  if (m.has_continuous_family())
    out.note = "expected cost of the continuous family is polynomial in the report; candidates are a finite sample";
  return out;
}

AxiomVerdict efficiency_scan(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  const auto grid = dom.grid_points();
  const std::uint64_t count = checked_power(grid.size(), dom.n);
  auto r = scan<Witness>(count, dom.exec, [&](std::uint64_t idx) {
    std::vector<Rational> x(dom.n);
    decode(idx, grid, x);
    return guarded(x, [&]() -> Result {
      const Rational f = expected_location(m, x);
      const Rational lo = *std::min_element(x.begin(), x.end());
      const Rational hi = *std::max_element(x.begin(), x.end());
      if (f >= lo && f <= hi) return Result::pass();
      Witness w;
      w.profile = x;
      w.lhs = f;
      w.bound = f < lo ? lo : hi;
      return Result::fail(std::move(w));
    });
  });
  return finish(Axiom::Efficiency, v, std::move(r), count);
}

// Subsets of `members` to test: the whole group, or every non-empty subset
// (as bitmasks over `members`, ascending) when all_subsets is set.
std::vector<std::vector<std::size_t>> groups_of(const std::vector<std::size_t>& members, bool all_subsets) {
  if (members.empty()) return {};
  if (!all_subsets) return {members};
  std::vector<std::vector<std::size_t>> out;
  const std::uint64_t full = std::uint64_t{1} << members.size();
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> g;
    for (std::size_t b = 0; b < members.size(); ++b)
      if (mask & (std::uint64_t{1} << b)) g.push_back(members[b]);
    out.push_back(std::move(g));
  }
  return out;
}

// Two-valued profile: agents with the bit set sit at `beta`, others at `alpha`.
Result two_valued_instance(const RandomizedMechanism& m, const CheckDomain& dom, const Rational& alpha,
                           const Rational& beta, std::uint64_t mask) {
  const std::size_t n = dom.n;
  std::vector<Rational> x(n);
  std::vector<std::size_t> at_alpha, at_beta;
  for (std::size_t a = 0; a < n; ++a) {
    const bool high = mask & (std::uint64_t{1} << (n - 1 - a));
    x[a] = high ? beta : alpha;
    (high ? at_beta : at_alpha).push_back(a);
  }
  return guarded(x, [&]() -> Result {
    for (const auto* members : {&at_alpha, &at_beta}) {
      if (members->empty()) continue;
      const std::size_t first = members->front();
      const Rational d = expected_distance(m, x, x[first]);
      for (const auto& g : groups_of(*members, dom.all_subsets)) {
        const Rational bound = group_share(n, g.size()) * (beta - alpha);
        if (d > bound) {
          Witness w;
          w.profile = x;
          for (auto a : g) w.group.push_back(a + 1);
          w.agent = g.front() + 1;
          w.lhs = d;
          w.bound = bound;
          return Result::fail(std::move(w));
        }
      }
    }
    return Result::pass();
  });
}

AxiomVerdict proportionality_scan(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  if (m.domain() != Domain::UnitInterval) throw std::invalid_argument("proportionality is defined on [0,1]");
  const std::uint64_t count = checked_power(2, dom.n);
  auto r = scan<Witness>(count, dom.exec, [&](std::uint64_t mask) {
    return two_valued_instance(m, dom, Rational(0), Rational(1), mask);
  });
  return finish(Axiom::Proportionality, v, std::move(r), count);
}

AxiomVerdict strong_proportionality_scan(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  const auto grid = dom.grid_points();
  std::vector<std::pair<Rational, Rational>> pairs;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) pairs.emplace_back(grid[i], grid[j]);
  const std::uint64_t masks = checked_power(2, dom.n);
  const std::uint64_t count = pairs.size() * masks;
  auto r = scan<Witness>(count, dom.exec, [&](std::uint64_t idx) {
    const auto& [alpha, beta] = pairs[idx / masks];
    return two_valued_instance(m, dom, alpha, beta, idx % masks);
  });
  return finish(Axiom::StrongProportionality, v, std::move(r), count);
}

AxiomVerdict spf_scan(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  const auto grid = dom.grid_points();
  const std::size_t n = dom.n;
  const std::size_t cap = dom.effective_subset_cap();
  const std::uint64_t count = checked_power(grid.size(), n);

  // Groups in ascending bitmask order with agent 1 as the most significant bit.
  std::vector<std::vector<std::size_t>> groups;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> g;
    for (std::size_t a = 0; a < n; ++a)
      if (mask & (std::uint64_t{1} << (n - 1 - a))) g.push_back(a);
    if (g.size() <= cap) groups.push_back(std::move(g));
  }

  auto r = scan<Witness>(count, dom.exec, [&](std::uint64_t idx) {
    std::vector<Rational> x(n);
    decode(idx, grid, x);
    return guarded(x, [&]() -> Result {
      const auto d = expected_distances(m, x);
      const Rational range =
          *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
      for (const auto& g : groups) {
        Rational lo = x[g.front()], hi = x[g.front()];
        for (auto a : g) {
          lo = min(lo, x[a]);
          hi = max(hi, x[a]);
        }
        const Rational bound = range * group_share(n, g.size()) + (hi - lo);
        for (auto a : g) {
          if (d[a] > bound) {
            Witness w;
            w.profile = x;
            for (auto b : g) w.group.push_back(b + 1);
            w.agent = a + 1;
            w.lhs = d[a];
            w.bound = bound;
            return Result::fail(std::move(w));
          }
        }
      }
      return Result::pass();
    });
  });
  AxiomVerdict out = finish(Axiom::SPF, v, std::move(r), count);
  out.partial_coverage = cap < n;
  if (out.partial_coverage) out.note = "groups limited to size " + std::to_string(cap);
  return out;
}

AxiomVerdict dispatch(Axiom a, Checker scan_fn, const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  require_compatible(m, v, dom);
  if (a == Axiom::Proportionality && m.domain() != Domain::UnitInterval)
    throw std::invalid_argument("proportionality is defined on [0,1]");
  if (v == Variant::Universal) return universal(a, scan_fn, m, dom);
  return scan_fn(m, v, dom);
}

bool co_located(const std::vector<Rational>& x, const std::vector<std::size_t>& group, std::size_t agent) {
  if (group.empty()) return false;
  bool has_agent = false;
  for (auto a : group) {
    if (a < 1 || a > x.size() || x[a - 1] != x[agent - 1]) return false;
    has_agent |= a == agent;
  }
  return has_agent;
}

}  // namespace

std::string to_string(Axiom a) { return kAxiomNames[static_cast<int>(a)]; }

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Deterministic:
      return "deterministic";
    case Variant::InExpectation:
      return "in_expectation";
    case Variant::Universal:
      return "universal";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Axiom parse_axiom(std::string_view text) {
  for (int i = 0; i < 6; ++i)
    if (text == kAxiomNames[i]) return static_cast<Axiom>(i);
  if (text == "sp") return Axiom::Strategyproofness;
  if (text == "pareto" || text == "pareto_efficiency" || text == "ex_post" || text == "ex_post_efficiency")
    return Axiom::Efficiency;
  if (text == "prop") return Axiom::Proportionality;
  if (text == "strong_prop") return Axiom::StrongProportionality;
  throw std::invalid_argument("unknown axiom '" + std::string(text) + "'");
}

Variant parse_variant(std::string_view text) {
  if (text == "det" || text == "deterministic") return Variant::Deterministic;
  if (text == "exp" || text == "expectation" || text == "in_expectation") return Variant::InExpectation;
  if (text == "universal") return Variant::Universal;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

std::vector<Rational> CheckDomain::grid_points() const {
  if (grid < 1) throw std::invalid_argument("grid denominator must be positive");
  std::vector<Rational> out;
  const std::int64_t lo = domain == Domain::UnitInterval ? 0 : -window * grid;
  const std::int64_t hi = domain == Domain::UnitInterval ? grid : window * grid;
  for (std::int64_t j = lo; j <= hi; ++j) out.emplace_back(j, grid);
  return out;
}

std::size_t CheckDomain::effective_subset_cap() const {
  if (subset_cap == 0) return n <= 5 ? n : 5;
  return std::min(subset_cap, n);
}

AxiomVerdict check_anonymity(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  return dispatch(Axiom::Anonymity, anonymity_scan, m, v, dom);
}

AxiomVerdict check_strategyproofness(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  return dispatch(Axiom::Strategyproofness, strategyproofness_scan, m, v, dom);
}

AxiomVerdict check_efficiency(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  return dispatch(Axiom::Efficiency, efficiency_scan, m, v, dom);
}

AxiomVerdict check_proportionality(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  return dispatch(Axiom::Proportionality, proportionality_scan, m, v, dom);
}

AxiomVerdict check_strong_proportionality(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  return dispatch(Axiom::StrongProportionality, strong_proportionality_scan, m, v, dom);
}

AxiomVerdict check_spf(const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  return dispatch(Axiom::SPF, spf_scan, m, v, dom);
}

AxiomVerdict check(Axiom a, const RandomizedMechanism& m, Variant v, const CheckDomain& dom) {
  switch (a) {
    case Axiom::Anonymity:
      return check_anonymity(m, v, dom);
    case Axiom::Strategyproofness:
      return check_strategyproofness(m, v, dom);
    case Axiom::Efficiency:
      return check_efficiency(m, v, dom);
    case Axiom::Proportionality:
      return check_proportionality(m, v, dom);
    case Axiom::StrongProportionality:
      return check_strong_proportionality(m, v, dom);
    case Axiom::SPF:
      return check_spf(m, v, dom);
  }
  throw std::invalid_argument("unknown axiom");
}

std::vector<Rational> misreport_candidates(const RandomizedMechanism& m, std::span<const Rational> x,
                                           std::size_t agent, const CheckDomain& dom) {
  if (agent >= x.size()) throw std::out_of_range("agent index out of range");
  return candidates_from(make_basis(m, dom), m.domain(), x, agent);
}

bool reverify(const RandomizedMechanism& m, const AxiomVerdict& verdict) {
  if (verdict.status != Status::Fail || !verdict.witness) return false;
  const Witness& w = verdict.witness.value();
  const Profile profile(m.domain(), w.profile);
  if (profile.size() != m.n()) return false;
  const auto& x = w.profile;
  const std::size_t n = x.size();

  std::optional<RandomizedMechanism> part;
  if (verdict.variant == Variant::Universal) {
    if (!w.component || *w.component >= m.components().size()) return false;
    part = component_mechanism(m, *w.component);
  }
  const RandomizedMechanism& mech = part ? *part : m;

  switch (verdict.axiom) {
    case Axiom::Anonymity: {
      if (!w.swap) return false;
      const auto [a, b] = *w.swap;
      if (a < 1 || b < 1 || a > n || b > n) return false;
      const Rational f = expected_location(mech, x);
      const Rational g = expected_location(mech, profile.swapped(a - 1, b - 1).locations());
      return g == w.lhs && f == w.bound && g != f;
    }
    case Axiom::Strategyproofness: {
      if (!w.misreport) return false;
      const std::size_t i = w.misreport->agent;
      if (i < 1 || i > n || !in_domain(m.domain(), w.misreport->to)) return false;
      const Rational truthful = expected_distance(mech, x, x[i - 1]);
      const Rational cost = expected_distance(mech, profile.with_report(i - 1, w.misreport->to).locations(), x[i - 1]);
      return cost == w.lhs && truthful == w.bound && cost < truthful;
    }
    case Axiom::Efficiency: {
      const Rational f = expected_location(mech, x);
      if (f != w.lhs) return false;
      return (f < profile.min() && w.bound == profile.min()) || (f > profile.max() && w.bound == profile.max());
    }
    case Axiom::Proportionality:
    case Axiom::StrongProportionality:
    case Axiom::SPF: {
      if (!w.agent || !co_located(x, w.group, *w.agent)) {
        if (verdict.axiom != Axiom::SPF || !w.agent) return false;
        // SPF groups need not be co-located; the agent must still belong.
        if (std::find(w.group.begin(), w.group.end(), *w.agent) == w.group.end()) return false;
      }
      Rational bound;
      if (verdict.axiom == Axiom::SPF) {
        Rational lo = x[w.group.front() - 1], hi = lo;
        for (auto a : w.group) {
          if (a < 1 || a > n) return false;
          lo = min(lo, x[a - 1]);
          hi = max(hi, x[a - 1]);
        }
        bound = profile.range() * group_share(n, w.group.size()) + (hi - lo);
      } else {
        std::vector<Rational> values(x.begin(), x.end());
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.size() > 2) return false;
        if (verdict.axiom == Axiom::Proportionality &&
            std::any_of(values.begin(), values.end(), [](const Rational& v) { return v != 0 && v != 1; }))
          return false;
        const Rational width = verdict.axiom == Axiom::Proportionality ? Rational(1) : profile.range();
        bound = group_share(n, w.group.size()) * width;
        if (values.size() == 1 && w.group.size() != n) return false;
      }
      const Rational d = expected_distance(mech, x, x[*w.agent - 1]);
      return bound == w.bound && d == w.lhs && d > bound;
    }
  }
  return false;
}

std::vector<std::string> implication_violations(const RandomizedMechanism& m, const CheckDomain& dom) {
  std::vector<std::string> out;
  auto arrow = [&](const AxiomVerdict& from, const AxiomVerdict& to) {
    if (from.status == Status::Pass && to.status == Status::Fail)
      out.push_back(m.name() + ": " + to_string(from.axiom) + "/" + to_string(from.variant) + " passes but " +
                    to_string(to.axiom) + "/" + to_string(to.variant) + " fails");
  };
  const auto exp = Variant::InExpectation;
  const AxiomVerdict spf = check_spf(m, exp, dom);
  const AxiomVerdict strong = check_strong_proportionality(m, exp, dom);
  arrow(spf, strong);
  if (m.domain() == Domain::UnitInterval) {
    const AxiomVerdict prop = check_proportionality(m, exp, dom);
    arrow(strong, prop);
    arrow(spf, prop);
  }
  arrow(check_strong_proportionality(m, Variant::Universal, dom), strong);
  arrow(check_anonymity(m, Variant::Universal, dom), check_anonymity(m, exp, dom));
  arrow(check_strategyproofness(m, Variant::Universal, dom), check_strategyproofness(m, exp, dom));
  arrow(check_efficiency(m, Variant::Universal, dom), check_efficiency(m, exp, dom));
  return out;
}

std::optional<Manipulation> search_manipulation(const RandomizedMechanism& m, const CheckDomain& dom) {
  require_compatible(m, Variant::InExpectation, dom);
  const auto grid = dom.grid_points();
  const std::uint64_t count = checked_power(grid.size(), dom.n);
  const MisreportBasis basis = make_basis(m, dom);

  struct Best {
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
    std::optional<Manipulation> found;
    void offer(std::uint64_t idx, Manipulation cand) {
      if (!found || cand.gain > found->gain || (cand.gain == found->gain && idx < index)) {
        index = idx;
        found = std::move(cand);
      }
    }
  };

  auto profile_best = [&](std::uint64_t idx, Best& best) {
    std::vector<Rational> x(dom.n);
    decode(idx, grid, x);
    const auto truthful = expected_distances(m, x);
    std::vector<Rational> y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (const auto& to : candidates_from(basis, m.domain(), x, i)) {
        if (to == x[i]) continue;
        y[i] = to;
        const Rational cost = expected_distance(m, y, x[i]);
        if (cost < truthful[i])
          best.offer(idx, Manipulation{x, i + 1, to, truthful[i], cost, truthful[i] - cost});
      }
      y[i] = x[i];
    }
  };

  Best best;
  if (dom.exec == Execution::Serial) {
    for (std::uint64_t idx = 0; idx < count; ++idx) profile_best(idx, best);
  } else {
    const auto total = static_cast<std::int64_t>(count);
    std::exception_ptr error;
#pragma omp parallel
    {
      Best local;
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t s = 0; s < total; ++s) {
        try {
          profile_best(static_cast<std::uint64_t>(s), local);
        } catch (...) {
#pragma omp critical(facloc_search_error)
          if (!error) error = std::current_exception();
        }
      }
#pragma omp critical(facloc_search_merge)
      if (local.found) best.offer(local.index, *local.found);
    }
    if (error) std::rethrow_exception(error);
  }
  return best.found;
}

}  // namespace facloc
