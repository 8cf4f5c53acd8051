#include "facloc/mechanism.hpp"

#include <algorithm>
#include <functional>

#include "facloc/order_stats.hpp"

namespace facloc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<ExtLocation>& ext_buffer() {
  thread_local std::vector<ExtLocation> buf;
  return buf;
}

std::vector<Rational>& rational_buffer() {
  thread_local std::vector<Rational> buf;
  return buf;
}

Rational kth_largest(std::span<const Rational> x, std::size_t k) {
  auto& buf = rational_buffer();
  buf.assign(x.begin(), x.end());
  auto nth = buf.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(buf.begin(), nth, buf.end(), std::greater<>{});
  return *nth;
}

Rational phantom_median(std::span<const Rational> x, const std::vector<ExtLocation>& phantoms) {
  auto& buf = ext_buffer();
  buf.clear();
  buf.insert(buf.end(), x.begin(), x.end());
  buf.insert(buf.end(), phantoms.begin(), phantoms.end());
  auto mid = buf.begin() + static_cast<std::ptrdiff_t>(x.size());
  std::nth_element(buf.begin(), mid, buf.end());
  return mid->value();
}

Rational uniform_phantom_median(std::span<const Rational> x) {
  const auto n = static_cast<std::int64_t>(x.size());
  auto& buf = rational_buffer();
  buf.assign(x.begin(), x.end());
  for (std::int64_t j = 0; j <= n; ++j) buf.emplace_back(j, n);
  auto mid = buf.begin() + n;
  std::nth_element(buf.begin(), mid, buf.end());
  return *mid;
}

std::string join_phantoms(const std::vector<ExtLocation>& phantoms) {
  std::string out = "[";
  for (std::size_t i = 0; i < phantoms.size(); ++i) {
    if (i) out += ",";
    out += phantoms[i].to_string();
  }
  return out + "]";
}

}  // namespace

DeterministicMechanism DeterministicMechanism::phantom(std::vector<ExtLocation> phantoms) {
  if (!std::is_sorted(phantoms.begin(), phantoms.end()))
    throw std::invalid_argument("phantom vector must be non-decreasing: " + join_phantoms(phantoms));
  return DeterministicMechanism(PhantomRule{std::move(phantoms)});
}

DeterministicMechanism DeterministicMechanism::rank(std::size_t k) {
  if (k == 0) throw std::invalid_argument("rank index is 1-based");
  return DeterministicMechanism(RankRule{k});
}

DeterministicMechanism DeterministicMechanism::dictator(std::size_t agent) {
  if (agent == 0) throw std::invalid_argument("dictator index is 1-based");
  return DeterministicMechanism(DictatorRule{agent});
}

bool DeterministicMechanism::is_phantom_representable() const {
  return !std::holds_alternative<DictatorRule>(rule_) && !std::holds_alternative<AverageRule>(rule_);
}

std::string DeterministicMechanism::name() const {
  return std::visit(Overloaded{
                        [](const PhantomRule& r) { return "phantom:" + join_phantoms(r.phantoms); },
                        [](const RankRule& r) { return "rank:k=" + std::to_string(r.k); },
                        [](const DictatorRule& r) { return "dictator:i=" + std::to_string(r.agent); },
                        [](const MedianRule&) { return std::string("median"); },
                        [](const UniformPhantomRule&) { return std::string("uniform_phantom"); },
                        [](const AverageRule&) { return std::string("average"); },
                    },
                    rule_);
}

std::size_t median_rank(std::size_t n) { return n / 2 + 1; }

void validate(const DeterministicMechanism& m, std::size_t n, Domain domain) {
  if (n < 2) throw std::invalid_argument("mechanisms need n >= 2");
  if (const auto* p = m.as<PhantomRule>()) {
    if (p->phantoms.size() != n + 1)
      throw std::invalid_argument("phantom count " + std::to_string(p->phantoms.size()) + " != n+1 = " +
                                  std::to_string(n + 1));
    std::size_t pos = 0, neg = 0;
    for (const auto& y : p->phantoms) {
      if (domain == Domain::UnitInterval && (!y.is_finite() || !in_domain(domain, y.value())))
        throw std::invalid_argument("phantom " + y.to_string() + " not in [0,1] on the unit-interval domain");
      pos += y.is_pos_infinity();
      neg += y.is_neg_infinity();
    }
    if (pos > n || neg > n) throw std::invalid_argument("phantom vector puts the median at infinity");
  } else if (const auto* r = m.as<RankRule>()) {
    if (r->k > n) throw std::invalid_argument("rank k=" + std::to_string(r->k) + " exceeds n=" + std::to_string(n));
  } else if (const auto* d = m.as<DictatorRule>()) {
    if (d->agent > n)
      throw std::invalid_argument("dictator " + std::to_string(d->agent) + " exceeds n=" + std::to_string(n));
  }
}

Rational evaluate_unchecked(const DeterministicMechanism& m, Domain, std::span<const Rational> x) {
  return std::visit(Overloaded{
                        [&](const PhantomRule& r) { return phantom_median(x, r.phantoms); },
                        [&](const RankRule& r) { return kth_largest(x, r.k); },
                        [&](const DictatorRule& r) { return x[r.agent - 1]; },
                        [&](const MedianRule&) { return kth_largest(x, median_rank(x.size())); },
                        [&](const UniformPhantomRule&) { return uniform_phantom_median(x); },
                        [&](const AverageRule&) {
                          Rational sum = 0;
                          for (const auto& v : x) sum += v;
                          return sum / Rational(static_cast<std::int64_t>(x.size()));
                        },
                    },
                    m.rule());
}

Rational evaluate(const DeterministicMechanism& m, const Profile& x) {
  validate(m, x.size(), x.domain());
  return evaluate_unchecked(m, x.domain(), x.locations());
}

DeterministicMechanism to_phantom_form(const DeterministicMechanism& m, std::size_t n, Domain domain) {
  validate(m, n, domain);
  const ExtLocation low = domain == Domain::UnitInterval ? ExtLocation(0) : ExtLocation::neg_infinity();
  const ExtLocation high = domain == Domain::UnitInterval ? ExtLocation(1) : ExtLocation::pos_infinity();
  auto rank_form = [&](std::size_t k) {
    std::vector<ExtLocation> phantoms;
    phantoms.reserve(n + 1);
    phantoms.push_back(low);
    phantoms.insert(phantoms.end(), k - 1, low);
    phantoms.insert(phantoms.end(), n - k, high);
    phantoms.push_back(high);
    return DeterministicMechanism::phantom(std::move(phantoms));
  };
  if (m.as<PhantomRule>()) return m;
  if (const auto* r = m.as<RankRule>()) return rank_form(r->k);
  if (m.as<MedianRule>()) return rank_form(median_rank(n));
  if (m.as<UniformPhantomRule>()) {
    std::vector<ExtLocation> phantoms;
    for (std::size_t j = 0; j <= n; ++j)
      phantoms.emplace_back(Rational(static_cast<std::int64_t>(j), static_cast<std::int64_t>(n)));
    return DeterministicMechanism::phantom(std::move(phantoms));
  }
  throw std::invalid_argument(m.name() + " is not a phantom mechanism");
}

RandomizedMechanism::RandomizedMechanism(std::string name, std::size_t n, Domain domain,
                                         std::vector<WeightedMechanism> components,
                                         std::optional<ContinuousFamily> family)
    : name_(std::move(name)), n_(n), domain_(domain), family_(std::move(family)) {
  if (n_ < 2) throw std::invalid_argument("mechanisms need n >= 2");
  Rational total = 0;
  for (auto& c : components) {
    if (c.weight.sign() < 0) throw std::invalid_argument("negative mixture weight");
    if (c.weight.is_zero()) continue;
    validate(c.mechanism, n_, domain_);
    total += c.weight;
    components_.push_back(std::move(c));
  }
  if (family_) {
    if (family_->weight.sign() < 0) throw std::invalid_argument("negative mixture weight");
    if (family_->weight.is_zero()) {
      family_.reset();
    } else {
      if (!family_->spec.is_uniform())
        throw std::invalid_argument("discrete phantom laws must be expanded into a finite mixture");
      if (domain_ != Domain::UnitInterval)
        throw std::invalid_argument("I.I.D. phantom families live on the unit interval");
      total += family_->weight;
    }
  }
  if (total != Rational(1)) throw std::invalid_argument("mixture weights sum to " + total.to_string());
}

RandomizedMechanism RandomizedMechanism::deterministic(std::string name, DeterministicMechanism m, std::size_t n,
                                                       Domain domain) {
  return RandomizedMechanism(std::move(name), n, domain, {{std::move(m), 1}});
}

std::vector<Rational> RandomizedMechanism::finite_phantom_values() const {
  std::vector<Rational> out;
  for (const auto& c : components_) {
    if (!c.mechanism.is_phantom_representable()) continue;
    const auto form = to_phantom_form(c.mechanism, n_, domain_);
    for (const auto& y : form.as<PhantomRule>()->phantoms)
      if (y.is_finite()) out.push_back(y.value());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_profile(const RandomizedMechanism& m, std::span<const Rational> x) {
  if (x.size() != m.n())
    throw std::invalid_argument("profile has " + std::to_string(x.size()) + " agents, mechanism expects " +
                                std::to_string(m.n()));
}

}  // namespace

OutcomeDistribution outcome_distribution(const RandomizedMechanism& m, const Profile& x) {
  check_profile(m, x.locations());
  if (x.domain() != m.domain()) throw std::invalid_argument("profile and mechanism domains differ");
  std::vector<Atom> atoms;
  for (const auto& c : m.components())
    atoms.push_back({evaluate_unchecked(c.mechanism, m.domain(), x.locations()), c.weight});
  if (const auto& fam = m.continuous_family()) {
    if (!x.is_unanimous())
      throw RequiresNumericOracle("continuous phantom family has no atomic outcome law on " + x.to_string());
    atoms.push_back({x[0], fam->weight});
  }
  return OutcomeDistribution(std::move(atoms));
}

Rational expected_location(const RandomizedMechanism& m, std::span<const Rational> x) {
  check_profile(m, x);
  Rational sum = 0;
  for (const auto& c : m.components()) sum += c.weight * evaluate_unchecked(c.mechanism, m.domain(), x);
  if (const auto& fam = m.continuous_family()) sum += fam->weight * uniform_family_expected_location(x);
  return sum;
}

Rational expected_distance(const RandomizedMechanism& m, std::span<const Rational> x, const Rational& point) {
  check_profile(m, x);
  Rational sum = 0;
  for (const auto& c : m.components())
    sum += c.weight * abs_diff(evaluate_unchecked(c.mechanism, m.domain(), x), point);
  if (const auto& fam = m.continuous_family()) sum += fam->weight * uniform_family_expected_distance(x, point);
  return sum;
}

std::vector<Rational> expected_distances(const RandomizedMechanism& m, std::span<const Rational> x) {
  check_profile(m, x);
  std::vector<Rational> out(x.size(), Rational(0));
  for (const auto& c : m.components()) {
    const Rational f = evaluate_unchecked(c.mechanism, m.domain(), x);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += c.weight * abs_diff(f, x[i]);
  }
  if (const auto& fam = m.continuous_family())
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += fam->weight * uniform_family_expected_distance(x, x[i]);
  return out;
}

ExpectedOutcome expected_outcome(const RandomizedMechanism& m, const Profile& x) {
  if (x.domain() != m.domain()) throw std::invalid_argument("profile and mechanism domains differ");
  return {expected_location(m, x.locations()), expected_distances(m, x.locations())};
}

}  // namespace facloc
