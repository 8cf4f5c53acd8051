#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "facloc/location.hpp"
#include "facloc/outcome.hpp"
#include "facloc/profile.hpp"
#include "facloc/rational.hpp"

namespace facloc {

/// Median of the n reports and n+1 fixed phantoms (sorted, non-decreasing).
struct PhantomRule {
  std::vector<ExtLocation> phantoms;
  friend bool operator==(const PhantomRule&, const PhantomRule&) = default;
};
/// The k-th largest report, k in 1..n.
struct RankRule {
  std::size_t k;
  friend bool operator==(const RankRule&, const RankRule&) = default;
};
/// The report of agent `agent` (1-based).
struct DictatorRule {
  std::size_t agent;
  friend bool operator==(const DictatorRule&, const DictatorRule&) = default;
};
/// Lower median of the reports.
struct MedianRule {
  friend bool operator==(const MedianRule&, const MedianRule&) = default;
};
/// Phantoms at j/n, j = 0..n.
struct UniformPhantomRule {
  friend bool operator==(const UniformPhantomRule&, const UniformPhantomRule&) = default;
};
/// Mean of the reports. Not a phantom mechanism.
struct AverageRule {
  friend bool operator==(const AverageRule&, const AverageRule&) = default;
};

class DeterministicMechanism {
 public:
  using Rule = std::variant<PhantomRule, RankRule, DictatorRule, MedianRule, UniformPhantomRule, AverageRule>;

  /// Throws std::invalid_argument unless `phantoms` is non-decreasing.
  static DeterministicMechanism phantom(std::vector<ExtLocation> phantoms);
  static DeterministicMechanism rank(std::size_t k);
  static DeterministicMechanism dictator(std::size_t agent);
  static DeterministicMechanism median() { return DeterministicMechanism(MedianRule{}); }
  static DeterministicMechanism uniform_phantom() { return DeterministicMechanism(UniformPhantomRule{}); }
  static DeterministicMechanism average() { return DeterministicMechanism(AverageRule{}); }

  const Rule& rule() const { return rule_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&rule_);
  }

  /// False for Dictator and Average, which have no phantom form.
  bool is_phantom_representable() const;

  /// Spec-string style label, e.g. "rank:k=2" or "phantom:[0,1/2,1]".
  std::string name() const;

  friend bool operator==(const DeterministicMechanism&, const DeterministicMechanism&) = default;

 private:
  explicit DeterministicMechanism(Rule rule) : rule_(std::move(rule)) {}
  Rule rule_;
};

/// Throws std::invalid_argument if `m` cannot run on `n` agents over `domain`
/// (phantom count, infinite phantoms on [0,1], rank or dictator index range).
void validate(const DeterministicMechanism& m, std::size_t n, Domain domain);

/// Facility location chosen by `m`. Validates first.
Rational evaluate(const DeterministicMechanism& m, const Profile& x);
/// Same as above for a raw report vector; skips validation.
Rational evaluate_unchecked(const DeterministicMechanism& m, Domain domain, std::span<const Rational> x);

/// Equivalent Phantom mechanism for Rank, Median and UniformPhantom (Phantom
/// is returned unchanged). Extreme phantoms are 0 and 1 on the unit interval
/// and -inf/+inf on the real line. Throws for Dictator and Average.
DeterministicMechanism to_phantom_form(const DeterministicMechanism& m, std::size_t n, Domain domain);

/// Rank index (k-th largest) used for the lower median of n reports.
std::size_t median_rank(std::size_t n);

struct WeightedMechanism {
  DeterministicMechanism mechanism;
  Rational weight;
  friend bool operator==(const WeightedMechanism&, const WeightedMechanism&) = default;
};

struct UniformOn01 {
  friend bool operator==(const UniformOn01&, const UniformOn01&) = default;
};
/// (location, probability) pairs.
struct DiscreteAtoms {
  std::vector<std::pair<Rational, Rational>> atoms;
  friend bool operator==(const DiscreteAtoms&, const DiscreteAtoms&) = default;
};

/// Law of the n-1 interior phantoms of an I.I.D. phantom mechanism; the
/// extreme phantoms are always 0 and 1.
struct IIDPhantomSpec {
  std::variant<UniformOn01, DiscreteAtoms> distribution;
  bool is_uniform() const { return std::holds_alternative<UniformOn01>(distribution); }
  friend bool operator==(const IIDPhantomSpec&, const IIDPhantomSpec&) = default;
};

struct ContinuousFamily {
  IIDPhantomSpec spec;
  Rational weight;
};

class RequiresNumericOracle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite mixture of deterministic mechanisms, optionally with a weighted
/// uniform I.I.D. phantom family. Zero-weight components are dropped; the
/// remaining weights are positive and sum to one.
class RandomizedMechanism {
 public:
  RandomizedMechanism(std::string name, std::size_t n, Domain domain, std::vector<WeightedMechanism> components,
                      std::optional<ContinuousFamily> family = std::nullopt);

  static RandomizedMechanism deterministic(std::string name, DeterministicMechanism m, std::size_t n, Domain domain);

  const std::string& name() const { return name_; }
  std::size_t n() const { return n_; }
  Domain domain() const { return domain_; }
  const std::vector<WeightedMechanism>& components() const { return components_; }
  const std::optional<ContinuousFamily>& continuous_family() const { return family_; }
  bool has_continuous_family() const { return family_.has_value(); }
  bool is_deterministic() const { return !family_ && components_.size() == 1; }

  /// Finite phantom values used by any component (for misreport breakpoints).
  std::vector<Rational> finite_phantom_values() const;

 private:
  std::string name_;
  std::size_t n_;
  Domain domain_;
  std::vector<WeightedMechanism> components_;
  std::optional<ContinuousFamily> family_;
};

/// Pushforward of the mixture through `evaluate`. A continuous family only
/// has an atomic law on unanimous profiles; otherwise RequiresNumericOracle.
OutcomeDistribution outcome_distribution(const RandomizedMechanism& m, const Profile& x);

struct ExpectedOutcome {
  Rational expected_location;
  std::vector<Rational> expected_distance;  // one per agent
};

/// Exact expected location and per-agent expected distance. Uniform phantom
/// families use the closed form from order_stats.hpp.
ExpectedOutcome expected_outcome(const RandomizedMechanism& m, const Profile& x);

Rational expected_location(const RandomizedMechanism& m, std::span<const Rational> x);
Rational expected_distance(const RandomizedMechanism& m, std::span<const Rational> x, const Rational& point);
/// Expected distance for every agent, sharing the component evaluations.
std::vector<Rational> expected_distances(const RandomizedMechanism& m, std::span<const Rational> x);

}  // namespace facloc
