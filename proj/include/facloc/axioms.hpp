#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facloc/execution.hpp"
#include "facloc/mechanism.hpp"
#include "facloc/rational.hpp"

namespace facloc {

enum class Axiom { Anonymity, Strategyproofness, Efficiency, Proportionality, StrongProportionality, SPF };

/// Deterministic: a single mechanism. InExpectation: expected location or
/// distance. Universal: every component of the given mixture satisfies the
/// deterministic axiom (for Efficiency this is ex-post efficiency).
enum class Variant { Deterministic, InExpectation, Universal };

std::string to_string(Axiom a);
std::string to_string(Variant v);
std::string to_string(Status s);
/// Accepts the snake_case names plus "sp", "prop", "strong_prop", "pareto", "ex_post".
Axiom parse_axiom(std::string_view text);
/// "det", "deterministic", "exp", "expectation", "in_expectation", "universal".
Variant parse_variant(std::string_view text);

/// Finite verification domain.
struct CheckDomain {
  std::size_t n = 3;
  /// Locations j/grid. On the unit interval j = 0..grid; on the real line
  /// every j/grid inside [-window, window].
  std::int64_t grid = 6;
  Domain domain = Domain::UnitInterval;
  std::int64_t window = 10;
  /// Add every grid point to the strategyproofness misreport set.
  bool exhaustive = true;
  /// Proportionality-type checks over every subset of a co-located group
  /// instead of the maximal group only.
  bool all_subsets = false;
  /// Largest SPF group size; 0 means n for n <= 5 and 5 otherwise.
  std::size_t subset_cap = 0;
  Execution exec = Execution::Parallel;

  std::vector<Rational> grid_points() const;
  std::size_t effective_subset_cap() const;
};

struct Misreport {
  std::size_t agent;  // 1-based
  Rational to;
  friend bool operator==(const Misreport&, const Misreport&) = default;
};

/// Exact, re-checkable failing instance. Agent indices are 1-based;
/// `component` indexes RandomizedMechanism::components().
///
/// Meaning of lhs/bound by axiom:
///   Anonymity          lhs = outcome after `swap`, bound = outcome before
///   Strategyproofness  lhs = cost after `misreport`, bound = truthful cost
///   Efficiency         lhs = outcome, bound = the violated end of [min, max]
///   Proportionality*   lhs = distance of `agent`, bound = the group bound
struct Witness {
  std::vector<Rational> profile;
  std::vector<std::size_t> group;
  std::optional<std::size_t> agent;
  std::optional<Misreport> misreport;
  std::optional<std::pair<std::size_t, std::size_t>> swap;
  std::optional<std::size_t> component;
  Rational lhs;
  Rational bound;
  std::string note;
};

struct AxiomVerdict {
  Axiom axiom = Axiom::Anonymity;
  Variant variant = Variant::InExpectation;
  Status status = Status::Pass;
  std::optional<Witness> witness;
  /// Size of the enumerated instance space (independent of early exit).
  std::uint64_t instances = 0;
  /// SPF group sizes were capped below n.
  bool partial_coverage = false;
  std::string note;
};

/// Throws std::invalid_argument on n mismatch, domain mismatch, a
/// Deterministic variant on a genuine mixture, or Proportionality on the real line.
AxiomVerdict check_anonymity(const RandomizedMechanism& m, Variant v, const CheckDomain& dom);
AxiomVerdict check_strategyproofness(const RandomizedMechanism& m, Variant v, const CheckDomain& dom);
AxiomVerdict check_efficiency(const RandomizedMechanism& m, Variant v, const CheckDomain& dom);
AxiomVerdict check_proportionality(const RandomizedMechanism& m, Variant v, const CheckDomain& dom);
AxiomVerdict check_strong_proportionality(const RandomizedMechanism& m, Variant v, const CheckDomain& dom);
AxiomVerdict check_spf(const RandomizedMechanism& m, Variant v, const CheckDomain& dom);
AxiomVerdict check(Axiom a, const RandomizedMechanism& m, Variant v, const CheckDomain& dom);

/// Recomputes the witness quantities from scratch and returns true iff they
/// match the recorded lhs/bound exactly and still violate the axiom.
bool reverify(const RandomizedMechanism& m, const AxiomVerdict& verdict);

/// Candidate misreports for `agent` (0-based) at profile `x`: every location
/// where the expected facility location can change slope, the domain ends,
/// and midpoints between consecutive candidates. Sorted, unique.
std::vector<Rational> misreport_candidates(const RandomizedMechanism& m, std::span<const Rational> x,
                                           std::size_t agent, const CheckDomain& dom);

/// Runs the checkers needed for the implication arrows
/// (SPF => StrongProp => Prop in expectation; Universal => InExpectation for
/// anonymity, strategyproofness and strong proportionality) and returns a
/// description of every arrow the verdicts contradict.
std::vector<std::string> implication_violations(const RandomizedMechanism& m, const CheckDomain& dom);

struct Manipulation {
  std::vector<Rational> profile;
  std::size_t agent;  // 1-based
  Rational to;
  Rational truthful_cost;
  Rational misreport_cost;
  Rational gain;
};

/// The misreport with the largest exact expected-cost reduction over the
/// check domain. Ties go to the lexicographically first (profile, agent,
/// misreport). nullopt when nobody can gain.
std::optional<Manipulation> search_manipulation(const RandomizedMechanism& m, const CheckDomain& dom);

}  // namespace facloc
