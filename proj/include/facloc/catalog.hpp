#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "facloc/mechanism.hpp"

namespace facloc {

/// Uniform mixture of RankK(1..n).
RandomizedMechanism random_rank(std::size_t n, Domain domain = Domain::UnitInterval);
/// Uniform mixture of Dictator(1..n). Same outcome law as random_rank, not universally anonymous.
RandomizedMechanism random_dictator(std::size_t n, Domain domain = Domain::UnitInterval);
/// Average with weight p, each RankK with weight (1-p)/n. p in [0,1].
RandomizedMechanism average_or_random_rank(const Rational& p, std::size_t n, Domain domain = Domain::UnitInterval);
/// Extreme phantoms 0 and 1, n-1 interior phantoms I.I.D. uniform on [0,1].
RandomizedMechanism random_phantom(std::size_t n);

class ExpansionTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultComponentCap = 10'000;

/// I.I.D. phantom mechanism. A discrete law is expanded exactly into one
/// Phantom component per multiset of interior draws (multinomial weight);
/// ExpansionTooLarge if that exceeds `component_cap`.
RandomizedMechanism iid_phantom(const IIDPhantomSpec& spec, std::size_t n,
                                std::size_t component_cap = kDefaultComponentCap);

RandomizedMechanism median_mechanism(std::size_t n, Domain domain = Domain::UnitInterval);
RandomizedMechanism uniform_phantom_mechanism(std::size_t n);

/// Parseable mechanism identity. Textual forms:
///   random_rank  random_dictator  avg_or_rr:p=1/2  median  uniform_phantom
///   phantom:[0,1/2,1]  random_phantom  iid_phantom:{atoms:[["1/2","1"]]}
///   rank:k=2  dictator:i=1  average
struct MechanismSpec {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::size_t n = 3;
  Domain domain = Domain::UnitInterval;

  static MechanismSpec parse(std::string_view text, std::size_t n, Domain domain);
  /// Canonical text; parse(to_string()) reproduces the spec.
  std::string to_string() const;
  /// Validates parameters and constructs the mechanism.
  RandomizedMechanism build() const;

  friend bool operator==(const MechanismSpec&, const MechanismSpec&) = default;
};

}  // namespace facloc
