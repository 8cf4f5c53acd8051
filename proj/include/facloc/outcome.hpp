#pragma once

#include <vector>

#include "facloc/rational.hpp"

namespace facloc {

struct Atom {
  Rational x;
  Rational p;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite distribution of facility locations. Atoms are sorted by location,
/// merged, strictly positive and sum to exactly one.
class OutcomeDistribution {
 public:
  /// Merges duplicate locations and drops zero-probability atoms. Throws if a
  /// probability is negative or the total is not one.
  explicit OutcomeDistribution(std::vector<Atom> atoms);

  static OutcomeDistribution point(const Rational& x) { return OutcomeDistribution({{x, 1}}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  /// Probability mass at exactly `x` (zero if absent).
  Rational probability_at(const Rational& x) const;

  Rational expected_location() const;
  Rational expected_distance(const Rational& point) const;

  friend bool operator==(const OutcomeDistribution&, const OutcomeDistribution&) = default;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace facloc
