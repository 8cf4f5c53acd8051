#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facloc/rational.hpp"

namespace facloc {

enum class Domain { UnitInterval, RealLine };

std::string to_string(Domain d);
/// "unit", "unit_interval", "real", "real_line".
Domain parse_domain(std::string_view text);

/// Reported agent locations. Always finite, at least two agents, and inside
/// [0, 1] on the unit-interval domain.
class Profile {
 public:
  Profile(Domain domain, std::vector<Rational> locations);

  Domain domain() const { return domain_; }
  std::size_t size() const { return locations_.size(); }
  const Rational& operator[](std::size_t i) const { return locations_[i]; }
  std::span<const Rational> locations() const { return locations_; }

  /// Same profile with agent `agent` (0-based) reporting `report` instead.
  Profile with_report(std::size_t agent, const Rational& report) const;
  /// Same profile with agents `i` and `j` (0-based) exchanged.
  Profile swapped(std::size_t i, std::size_t j) const;

  Rational min() const;
  Rational max() const;
  Rational range() const { return max() - min(); }
  Rational mean() const;
  bool is_unanimous() const;

  std::string to_string() const;

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  Domain domain_;
  std::vector<Rational> locations_;
};

bool in_domain(Domain domain, const Rational& x);

}  // namespace facloc
