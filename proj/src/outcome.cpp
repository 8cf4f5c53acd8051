#include "facloc/outcome.hpp"

#include <algorithm>
#include <stdexcept>

namespace facloc {

OutcomeDistribution::OutcomeDistribution(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  Rational total = 0;
  for (const Atom& a : atoms) {
    if (a.p.sign() < 0) throw std::invalid_argument("negative outcome probability");
    total += a.p;
    if (a.p.is_zero()) continue;
    if (!atoms_.empty() && atoms_.back().x == a.x) {
      atoms_.back().p += a.p;
    } else {
      atoms_.push_back(a);
    }
  }
  if (total != Rational(1)) throw std::invalid_argument("outcome probabilities sum to " + total.to_string());
}

Rational OutcomeDistribution::probability_at(const Rational& x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, [](const Atom& a, const Rational& v) { return a.x < v; });
  return (it != atoms_.end() && it->x == x) ? it->p : Rational(0);
}

Rational OutcomeDistribution::expected_location() const {
  Rational sum = 0;
  for (const Atom& a : atoms_) sum += a.p * a.x;
  return sum;
}

Rational OutcomeDistribution::expected_distance(const Rational& point) const {
  Rational sum = 0;
  for (const Atom& a : atoms_) sum += a.p * abs_diff(a.x, point);
  return sum;
}

}  // namespace facloc
