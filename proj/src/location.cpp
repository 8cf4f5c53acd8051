#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "facloc/location.hpp"
#include "facloc/profile.hpp"

namespace facloc {

ExtLocation ExtLocation::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity") return pos_infinity();
  if (s == "-inf" || s == "-infinity") return neg_infinity();
  return ExtLocation(Rational::parse(s));
}

const Rational& ExtLocation::value() const {
  if (kind_ != Kind::Finite) throw std::domain_error("arithmetic on an infinite location");
  return value_;
}

std::string ExtLocation::to_string() const {
  switch (kind_) {
    case Kind::NegInfinity: return "-inf";
    case Kind::PosInfinity: return "+inf";
    case Kind::Finite: break;
  }
  return value_.to_string();
}

std::string to_string(Domain d) { return d == Domain::UnitInterval ? "unit_interval" : "real_line"; }

Domain parse_domain(std::string_view text) {
  if (text == "unit" || text == "unit_interval") return Domain::UnitInterval;
  if (text == "real" || text == "real_line") return Domain::RealLine;
  throw std::invalid_argument("unknown domain '" + std::string(text) + "' (expected unit|real)");
}

bool in_domain(Domain domain, const Rational& x) {
  return domain == Domain::RealLine || (x >= Rational(0) && x <= Rational(1));
}

Profile::Profile(Domain domain, std::vector<Rational> locations) : domain_(domain), locations_(std::move(locations)) {
  if (locations_.size() < 2) throw std::invalid_argument("a profile needs at least two agents");
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    if (!in_domain(domain_, locations_[i]))
      throw std::invalid_argument("agent " + std::to_string(i + 1) + " location " + locations_[i].to_string() +
                                  " lies outside [0,1]");
  }
}

Profile Profile::with_report(std::size_t agent, const Rational& report) const {
  Profile copy = *this;
  if (!in_domain(domain_, report)) throw std::invalid_argument("misreport outside the domain");
  copy.locations_.at(agent) = report;
  return copy;
}

Profile Profile::swapped(std::size_t i, std::size_t j) const {
  Profile copy = *this;
  std::swap(copy.locations_.at(i), copy.locations_.at(j));
  return copy;
}

Rational Profile::min() const { return *std::min_element(locations_.begin(), locations_.end()); }
Rational Profile::max() const { return *std::max_element(locations_.begin(), locations_.end()); }

Rational Profile::mean() const {
  Rational sum = std::accumulate(locations_.begin(), locations_.end(), Rational(0));
  return sum / Rational(static_cast<std::int64_t>(locations_.size()));
}

bool Profile::is_unanimous() const {
  return std::all_of(locations_.begin(), locations_.end(), [&](const Rational& x) { return x == locations_.front(); });
}

std::string Profile::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    if (i) out += ",";
    out += locations_[i].to_string();
  }
  return out + ")";
}

}  // namespace facloc
