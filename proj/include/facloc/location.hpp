#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "facloc/rational.hpp"

namespace facloc {

/// A point on the extended real line. Infinities order correctly against
/// finite values but never take part in arithmetic: value() on an infinity
/// throws.
class ExtLocation {
 public:
  enum class Kind : unsigned char { NegInfinity = 0, Finite = 1, PosInfinity = 2 };

  ExtLocation() = default;
  ExtLocation(Rational value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  ExtLocation(std::int64_t value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  static ExtLocation neg_infinity() { return ExtLocation(Kind::NegInfinity); }
  static ExtLocation pos_infinity() { return ExtLocation(Kind::PosInfinity); }

  /// Accepts any Rational literal plus "inf", "+inf", "-inf".
  static ExtLocation parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_infinity() const { return kind_ == Kind::PosInfinity; }
  bool is_neg_infinity() const { return kind_ == Kind::NegInfinity; }

  const Rational& value() const;

  std::string to_string() const;

  friend bool operator==(const ExtLocation& a, const ExtLocation& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtLocation& a, const ExtLocation& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

 private:
  explicit ExtLocation(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::Finite;
  Rational value_;
};

}  // namespace facloc
