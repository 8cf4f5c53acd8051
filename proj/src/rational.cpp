#include "facloc/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <ostream>

namespace facloc {

namespace {

using u128 = unsigned __int128;

u128 magnitude(__int128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kMin = std::numeric_limits<std::int64_t>::min();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses an optionally signed run of digits into a wide integer.
__int128 parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  __int128 value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
    if (value > kMax * 10) throw OverflowError("rational literal too large: " + std::string(whole));
  }
  return negative ? -value : value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 1 && num <= kMax && num >= kMin) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    return r;
  }
  if (den == 0) throw std::domain_error("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den <= kMax && num <= kMax && num >= -kMax) {
    const auto n64 = static_cast<std::int64_t>(num);
    const auto d64 = static_cast<std::int64_t>(den);
    const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(n64 < 0 ? -n64 : n64), static_cast<std::uint64_t>(d64));
    Rational r;
    r.num_ = g > 1 ? n64 / static_cast<std::int64_t>(g) : n64;
    r.den_ = g > 1 ? d64 / static_cast<std::int64_t>(g) : d64;
    if (r.num_ == 0) r.den_ = 1;
    return r;
  }
  u128 g = gcd128(magnitude(num), u128(den));
  if (g > 1) {
    num /= static_cast<__int128>(g);
    den /= static_cast<__int128>(g);
  }
  if (num > kMax || num < kMin || den > kMax) throw OverflowError("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  if (r.num_ == 0) r.den_ = 1;
  return r;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    __int128 n = parse_integer(trim(s.substr(0, slash)), text);
    __int128 d = parse_integer(trim(s.substr(slash + 1)), text);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return from_wide(n, d);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if (frac.size() > 18) throw OverflowError("too many decimal places in '" + std::string(text) + "'");
    __int128 whole = int_part.empty() ? 0 : parse_integer(int_part, text);
    __int128 scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    __int128 f = frac.empty() ? 0 : parse_integer(frac, text);
    if (frac.find_first_of("+-") != std::string_view::npos)
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    __int128 n = whole * scale + f;
    return from_wide(negative ? -n : n, scale);
  }
  return from_wide(parse_integer(s, text), 1);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational& Rational::operator+=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    *this = from_wide(static_cast<__int128>(num_) + rhs.num_, den_);
  } else {
    *this = from_wide(static_cast<__int128>(num_) * rhs.den_ + static_cast<__int128>(rhs.num_) * den_,
                      static_cast<__int128>(den_) * rhs.den_);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (den_ == rhs.den_) {
    *this = from_wide(static_cast<__int128>(num_) - rhs.num_, den_);
  } else {
    *this = from_wide(static_cast<__int128>(num_) * rhs.den_ - static_cast<__int128>(rhs.num_) * den_,
                      static_cast<__int128>(den_) * rhs.den_);
  }
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  *this = from_wide(static_cast<__int128>(num_) * rhs.num_, static_cast<__int128>(den_) * rhs.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("division by zero");
  *this = from_wide(static_cast<__int128>(num_) * rhs.den_, static_cast<__int128>(den_) * rhs.num_);
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(Rational base, unsigned exponent) {
  Rational result = 1;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace facloc
