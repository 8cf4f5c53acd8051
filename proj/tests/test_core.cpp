#include "doctest.h"

#include <limits>
#include <sstream>

#include "facloc/location.hpp"
#include "facloc/mechanism.hpp"
#include "facloc/outcome.hpp"
#include "facloc/profile.hpp"
#include "facloc/rational.hpp"
#include "oracles.hpp"

using namespace facloc;

TEST_CASE("rational arithmetic stays in lowest terms") {
  const Rational a(6, -8);
  CHECK(a.num() == -3);
  CHECK(a.den() == 4);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(2, 3) / Rational(-4, 9) == Rational(-3, 2));
  CHECK(abs_diff(Rational(1, 4), Rational(3, 4)) == Rational(1, 2));
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(5), 0) == Rational(1));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(0).to_string() == "0");
  CHECK(Rational(-7, 21).to_string() == "-1/3");
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3/12") == Rational(1, 4));
  CHECK(Rational::parse("  -7 ") == Rational(-7));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-1.5") == Rational(-3, 2));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse(""));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational overflow is an error, never a wrap") {
  const Rational big(std::numeric_limits<std::int64_t>::max());
  CHECK_THROWS_AS(big + Rational(1), OverflowError);
  CHECK_THROWS_AS(big * Rational(2), OverflowError);
  CHECK_THROWS_AS(Rational(1, std::numeric_limits<std::int64_t>::max()) * Rational(1, 3), OverflowError);
  // Large intermediates that reduce back into range are fine.
  const Rational r(std::numeric_limits<std::int64_t>::max(), 3);
  CHECK(r * Rational(3, std::numeric_limits<std::int64_t>::max()) == Rational(1));
}

TEST_CASE("rational field laws on random values") {
  oracle::Gen g(11);
  for (int it = 0; it < 2000; ++it) {
    const Rational a = g.rational(-5, 5, 40), b = g.rational(-5, 5, 40), c = g.rational(-5, 5, 40);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(std::gcd(a.num(), a.den()) == 1);
    CHECK(a.den() > 0);
    // Ordering agrees with cross multiplication done independently.
    CHECK((a < b) == (static_cast<long double>(a.num()) * b.den() < static_cast<long double>(b.num()) * a.den()));
  }
}

TEST_CASE("extended locations order like the extended line") {
  const auto lo = ExtLocation::neg_infinity(), hi = ExtLocation::pos_infinity();
  CHECK(lo < ExtLocation(Rational(-1000)));
  CHECK(ExtLocation(Rational(1000)) < hi);
  CHECK(lo < hi);
  CHECK(hi == ExtLocation::pos_infinity());
  CHECK(ExtLocation::parse("-inf") == lo);
  CHECK(ExtLocation::parse("+inf") == hi);
  CHECK(ExtLocation::parse("2/4") == ExtLocation(Rational(1, 2)));
  CHECK_THROWS(hi.value());
  CHECK(ExtLocation(Rational(3)).value() == Rational(3));
}

TEST_CASE("profiles enforce their domain") {
  CHECK_THROWS(Profile(Domain::UnitInterval, {Rational(0)}));
  CHECK_THROWS(Profile(Domain::UnitInterval, {Rational(0), Rational(3, 2)}));
  CHECK_NOTHROW(Profile(Domain::RealLine, {Rational(-5), Rational(7)}));
  const Profile x(Domain::UnitInterval, {Rational(0), Rational(1, 2), Rational(1)});
  CHECK(x.with_report(1, Rational(1, 4))[1] == Rational(1, 4));
  CHECK(x.swapped(0, 2)[0] == Rational(1));
  CHECK(x.mean() == Rational(1, 2));
  CHECK(x.range() == Rational(1));
  CHECK_FALSE(x.is_unanimous());
  CHECK(parse_domain("real") == Domain::RealLine);
  CHECK(parse_domain("unit_interval") == Domain::UnitInterval);
  CHECK_THROWS(parse_domain("plane"));
}

TEST_CASE("outcome distributions merge atoms and sum to one") {
  const OutcomeDistribution d({{Rational(1, 3), Rational(1, 4)}, {Rational(0), Rational(1, 2)},
                               {Rational(1, 3), Rational(1, 4)}, {Rational(1), Rational(0)}});
  REQUIRE(d.atoms().size() == 2);
  CHECK(d.atoms()[0] == Atom{Rational(0), Rational(1, 2)});
  CHECK(d.atoms()[1] == Atom{Rational(1, 3), Rational(1, 2)});
  CHECK(d.probability_at(Rational(1)) == Rational(0));
  CHECK_THROWS(OutcomeDistribution({{Rational(0), Rational(1, 2)}}));
  CHECK_THROWS(OutcomeDistribution({{Rational(0), Rational(3, 2)}, {Rational(1), Rational(-1, 2)}}));
}

TEST_CASE("expected distance examples") {
  const OutcomeDistribution d({{Rational(0), Rational(2, 3)}, {Rational(1, 3), Rational(1, 3)}});
  CHECK(d.expected_distance(Rational(0)) == Rational(1, 9));
  CHECK(d.expected_location() == Rational(1, 9));
  CHECK(OutcomeDistribution::point(Rational(2, 7)).expected_distance(Rational(2, 7)) == Rational(0));
  const OutcomeDistribution coin({{Rational(0), Rational(1, 2)}, {Rational(1), Rational(1, 2)}});
  // 1/2 * 1/4 + 1/2 * 3/4, summed directly.
  CHECK(coin.expected_distance(Rational(1, 4)) == Rational(1, 2) * Rational(1, 4) + Rational(1, 2) * Rational(3, 4));
}

TEST_CASE("deterministic evaluation examples") {
  const Profile x(Domain::UnitInterval, {Rational(0), Rational(0), Rational(1)});
  CHECK(evaluate(DeterministicMechanism::median(), x) == Rational(0));
  const Profile y(Domain::UnitInterval, {Rational(0), Rational(0), Rational(1, 3)});
  CHECK(evaluate(DeterministicMechanism::rank(1), y) == Rational(1, 3));
  CHECK(evaluate(DeterministicMechanism::rank(3), y) == Rational(0));
  const Profile z(Domain::UnitInterval, {Rational(0), Rational(1)});
  const auto ph = DeterministicMechanism::phantom({Rational(0), Rational(1, 2), Rational(1)});
  CHECK(evaluate(ph, z) == oracle::phantom_median({Rational(0), Rational(1, 2), Rational(1)}, {Rational(0), Rational(1)}));
  CHECK(evaluate(ph, z) == Rational(1, 2));
  CHECK(evaluate(DeterministicMechanism::dictator(2), y) == Rational(0));
  CHECK(evaluate(DeterministicMechanism::average(), y) == Rational(1, 9));
}

TEST_CASE("mechanism validation") {
  CHECK_THROWS(DeterministicMechanism::phantom({Rational(1), Rational(0), Rational(1)}));
  const Profile x(Domain::UnitInterval, {Rational(0), Rational(1)});
  CHECK_THROWS(evaluate(DeterministicMechanism::phantom({Rational(0), Rational(1)}), x));
  CHECK_THROWS(evaluate(DeterministicMechanism::rank(3), x));
  CHECK_THROWS(evaluate(DeterministicMechanism::dictator(0), x));
  CHECK_THROWS(evaluate(DeterministicMechanism::phantom({ExtLocation::neg_infinity(), Rational(0), Rational(1)}), x));
  CHECK_THROWS(to_phantom_form(DeterministicMechanism::dictator(1), 3, Domain::UnitInterval));
  CHECK_THROWS(to_phantom_form(DeterministicMechanism::average(), 3, Domain::UnitInterval));
}

TEST_CASE("phantom forms of the named rules") {
  SUBCASE("uniform phantom for two agents") {
    const auto p = to_phantom_form(DeterministicMechanism::uniform_phantom(), 2, Domain::UnitInterval);
    CHECK(p.as<PhantomRule>()->phantoms ==
          std::vector<ExtLocation>{Rational(0), Rational(1, 2), Rational(1)});
  }
  SUBCASE("rank 1 on the real line selects the maximum") {
    const auto p = to_phantom_form(DeterministicMechanism::rank(1), 2, Domain::RealLine);
    CHECK(p.as<PhantomRule>()->phantoms ==
          std::vector<ExtLocation>{ExtLocation::neg_infinity(), ExtLocation::pos_infinity(), ExtLocation::pos_infinity()});
    CHECK(evaluate(p, Profile(Domain::RealLine, {Rational(-5), Rational(7)})) == Rational(7));
  }
  SUBCASE("rank 2 of 3 agrees with direct selection on a 5-point grid") {
    const auto p = to_phantom_form(DeterministicMechanism::rank(2), 3, Domain::UnitInterval);
    oracle::for_each_grid_profile(3, 4, [&](const std::vector<Rational>& x) {
      CHECK(evaluate(p, Profile(Domain::UnitInterval, x)) == oracle::kth_largest(x, 2));
    });
  }
  CHECK(median_rank(2) == 2);
  CHECK(median_rank(3) == 2);
  CHECK(median_rank(4) == 3);
}

TEST_CASE("phantom form matches direct rank selection on random profiles") {
  oracle::Gen g(7);
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const Domain dom : {Domain::UnitInterval, Domain::RealLine}) {
      for (int it = 0; it < 150; ++it) {
        const auto x = dom == Domain::UnitInterval ? g.unit_profile(n, 12) : g.real_profile(n, 10, 12);
        const Profile p(dom, x);
        for (std::size_t k = 1; k <= n; ++k) {
          const auto form = to_phantom_form(DeterministicMechanism::rank(k), n, dom);
          CHECK(evaluate(form, p) == oracle::kth_largest(x, k));
        }
        CHECK(evaluate(to_phantom_form(DeterministicMechanism::median(), n, dom), p) == oracle::lower_median(x));
        if (dom == Domain::UnitInterval)
          CHECK(evaluate(to_phantom_form(DeterministicMechanism::uniform_phantom(), n, dom), p) ==
                oracle::evaluate(DeterministicMechanism::uniform_phantom(), x));
      }
    }
  }
}

TEST_CASE("phantom mechanisms are monotone in each report") {
  oracle::Gen g(3);
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 4));
    const auto m = DeterministicMechanism::phantom(g.unit_phantoms(n, 6));
    const auto x = g.unit_profile(n, 6);
    for (std::size_t i = 0; i < n; ++i) {
      Rational prev = -1;
      for (std::int64_t j = 0; j <= 24; ++j) {
        const Rational f = evaluate(m, Profile(Domain::UnitInterval, x).with_report(i, Rational(j, 24)));
        CHECK(prev <= f);
        prev = f;
      }
    }
  }
}

TEST_CASE("efficient phantom forms stay inside the report range") {
  oracle::Gen g(5);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 6));
    std::vector<Rational> ph = g.unit_profile(n - 1, 8);
    ph.push_back(Rational(0));
    ph.push_back(Rational(1));
    std::sort(ph.begin(), ph.end());
    const auto m = DeterministicMechanism::phantom({ph.begin(), ph.end()});
    const Profile x(Domain::UnitInterval, g.unit_profile(n, 8));
    const Rational f = evaluate(m, x);
    CHECK(x.min() <= f);
    CHECK(f <= x.max());
  }
}

TEST_CASE("rank mixtures on the real line never output infinities") {
  oracle::Gen g(9);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 5));
    const auto x = g.real_profile(n, 10, 5);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto form = to_phantom_form(DeterministicMechanism::rank(k), n, Domain::RealLine);
      CHECK_NOTHROW(evaluate(form, Profile(Domain::RealLine, x)));
    }
  }
}

TEST_CASE("printing") {
  std::ostringstream s;
  s << Rational(-2, 6) << " " << ExtLocation::pos_infinity().to_string();
  CHECK(s.str() == "-1/3 +inf");
  CHECK(Profile(Domain::UnitInterval, {Rational(0), Rational(1, 3)}).to_string() == "(0,1/3)");
  CHECK(DeterministicMechanism::rank(2).name() == "rank:k=2");
}
