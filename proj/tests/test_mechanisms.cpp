#include "doctest.h"

#include "facloc/catalog.hpp"
#include "facloc/order_stats.hpp"
#include "oracles.hpp"

using namespace facloc;

namespace {

Rational weight_sum(const RandomizedMechanism& m) {
  Rational s = m.has_continuous_family() ? m.continuous_family()->weight : Rational(0);
  for (const auto& c : m.components()) s += c.weight;
  return s;
}

std::vector<Rational> q(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* s : xs) out.push_back(Rational::parse(s));
  return out;
}

}  // namespace

TEST_CASE("random rank on a three-agent profile") {
  const auto m = random_rank(3);
  REQUIRE(m.components().size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(m.components()[k].weight == Rational(1, 3));
    CHECK(m.components()[k].mechanism == DeterministicMechanism::rank(k + 1));
  }
  const Profile x(Domain::UnitInterval, q({"0", "0", "1/3"}));
  const auto d = outcome_distribution(m, x);
  CHECK(d == OutcomeDistribution({{Rational(0), Rational(2, 3)}, {Rational(1, 3), Rational(1, 3)}}));
  CHECK(d.expected_location() == Rational(1, 9));
  CHECK(expected_location(m, x.locations()) == oracle::expected_location(m, q({"0", "0", "1/3"})));
}

TEST_CASE("random rank on the real line") {
  const auto m = random_rank(2, Domain::RealLine);
  const auto d = outcome_distribution(m, Profile(Domain::RealLine, q({"-5", "7"})));
  CHECK(d == OutcomeDistribution({{Rational(-5), Rational(1, 2)}, {Rational(7), Rational(1, 2)}}));
}

TEST_CASE("random rank atoms are the reports weighted by multiplicity") {
  oracle::Gen g(21);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 7));
    const auto x = g.unit_profile(n, 4);
    const auto d = outcome_distribution(random_rank(n), Profile(Domain::UnitInterval, x));
    for (const auto& a : d.atoms()) {
      const auto mult = std::count(x.begin(), x.end(), a.x);
      CHECK(a.p == Rational(mult, static_cast<std::int64_t>(n)));
    }
  }
}

TEST_CASE("random dictator has the random rank outcome law but other components") {
  const auto rr = random_rank(3), rd = random_dictator(3);
  CHECK(rd.components()[0].mechanism == DeterministicMechanism::dictator(1));
  oracle::for_each_grid_profile(3, 4, [&](const std::vector<Rational>& x) {
    const Profile p(Domain::UnitInterval, x);
    CHECK(outcome_distribution(rr, p) == outcome_distribution(rd, p));
  });
}

TEST_CASE("average or random rank") {
  SUBCASE("p = 0 is random rank") {
    const auto m = average_or_random_rank(Rational(0), 4);
    CHECK(m.components() == random_rank(4).components());
  }
  SUBCASE("p = 1/2 halves the rank probabilities") {
    const auto d = outcome_distribution(average_or_random_rank(Rational(1, 2), 3),
                                        Profile(Domain::UnitInterval, q({"0", "0", "1/3"})));
    CHECK(d == OutcomeDistribution({{Rational(0), Rational(1, 3)},
                                    {Rational(1, 9), Rational(1, 2)},
                                    {Rational(1, 3), Rational(1, 6)}}));
  }
  SUBCASE("p = 3/5 rewards a misreport at (2/5, 1)") {
    const auto m = average_or_random_rank(Rational(3, 5), 2);
    const auto truthful = q({"2/5", "1"});
    const auto lie = q({"3/10", "1"});
    const Rational truthful_cost = expected_distance(m, truthful, Rational(2, 5));
    const Rational lie_cost = expected_distance(m, lie, Rational(2, 5));
    CHECK(truthful_cost == Rational(3, 10));
    CHECK(lie_cost == Rational(29, 100));
    CHECK(truthful_cost == oracle::expected_cost(m, truthful, Rational(2, 5)));
    CHECK(lie_cost == oracle::expected_cost(m, lie, Rational(2, 5)));
  }
  CHECK_THROWS(average_or_random_rank(Rational(3, 2), 3));
  CHECK_THROWS(average_or_random_rank(Rational(-1, 2), 3));
}

TEST_CASE("average or random rank splits two-valued profiles in proportion") {
  for (const Rational p : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 5), Rational(1)}) {
    for (std::size_t n = 2; n <= 5; ++n) {
      const auto m = average_or_random_rank(p, n);
      for (std::size_t s = 1; s < n; ++s) {
        const Rational a(1, 5), b(4, 5);
        std::vector<Rational> x(n, b);
        std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(s), a);
        const auto nn = static_cast<std::int64_t>(n), ss = static_cast<std::int64_t>(s);
        CHECK(expected_distance(m, x, a) == Rational(nn - ss, nn) * (b - a));
        CHECK(expected_distance(m, x, b) == Rational(ss, nn) * (b - a));
      }
    }
  }
}

TEST_CASE("every constructor yields weights summing to one") {
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(weight_sum(random_rank(n)) == Rational(1));
    CHECK(weight_sum(random_rank(n, Domain::RealLine)) == Rational(1));
    CHECK(weight_sum(random_dictator(n)) == Rational(1));
    CHECK(weight_sum(average_or_random_rank(Rational(2, 7), n)) == Rational(1));
    CHECK(weight_sum(random_phantom(n)) == Rational(1));
    CHECK(weight_sum(median_mechanism(n)) == Rational(1));
    CHECK(weight_sum(uniform_phantom_mechanism(n)) == Rational(1));
    for (const auto& c : average_or_random_rank(Rational(2, 7), n).components())
      CHECK_NOTHROW(validate(c.mechanism, n, Domain::UnitInterval));
  }
  CHECK_THROWS(random_rank(1));
}

TEST_CASE("random phantom") {
  const auto m = random_phantom(3);
  CHECK(m.has_continuous_family());
  CHECK(m.continuous_family()->spec.is_uniform());
  const Profile u(Domain::UnitInterval, q({"2/5", "2/5", "2/5"}));
  CHECK(outcome_distribution(m, u) == OutcomeDistribution::point(Rational(2, 5)));
  CHECK_THROWS_AS(outcome_distribution(m, Profile(Domain::UnitInterval, q({"0", "1/2", "1"}))),
                  RequiresNumericOracle);
  // With k agents at 1 the expected facility sits at k/n.
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      std::vector<Rational> x(n, Rational(0));
      std::fill(x.end() - static_cast<std::ptrdiff_t>(k), x.end(), Rational(1));
      CHECK(expected_location(random_phantom(n), x) ==
            Rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n)));
    }
  }
}

TEST_CASE("uniform phantom family closed form agrees with a 2-D quadrature") {
  oracle::Gen g(33);
  const auto m = random_phantom(3);
  for (int it = 0; it < 40; ++it) {
    const auto x = g.unit_profile(3, 12);
    std::vector<double> xd;
    for (const auto& v : x) xd.push_back(v.to_double());
    const auto ref = oracle::three_agent_uniform_family(xd);
    CHECK(expected_location(m, x).to_double() == doctest::Approx(ref.location).epsilon(1e-11));
    const auto dist = expected_distances(m, x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(dist[i].to_double() == doctest::Approx(ref.cost[i]).epsilon(1e-10));
  }
}

TEST_CASE("iid phantom expansion") {
  SUBCASE("point mass") {
    const auto m = iid_phantom(IIDPhantomSpec{DiscreteAtoms{{{Rational(1, 2), Rational(1)}}}}, 2);
    REQUIRE(m.components().size() == 1);
    CHECK(m.components()[0].weight == Rational(1));
    CHECK(m.components()[0].mechanism == DeterministicMechanism::phantom({Rational(0), Rational(1, 2), Rational(1)}));
  }
  SUBCASE("fair coin over two interior draws merges into three multisets") {
    const auto m =
        iid_phantom(IIDPhantomSpec{DiscreteAtoms{{{Rational(0), Rational(1, 2)}, {Rational(1), Rational(1, 2)}}}}, 3);
    REQUIRE(m.components().size() == 3);
    std::map<std::vector<ExtLocation>, Rational> seen;
    for (const auto& c : m.components()) seen[c.mechanism.as<PhantomRule>()->phantoms] = c.weight;
    using V = std::vector<ExtLocation>;
    CHECK(seen[V{Rational(0), Rational(0), Rational(0), Rational(1)}] == Rational(1, 4));
    CHECK(seen[V{Rational(0), Rational(0), Rational(1), Rational(1)}] == Rational(1, 2));
    CHECK(seen[V{Rational(0), Rational(1), Rational(1), Rational(1)}] == Rational(1, 4));
  }
  SUBCASE("uniform law keeps the continuous family") {
    const auto m = iid_phantom(IIDPhantomSpec{UniformOn01{}}, 4);
    CHECK(m.has_continuous_family());
    for (std::size_t i = 1; i <= 3; ++i)
      CHECK(uniform_order_stat_mean({3, UniformOn01{}, i}) == Rational(static_cast<std::int64_t>(i), 4));
  }
  SUBCASE("component cap") {
    std::vector<std::pair<Rational, Rational>> atoms;
    for (int j = 0; j < 10; ++j) atoms.emplace_back(Rational(j, 9), Rational(1, 10));
    CHECK_THROWS_AS(iid_phantom(IIDPhantomSpec{DiscreteAtoms{atoms}}, 8, 100), ExpansionTooLarge);
  }
  CHECK_THROWS(iid_phantom(IIDPhantomSpec{DiscreteAtoms{{{Rational(1, 2), Rational(1, 2)}}}}, 3));
}

TEST_CASE("discrete iid expansion matches brute-force draw enumeration") {
  // Every ordered draw sequence, sorted into a phantom vector, weighted by the product of its probabilities.
  const std::vector<std::pair<Rational, Rational>> law = {
      {Rational(0), Rational(1, 6)}, {Rational(1, 3), Rational(1, 2)}, {Rational(3, 4), Rational(1, 3)}};
  const std::size_t n = 4;
  const auto m = iid_phantom(IIDPhantomSpec{DiscreteAtoms{law}}, n);
  oracle::Gen g(4);
  for (int it = 0; it < 50; ++it) {
    const auto x = g.unit_profile(n, 8);
    Rational expected = 0;
    std::vector<std::size_t> pick(n - 1, 0);
    while (true) {
      std::vector<ExtLocation> ph{Rational(0), Rational(1)};
      Rational w = 1;
      for (auto j : pick) {
        ph.emplace_back(law[j].first);
        w *= law[j].second;
      }
      expected += w * oracle::phantom_median(ph, x);
      std::size_t pos = 0;
      while (pos < pick.size() && ++pick[pos] == law.size()) pick[pos++] = 0;
      if (pos == pick.size()) break;
    }
    CHECK(expected_location(m, x) == expected);
  }
}

TEST_CASE("mechanism spec strings round-trip") {
  for (const char* text : {"random_rank", "random_dictator", "avg_or_rr:p=1/2", "median", "uniform_phantom",
                           "phantom:[0,1/2,1]", "random_phantom", "iid_phantom:{atoms:[[\"1/2\",\"1\"]]}",
                           "rank:k=2", "dictator:i=1", "average"}) {
    CAPTURE(text);
    const auto spec = MechanismSpec::parse(text, 2, Domain::UnitInterval);
    CHECK(MechanismSpec::parse(spec.to_string(), 2, Domain::UnitInterval) == spec);
    CHECK_NOTHROW(spec.build());
  }
  CHECK_THROWS(MechanismSpec::parse("avg_or_rr:p=2", 3, Domain::UnitInterval).build());
  CHECK_THROWS(MechanismSpec::parse("dictator:i=4", 3, Domain::UnitInterval).build());
  CHECK_THROWS(MechanismSpec::parse("phantom:[1,0,1]", 2, Domain::UnitInterval).build());
  CHECK_THROWS(MechanismSpec::parse("random_phantom", 3, Domain::RealLine).build());
  CHECK_THROWS(MechanismSpec::parse("nonsense", 3, Domain::UnitInterval));
}

TEST_CASE("catalog expectations agree with the component oracle") {
  oracle::Gen g(8);
  for (std::size_t n = 2; n <= 5; ++n) {
    const RandomizedMechanism ms[] = {random_rank(n), random_dictator(n), average_or_random_rank(Rational(1, 3), n),
                                      median_mechanism(n), uniform_phantom_mechanism(n)};
    for (const auto& m : ms) {
      for (int it = 0; it < 40; ++it) {
        const auto x = g.unit_profile(n, 9);
        CHECK(expected_location(m, x) == oracle::expected_location(m, x));
        const auto d = expected_distances(m, x);
        for (std::size_t i = 0; i < n; ++i) CHECK(d[i] == oracle::expected_cost(m, x, x[i]));
      }
    }
  }
}
