#include "doctest.h"

#include <cmath>

#include "facloc/analysis.hpp"
#include "facloc/axioms.hpp"
#include "facloc/catalog.hpp"
#include "facloc/lp.hpp"
#include "facloc/numeric.hpp"
#include "facloc/order_stats.hpp"
#include "oracles.hpp"

using namespace facloc;

namespace {

CheckDomain unit(std::size_t n, std::int64_t m) {
  CheckDomain d;
  d.n = n;
  d.grid = m;
  return d;
}

// Independent Farkas check: lambda^T A >= 0 componentwise (with sign rules per
// relation) and lambda^T b < 0 for the system written as rows <= / = / >=
// over variables shifted to their lower bounds.
bool farkas_by_hand(const ConstraintSystem& s, const FarkasCertificate& c) {
  const auto& rows = s.constraints();
  const auto& vars = s.variables();
  if (c.constraint_multipliers.size() != rows.size() || c.upper_multipliers.size() != vars.size()) return false;
  // Rewrite every row as a.x <= b with multiplier mu >= 0 (= rows: free sign).
  std::vector<Rational> g(vars.size(), Rational(0));
  Rational rhs = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Rational l = c.constraint_multipliers[r];
    const auto rel = rows[r].relation;
    if (rel == Relation::LessEqual && l < Rational(0)) return false;
    if (rel == Relation::GreaterEqual && l > Rational(0)) return false;
    for (std::size_t j = 0; j < vars.size(); ++j) g[j] += l * rows[r].coefficients[j];
    rhs += l * rows[r].rhs;
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const Rational u = c.upper_multipliers[j];
    if (u < Rational(0)) return false;
    if (!u.is_zero()) {
      if (!vars[j].upper) return false;
      g[j] += u;
      rhs += u * *vars[j].upper;
    }
  }
  // sum_j g_j x_j <= rhs must be impossible for x >= lower: need g >= 0 and g.lower > rhs.
  Rational least = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (g[j] < Rational(0)) return false;
    least += g[j] * vars[j].lower;
  }
  return least > rhs;
}

}  // namespace

TEST_CASE("uniform order statistic means") {
  CHECK(uniform_order_stat_mean({3, UniformOn01{}, 2}) == Rational(1, 2));
  CHECK(uniform_order_stat_mean({1, UniformOn01{}, 1}) == Rational(1, 2));
  CHECK(uniform_order_stat_mean({4, UniformOn01{}, 1}) == Rational(1, 5));
  CHECK_THROWS(uniform_order_stat_mean({3, UniformOn01{}, 0}));
  CHECK_THROWS(uniform_order_stat_mean({3, UniformOn01{}, 4}));
  CHECK_THROWS_AS(uniform_order_stat_mean({3, DiscreteAtoms{{{Rational(1), Rational(1)}}}, 1}), RequiresNumericOracle);
  // Beta(i, count+1-i) mean, integrated numerically from its density.
  for (std::size_t count = 1; count <= 9; ++count) {
    for (std::size_t i = 1; i <= count; ++i) {
      double mean = 0;
      const int steps = 20000;
      const double c = std::tgamma(count + 1.0) / (std::tgamma(double(i)) * std::tgamma(double(count + 1 - i)));
      for (int s = 0; s < steps; ++s) {
        const double t = (s + 0.5) / steps;
        mean += t * c * std::pow(t, double(i) - 1) * std::pow(1 - t, double(count - i)) / steps;
      }
      CHECK(uniform_order_stat_mean({count, UniformOn01{}, i}).to_double() == doctest::Approx(mean).epsilon(1e-6));
    }
  }
}

TEST_CASE("Monte Carlo order statistics") {
  const auto est = monte_carlo_order_stat_mean({4, UniformOn01{}, 1}, 1'000'000, 99);
  CHECK(std::abs(est.mean - 0.2) < 3 * est.standard_error);
  CHECK(est.samples == 1'000'000);
  const auto serial = monte_carlo_order_stat_mean({4, UniformOn01{}, 3}, 200'000, 5, Execution::Serial);
  const auto parallel = monte_carlo_order_stat_mean({4, UniformOn01{}, 3}, 200'000, 5, Execution::Parallel);
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.standard_error == parallel.standard_error);
  CHECK(batch_seed(1, 0) != batch_seed(1, 1));
  CHECK(batch_seed(1, 0) != batch_seed(2, 0));
  CHECK_THROWS_AS(monte_carlo_order_stat_mean({2, DiscreteAtoms{{{Rational(0), Rational(1)}}}, 1}, 1000, 3),
                  RequiresNumericOracle);
}

TEST_CASE("rank phantom marginals") {
  SUBCASE("random rank, three agents") {
    const auto m = rank_phantom_marginals(random_rank(3));
    REQUIRE(m.size() == 2);
    CHECK(m[0].high == Rational(1, 3));
    CHECK(m[1].high == Rational(2, 3));
    CHECK(m[0].low == Rational(2, 3));
  }
  SUBCASE("a single rank") {
    const RandomizedMechanism one("rank1", 2, Domain::UnitInterval,
                                  {{DeterministicMechanism::rank(1), Rational(1)}});
    const auto m = rank_phantom_marginals(one);
    REQUIRE(m.size() == 1);
    CHECK(m[0].high == Rational(1));
  }
  SUBCASE("telescoping and both domains up to eight agents") {
    for (std::size_t n = 2; n <= 8; ++n) {
      for (const Domain d : {Domain::UnitInterval, Domain::RealLine}) {
        const auto m = rank_phantom_marginals(random_rank(n, d));
        REQUIRE(m.size() == n - 1);
        const auto nn = static_cast<std::int64_t>(n);
        for (std::size_t i = 1; i < n; ++i) {
          CHECK(m[i - 1].index == i);
          CHECK(m[i - 1].high == Rational(static_cast<std::int64_t>(i), nn));
          CHECK(m[i - 1].high + m[i - 1].low == Rational(1));
          if (i + 1 < n) CHECK(m[i - 1].low - m[i].low == Rational(1, nn));
        }
      }
    }
  }
  CHECK_THROWS(rank_phantom_marginals(uniform_phantom_mechanism(3)));
  CHECK_THROWS(rank_phantom_marginals(random_dictator(3)));
}

TEST_CASE("exact LP") {
  SUBCASE("optimum") {
    ConstraintSystem s;
    s.add_variable("x");
    s.add_variable("y");
    s.add_constraint({{Rational(1), Rational(1)}, Relation::LessEqual, Rational(4), {"sum"}});
    s.add_constraint({{Rational(1), Rational(3)}, Relation::LessEqual, Rational(6), {"mix"}});
    const std::vector<Rational> obj{Rational(-1), Rational(-2)};
    const auto r = solve_lp(s, obj);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x == std::vector<Rational>{Rational(3), Rational(1)});
    CHECK(r.objective == Rational(-5));
  }
  SUBCASE("unbounded") {
    ConstraintSystem s;
    s.add_variable("x");
    const std::vector<Rational> obj{Rational(-1)};
    CHECK(solve_lp(s, obj).status == LpStatus::Unbounded);
  }
  SUBCASE("infeasible with a certificate") {
    ConstraintSystem s;
    s.add_variable("x", Rational(1, 2), Rational(1));
    s.add_variable("y");
    s.add_constraint({{Rational(1), Rational(1)}, Relation::Equal, Rational(1, 3), {"eq"}});
    const auto r = solve_lp(s);
    REQUIRE(r.status == LpStatus::Infeasible);
    REQUIRE(r.certificate);
    CHECK(verify_infeasibility(s, *r.certificate));
    CHECK(farkas_by_hand(s, *r.certificate));
  }
  SUBCASE("merging proportional rows") {
    ConstraintSystem s;
    s.add_variable("x");
    s.add_constraint({{Rational(1)}, Relation::LessEqual, Rational(1), {"a"}}, true);
    s.add_constraint({{Rational(3)}, Relation::LessEqual, Rational(3), {"b"}}, true);
    REQUIRE(s.constraints().size() == 1);
    CHECK(s.constraints()[0].provenance.size() == 2);
    CHECK(s.with_rhs(0, Rational(2)).constraints()[0].rhs == Rational(2));
  }
}

TEST_CASE("random small LPs: certificates and optima are consistent") {
  oracle::Gen g(77);
  std::size_t infeasible = 0;
  for (int it = 0; it < 300; ++it) {
    ConstraintSystem s;
    const std::size_t nv = static_cast<std::size_t>(g.integer(1, 3));
    for (std::size_t j = 0; j < nv; ++j) s.add_variable("v" + std::to_string(j), g.rational(-1, 1, 3), Rational(2));
    const std::size_t nr = static_cast<std::size_t>(g.integer(1, 4));
    for (std::size_t r = 0; r < nr; ++r) {
      LinearConstraint c;
      for (std::size_t j = 0; j < nv; ++j) c.coefficients.push_back(g.rational(-3, 3, 2));
      c.relation = static_cast<Relation>(g.integer(0, 2));
      c.rhs = g.rational(-3, 3, 3);
      c.provenance = {"row " + std::to_string(r)};
      s.add_constraint(c);
    }
    std::vector<Rational> obj;
    for (std::size_t j = 0; j < nv; ++j) obj.push_back(g.rational(-2, 2, 2));
    const auto res = solve_lp(s, obj);
    REQUIRE(res.status != LpStatus::Unbounded);
    if (res.status == LpStatus::Infeasible) {
      ++infeasible;
      REQUIRE(res.certificate);
      CHECK(farkas_by_hand(s, *res.certificate));
      continue;
    }
    // Feasibility of the returned point, checked row by row.
    for (std::size_t j = 0; j < nv; ++j) {
      CHECK(res.x[j] >= s.variables()[j].lower);
      CHECK(res.x[j] <= *s.variables()[j].upper);
    }
    for (const auto& c : s.constraints()) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < nv; ++j) lhs += c.coefficients[j] * res.x[j];
      if (c.relation == Relation::LessEqual) CHECK(lhs <= c.rhs);
      if (c.relation == Relation::Equal) CHECK(lhs == c.rhs);
      if (c.relation == Relation::GreaterEqual) CHECK(lhs >= c.rhs);
    }
    // No vertex of a coarse grid beats the reported optimum.
    Rational best = res.objective;
    std::vector<std::int64_t> k(nv, 0);
    while (true) {
      std::vector<Rational> x(nv);
      for (std::size_t j = 0; j < nv; ++j) x[j] = s.variables()[j].lower + Rational(k[j], 6);
      bool ok = true;
      for (std::size_t j = 0; j < nv; ++j) ok &= x[j] <= *s.variables()[j].upper;
      for (const auto& c : s.constraints()) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < nv; ++j) lhs += c.coefficients[j] * x[j];
        ok &= c.relation == Relation::LessEqual ? lhs <= c.rhs
              : c.relation == Relation::Equal  ? lhs == c.rhs
                                               : lhs >= c.rhs;
      }
      if (ok) {
        Rational v = 0;
        for (std::size_t j = 0; j < nv; ++j) v += obj[j] * x[j];
        CHECK(best <= v);
      }
      std::size_t pos = 0;
      while (pos < nv && ++k[pos] > 18) k[pos++] = 0;
      if (pos == nv) break;
    }
  }
  CHECK(infeasible > 10);
}

TEST_CASE("rank weights") {
  SUBCASE("two agents, against a hand-solved system") {
    // At (0,1) with one agent per side: the agent at 0 is at distance w1, the
    // agent at 1 at distance w2; both are capped at 1/2 and w1 + w2 = 1.
    const auto r = solve_rank_weights(2, unit(2, 6));
    REQUIRE(r.status == SolveStatus::Unique);
    CHECK(r.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  }
  SUBCASE("uniform and unique up to six agents") {
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto r = solve_rank_weights(n, unit(n, 6));
      REQUIRE(r.status == SolveStatus::Unique);
      CHECK(r.weights == std::vector<Rational>(n, Rational(1, static_cast<std::int64_t>(n))));
      CHECK(r.min_weights == r.weights);
      CHECK(r.max_weights == r.weights);
      std::vector<WeightedMechanism> comps;
      for (std::size_t k = 0; k < n; ++k) comps.push_back({DeterministicMechanism::rank(k + 1), r.weights[k]});
      const RandomizedMechanism back("solved", n, Domain::UnitInterval, comps);
      CHECK(check_strong_proportionality(back, Variant::InExpectation, unit(n, 6)).status == Status::Pass);
    }
  }
  SUBCASE("pinning a weight to zero is infeasible") {
    ConstraintSystem s = rank_weight_constraints(3, unit(3, 6));
    s.add_constraint({{Rational(1), Rational(0), Rational(0)}, Relation::Equal, Rational(0), {"w1 = 0"}});
    const auto r = solve_rank_weights(s);
    CHECK(r.status == SolveStatus::Infeasible);
    REQUIRE(r.certificate);
    CHECK(verify_infeasibility(s, *r.certificate));
    CHECK(farkas_by_hand(s, *r.certificate));
  }
  SUBCASE("every single-row perturbation breaks uniform uniqueness") {
    for (std::size_t n = 2; n <= 4; ++n) {
      const ConstraintSystem s = rank_weight_constraints(n, unit(n, 6));
      const std::vector<Rational> uniform(n, Rational(1, static_cast<std::int64_t>(n)));
      for (std::size_t row = 0; row < s.constraints().size(); ++row) {
        for (const Rational d : {Rational(1, 100), Rational(-1, 100)}) {
          const auto p = s.with_rhs(row, s.constraints()[row].rhs + d);
          const auto r = solve_rank_weights(p);
          CHECK((r.status != SolveStatus::Unique || r.weights != uniform));
          if (r.status == SolveStatus::Infeasible) CHECK(farkas_by_hand(p, *r.certificate));
        }
      }
    }
  }
}

TEST_CASE("two-agent impossibility") {
  SUBCASE("samples 1/2 and 1") {
    const std::vector<Rational> t{Rational(1, 2), Rational(1)};
    const auto r = prop1_infeasibility(t);
    REQUIRE(r.infeasible);
    CHECK(r.forced[0].forced == Rational(1, 4));
    CHECK(r.forced[1].forced == Rational(1, 2));
    REQUIRE(r.certificate);
    CHECK(verify_infeasibility(r.system, *r.certificate));
    CHECK(farkas_by_hand(r.system, *r.certificate));
    REQUIRE(r.manipulation);
    CHECK(r.manipulation->profile == std::vector<Rational>{Rational(0), Rational(1, 2)});
    CHECK(r.manipulation->to == Rational(1));
    CHECK(r.manipulation->misreport_cost < r.manipulation->truthful_cost);
    CHECK(phantom_grid_sweep(r.forced, 40).empty());
  }
  SUBCASE("samples 1/3 and 2/3") {
    const std::vector<Rational> t{Rational(1, 3), Rational(2, 3)};
    const auto r = prop1_infeasibility(t);
    CHECK(r.infeasible);
    CHECK(farkas_by_hand(r.system, *r.certificate));
    CHECK(phantom_grid_sweep(r.forced, 24).empty());
  }
  SUBCASE("one sample is satisfiable") {
    const std::vector<Rational> t{Rational(1, 2)};
    const auto r = prop1_infeasibility(t);
    CHECK_FALSE(r.infeasible);
    REQUIRE(r.satisfying_phantoms);
    CHECK(*r.satisfying_phantoms == std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 4)});
    const auto sweep = phantom_grid_sweep(r.forced, 8);
    CHECK_FALSE(sweep.empty());
    for (const auto& y : sweep)
      CHECK(oracle::phantom_median({y[0], y[1], y[2]}, {Rational(0), Rational(1, 2)}) == Rational(1, 4));
  }
  SUBCASE("sweep agrees with a brute-force median search") {
    const std::vector<ForcedOutcome> forced{{Rational(1, 2), Rational(1, 4)}, {Rational(1), Rational(1, 2)}};
    std::size_t hits = 0;
    const std::int64_t m = 12;
    for (std::int64_t a = 0; a <= m; ++a)
      for (std::int64_t b = a; b <= m; ++b)
        for (std::int64_t c = b; c <= m; ++c) {
          const std::vector<ExtLocation> y{Rational(a, m), Rational(b, m), Rational(c, m)};
          hits += oracle::phantom_median(y, {Rational(0), Rational(1, 2)}) == Rational(1, 4) &&
                  oracle::phantom_median(y, {Rational(0), Rational(1)}) == Rational(1, 2);
        }
    CHECK(hits == 0);
    CHECK(phantom_grid_sweep(forced, m).size() == hits);
  }
  CHECK_THROWS(prop1_infeasibility(std::vector<Rational>{}));
  CHECK_THROWS(prop1_infeasibility(std::vector<Rational>{Rational(0)}));
  CHECK_THROWS(prop1_infeasibility(std::vector<Rational>{Rational(3, 2)}));
}

TEST_CASE("numeric oracle") {
  const auto m = random_phantom(3);
  SUBCASE("agrees with the 2-D quadrature and the exact closed form") {
    oracle::Gen g(12);
    for (int it = 0; it < 15; ++it) {
      const auto x = g.unit_profile(3, 10);
      const auto est = numeric_expectation_oracle(m, Profile(Domain::UnitInterval, x));
      const auto ref = oracle::three_agent_uniform_family({x[0].to_double(), x[1].to_double(), x[2].to_double()});
      const auto exact = expected_distances(m, x);
      CHECK(std::abs(est.expected_location - ref.location) <= est.error_bound + 1e-12);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(est.expected_distance[i] - ref.cost[i]) <= est.error_bound + 1e-12);
        CHECK(std::abs(est.expected_distance[i] - exact[i].to_double()) <= est.error_bound + 1e-12);
      }
    }
  }
  SUBCASE("the (1/4,1/4,3/4) instance") {
    const Profile x(Domain::UnitInterval, {Rational(1, 4), Rational(1, 4), Rational(3, 4)});
    const auto quad = numeric_expectation_oracle(m, x);
    CHECK(compare_with_bound(quad.expected_distance[2], quad.error_bound, Rational(1, 3)) == Comparison::Above);
    CHECK(quad.expected_distance[2] - 1.0 / 3.0 > 1e-6);
    NumericOptions mc;
    mc.mode = NumericMode::MonteCarlo;
    const auto sample = numeric_expectation_oracle(m, x, mc);
    CHECK(compare_with_bound(sample.expected_distance[2], sample.error_bound, Rational(1, 3)) == Comparison::Above);
    CHECK(std::abs(sample.expected_distance[2] - quad.expected_distance[2]) <= sample.error_bound + quad.error_bound);
    CHECK(sample.seed == mc.seed);
    CHECK(sample.samples == mc.samples);
  }
  SUBCASE("two-valued profiles land on k/n") {
    for (std::size_t n = 2; n <= 5; ++n) {
      for (std::size_t k = 0; k <= n; ++k) {
        std::vector<Rational> x(n, Rational(0));
        std::fill(x.end() - static_cast<std::ptrdiff_t>(k), x.end(), Rational(1));
        const auto est = numeric_expectation_oracle(random_phantom(n), Profile(Domain::UnitInterval, x));
        CHECK(std::abs(est.expected_location - double(k) / double(n)) <= est.error_bound);
      }
    }
  }
  SUBCASE("unanimous profiles are exact in every mode") {
    NumericOptions mc;
    mc.mode = NumericMode::MonteCarlo;
    mc.samples = 1000;
    const Profile x(Domain::UnitInterval, {Rational(2, 3), Rational(2, 3), Rational(2, 3)});
    const auto est = numeric_expectation_oracle(m, x, mc);
    CHECK(est.exact);
    CHECK(est.expected_distance == std::vector<double>{0.0, 0.0, 0.0});
  }
  SUBCASE("Monte Carlo is reproducible and thread-count independent") {
    NumericOptions a;
    a.mode = NumericMode::MonteCarlo;
    a.samples = 100'000;
    a.exec = Execution::Serial;
    NumericOptions b = a;
    b.exec = Execution::Parallel;
    const Profile x(Domain::UnitInterval, {Rational(0), Rational(1, 3), Rational(1)});
    const auto s = numeric_expectation_oracle(m, x, a), p = numeric_expectation_oracle(m, x, b);
    CHECK(s.expected_location == p.expected_location);
    CHECK(s.expected_distance == p.expected_distance);
  }
  CHECK(compare_with_bound(0.5, 0.1, Rational(1, 2)) == Comparison::Inconclusive);
  CHECK(compare_with_bound(0.3, 0.1, Rational(1, 2)) == Comparison::Below);
}
