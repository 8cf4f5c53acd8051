#include "facloc/analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace facloc {

namespace {

std::string profile_text(const std::vector<Rational>& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ",";
    out += x[i].to_string();
  }
  return out + ")";
}

// Output of Phantom(y) on the two-agent profile (0, t).
Rational phantom_on_pair(const std::vector<Rational>& y, const Rational& t) {
  const auto m = DeterministicMechanism::phantom({y[0], y[1], y[2]});
  return evaluate_unchecked(m, Domain::UnitInterval, std::vector<Rational>{Rational(0), t});
}

}  // namespace

std::vector<PhantomMarginal> rank_phantom_marginals(const RandomizedMechanism& m) {
  if (m.has_continuous_family()) throw std::invalid_argument("marginals need a finite mixture");
  const std::size_t n = m.n();
  const bool unit = m.domain() == Domain::UnitInterval;
  const ExtLocation low = unit ? ExtLocation(0) : ExtLocation::neg_infinity();
  const ExtLocation high = unit ? ExtLocation(1) : ExtLocation::pos_infinity();

  std::vector<PhantomMarginal> out;
  for (std::size_t i = 1; i < n; ++i) out.push_back({i, Rational(0), Rational(0)});
  for (const auto& c : m.components()) {
    if (!c.mechanism.is_phantom_representable())
      throw std::invalid_argument(c.mechanism.name() + " has no phantom form");
    const DeterministicMechanism form = to_phantom_form(c.mechanism, n, m.domain());
    const auto& y = form.as<PhantomRule>()->phantoms;
    for (const auto& v : y)
      if (v != low && v != high)
        throw std::invalid_argument(c.mechanism.name() + " has the interior phantom " + v.to_string());
    for (std::size_t i = 1; i < n; ++i) {
      if (y[i] == high) out[i - 1].high += c.weight;
      if (y[i] == low) out[i - 1].low += c.weight;
    }
  }
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Unique:
      return "unique";
    case SolveStatus::NonUnique:
      return "non_unique";
    case SolveStatus::Infeasible:
      return "infeasible";
  }
  return "?";
}

ConstraintSystem rank_weight_constraints(std::size_t n, const CheckDomain& dom) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  ConstraintSystem sys;
  for (std::size_t k = 1; k <= n; ++k) sys.add_variable("w" + std::to_string(k), Rational(0));
  {
    LinearConstraint total{std::vector<Rational>(n, Rational(1)), Relation::Equal, Rational(1), {"weights sum to 1"}};
    sys.add_constraint(std::move(total));
  }

  std::vector<DeterministicMechanism> ranks;
  for (std::size_t k = 1; k <= n; ++k) ranks.push_back(DeterministicMechanism::rank(k));

  const auto grid = dom.grid_points();
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      const Rational& alpha = grid[a];
      const Rational& beta = grid[b];
      const Rational width = beta - alpha;
      for (std::size_t at_beta = 1; at_beta < n; ++at_beta) {
        std::vector<Rational> x(n, alpha);
        std::fill(x.end() - static_cast<std::ptrdiff_t>(at_beta), x.end(), beta);
        std::vector<Rational> outputs;
        for (const auto& r : ranks) outputs.push_back(evaluate_unchecked(r, dom.domain, x));
        for (const Rational& where : {alpha, beta}) {
          const std::size_t size = where == alpha ? n - at_beta : at_beta;
          LinearConstraint row;
          for (const auto& f : outputs) row.coefficients.push_back(abs_diff(f, where) / width);
          row.relation = Relation::LessEqual;
          row.rhs = Rational(static_cast<std::int64_t>(n - size), static_cast<std::int64_t>(n));
          row.provenance.push_back("profile " + profile_text(x) + ", group at " + where.to_string());
          sys.add_constraint(std::move(row), true);
        }
      }
    }
  }
  return sys;
}

RankWeightsResult solve_rank_weights(const ConstraintSystem& system) {
  RankWeightsResult out;
  const LpResult feasible = solve_lp(system);
  if (feasible.status == LpStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
    out.certificate = feasible.certificate;
    return out;
  }
  out.weights = feasible.x;
  const std::size_t nv = system.variables().size();
  out.status = SolveStatus::Unique;
  for (std::size_t j = 0; j < nv; ++j) {
    std::vector<Rational> c(nv);
    c[j] = 1;
    const LpResult lo = solve_lp(system, c);
    c[j] = -1;
    const LpResult hi = solve_lp(system, c);
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
      throw std::logic_error("weight range unbounded despite the simplex constraint");
    out.min_weights.push_back(lo.x[j]);
    out.max_weights.push_back(hi.x[j]);
    if (lo.x[j] != hi.x[j]) out.status = SolveStatus::NonUnique;
  }
  return out;
}

RankWeightsResult solve_rank_weights(std::size_t n, const CheckDomain& dom) {
  return solve_rank_weights(rank_weight_constraints(n, dom));
}

Prop1Result prop1_infeasibility(std::span<const Rational> samples) {
  if (samples.empty()) throw std::invalid_argument("prop1 needs at least one sample");
  Prop1Result out;
  for (const auto& t : samples) {
    if (t <= Rational(0) || t > Rational(1))
      throw std::invalid_argument("sample " + t.to_string() + " outside (0,1]");
    out.forced.push_back({t, t / Rational(2)});
  }

  auto& sys = out.system;
  for (const char* name : {"y1", "y2", "y3"}) sys.add_variable(name, Rational(0), Rational(1));
  sys.add_constraint({{1, -1, 0}, Relation::LessEqual, 0, {"phantoms sorted: y1 <= y2"}});
  sys.add_constraint({{0, 1, -1}, Relation::LessEqual, 0, {"phantoms sorted: y2 <= y3"}});
  const std::size_t first_sample_row = sys.constraints().size();
  for (const auto& f : out.forced) {
    // t/2 is strictly inside (0, t), so the clamp of y2 to [0, t] hits it only at y2 = t/2.
    sys.add_constraint({{0, 1, 0},
                        Relation::Equal,
                        f.forced,
                        {"profile (0," + f.t.to_string() + ") forces " + f.forced.to_string()}});
  }

  const LpResult lp = solve_lp(sys);
  if (lp.status != LpStatus::Infeasible) {
    out.satisfying_phantoms = std::vector<Rational>{lp.x[1], lp.x[1], lp.x[1]};
    return out;
  }
  out.infeasible = true;
  out.certificate = lp.certificate;

  std::vector<std::size_t> support;
  for (std::size_t r = first_sample_row; r < sys.constraints().size(); ++r)
    if (!lp.certificate->constraint_multipliers[r].is_zero()) support.push_back(r - first_sample_row);
  if (support.size() >= 2) {
    auto a = out.forced[support[0]], b = out.forced[support[1]];
    if (b.t < a.t) std::swap(a, b);
    out.conflicting_pair = std::make_pair(a, b);
  }

  // Agent 2 at t_a, facing the forced output t_a/2, reports t_b and receives t_b/2.
  std::vector<ForcedOutcome> sorted = out.forced;
  std::sort(sorted.begin(), sorted.end(), [](const auto& p, const auto& q) { return p.t < q.t; });
  for (std::size_t i = 0; i < sorted.size() && !out.manipulation; ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const auto& a = sorted[i];
      const auto& b = sorted[j];
      const Rational truthful = a.forced;
      const Rational lied = abs_diff(a.t, b.forced);
      if (lied < truthful) {
        out.manipulation = Prop1Manipulation{{Rational(0), a.t}, 2, b.t, truthful, lied};
        break;
      }
    }
  }
  return out;
}

std::vector<std::vector<Rational>> phantom_grid_sweep(std::span<const ForcedOutcome> forced, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("grid denominator must be positive");
  std::vector<std::vector<Rational>> out;
  std::vector<Rational> y(3);
  for (std::int64_t a = 0; a <= m; ++a) {
    for (std::int64_t b = a; b <= m; ++b) {
      for (std::int64_t c = b; c <= m; ++c) {
        y = {Rational(a, m), Rational(b, m), Rational(c, m)};
        const bool ok = std::all_of(forced.begin(), forced.end(),
                                    [&](const ForcedOutcome& f) { return phantom_on_pair(y, f.t) == f.forced; });
        if (ok) out.push_back(y);
      }
    }
  }
  return out;
}

}  // namespace facloc
