#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "facloc/axioms.hpp"
#include "facloc/lp.hpp"
#include "facloc/mechanism.hpp"

namespace facloc {

/// Marginals of the i-th smallest interior phantom under a mixture of
/// two-valued phantom mechanisms. `high` is the mass at 1 (+inf on the real
/// line), `low` the mass at 0 (-inf).
struct PhantomMarginal {
  std::size_t index;  // 1..n-1
  Rational high;
  Rational low;
};

/// Throws std::invalid_argument if a component has no phantom form, has a
/// phantom strictly inside the domain, or the mechanism has a continuous family.
std::vector<PhantomMarginal> rank_phantom_marginals(const RandomizedMechanism& m);

enum class SolveStatus { Unique, NonUnique, Infeasible };

std::string to_string(SolveStatus s);

struct RankWeightsResult {
  SolveStatus status = SolveStatus::Infeasible;
  /// A feasible point (the solution when Unique).
  std::vector<Rational> weights;
  /// Per-weight minimum and maximum over the feasible set.
  std::vector<Rational> min_weights;
  std::vector<Rational> max_weights;
  std::optional<FarkasCertificate> certificate;
};

/// Unknown weights w_1..w_n of RankK(1..n), w >= 0, sum 1, plus one row per
/// (two-valued profile, group) requiring that group's expected distance to be
/// at most (n-|S|)/n (beta-alpha). Coefficients come from evaluating each RankK
/// on the profile; rows are scaled by 1/(beta-alpha) and parallel rows merged.
/// Profiles are (alpha,...,alpha,beta,...,beta) over grid pairs alpha < beta.
ConstraintSystem rank_weight_constraints(std::size_t n, const CheckDomain& dom);

RankWeightsResult solve_rank_weights(const ConstraintSystem& system);
RankWeightsResult solve_rank_weights(std::size_t n, const CheckDomain& dom);

/// The two-agent profile (0, t) and the output t/2 that strong
/// proportionality forces on it.
struct ForcedOutcome {
  Rational t;
  Rational forced;
};

struct Prop1Manipulation {
  std::vector<Rational> profile;
  std::size_t agent;  // 1-based
  Rational to;
  Rational truthful_cost;
  Rational misreport_cost;
};

struct Prop1Result {
  bool infeasible = false;
  std::vector<ForcedOutcome> forced;
  /// Variables y1 <= y2 <= y3 in [0,1]; rows from the forced outputs.
  ConstraintSystem system;
  std::optional<FarkasCertificate> certificate;
  /// Two samples whose forced outputs conflict, read off the certificate.
  std::optional<std::pair<ForcedOutcome, ForcedOutcome>> conflicting_pair;
  /// Any mechanism producing the smaller forced output is manipulable by the
  /// agent at t (reporting the larger t) when the larger t lies in (t, 3t).
  std::optional<Prop1Manipulation> manipulation;
  /// A phantom vector meeting every forced output, when one exists.
  std::optional<std::vector<Rational>> satisfying_phantoms;
};

/// Deterministic anonymous strategyproof mechanisms for n = 2 are
/// Phantom(y1, y2, y3). On (0, t) such a mechanism outputs the clamp of y2 to
/// [0, t], so forcing the interior output t/2 pins y2 = t/2. Samples must lie
/// in (0, 1]; throws std::invalid_argument on an empty sample list.
Prop1Result prop1_infeasibility(std::span<const Rational> samples);

/// Every sorted phantom triple on {0, 1/m, ..., 1} whose evaluation on each
/// (0, t) equals the forced output.
std::vector<std::vector<Rational>> phantom_grid_sweep(std::span<const ForcedOutcome> forced, std::int64_t m);

}  // namespace facloc
