#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>

#include "facloc/execution.hpp"
#include "facloc/mechanism.hpp"
#include "facloc/rational.hpp"

namespace facloc {

/// The `index`-th smallest of `count` I.I.D. draws from `distribution`.
struct OrderStatSpec {
  std::size_t count;
  std::variant<UniformOn01, DiscreteAtoms> distribution;
  std::size_t index;
};

/// E[U_(i)] for `count` uniforms on [0,1]: i / (count + 1). With count = n-1
/// phantoms this is i/n. Throws RequiresNumericOracle for other laws.
Rational uniform_order_stat_mean(const OrderStatSpec& spec);

struct MonteCarloEstimate {
  double mean;
  double standard_error;
  std::uint64_t samples;
  std::uint64_t seed;
};

/// Seed for batch `batch` of a sampling run; mixes both inputs through std::seed_seq.
std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch);

/// Sampling oracle for the mean of a uniform order statistic. Batches are
/// seeded from (seed, batch index), so the result does not depend on the
/// thread count. Throws RequiresNumericOracle for other laws.
MonteCarloEstimate monte_carlo_order_stat_mean(const OrderStatSpec& spec, std::uint64_t samples, std::uint64_t seed,
                                               Execution exec = Execution::Parallel);

// Closed forms for the phantom mechanism with extreme phantoms 0, 1 and
// n-1 interior phantoms drawn I.I.D. uniform on [0,1], on any profile in
// [0,1]^n. With F the facility location,
//   P(F > t) = P(Bin(n-1, 1-t) >= n - #{j : x_j > t}),
// a polynomial in t between consecutive reports, integrated exactly.

/// Integral of P(F > t) over [lo, hi], 0 <= lo <= hi <= 1.
Rational uniform_family_survival_integral(std::span<const Rational> x, const Rational& lo, const Rational& hi);
Rational uniform_family_expected_location(std::span<const Rational> x);
Rational uniform_family_expected_distance(std::span<const Rational> x, const Rational& point);

/// P(Bin(trials, q) >= at_least) in floating point; shared with the numeric oracle.
double binomial_tail(std::size_t trials, double q, std::ptrdiff_t at_least);

}  // namespace facloc
