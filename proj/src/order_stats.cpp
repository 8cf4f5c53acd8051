#include "facloc/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace facloc {

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Monomial coefficients of P(Bin(trials, 1-t) >= j) in t.
std::vector<std::int64_t> tail_polynomial(std::int64_t trials, std::int64_t j) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(trials + 1), 0);
  for (std::int64_t b = std::max<std::int64_t>(j, 0); b <= trials; ++b) {
    // C(T,b) (1-t)^b t^(T-b)
    const std::int64_t outer = binomial(trials, b);
    for (std::int64_t u = 0; u <= b; ++u) {
      const std::int64_t term = outer * binomial(b, u) * ((u % 2) ? -1 : 1);
      c[static_cast<std::size_t>(trials - b + u)] += term;
    }
  }
  return c;
}

// Antiderivative (vanishing at 0) of the polynomial `c`, evaluated at t.
Rational antiderivative_at(const std::vector<std::int64_t>& c, const Rational& t) {
  Rational acc = 0;
  for (std::size_t d = c.size(); d-- > 0;) {
    acc = acc * t + Rational(c[d], static_cast<std::int64_t>(d + 1));
  }
  return acc * t;
}

}  // namespace

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

Rational uniform_order_stat_mean(const OrderStatSpec& spec) {
  if (!std::holds_alternative<UniformOn01>(spec.distribution))
    throw RequiresNumericOracle("order-statistic closed form only covers the uniform law");
  if (spec.index < 1 || spec.index > spec.count) throw std::invalid_argument("order-statistic index out of range");
  return Rational(static_cast<std::int64_t>(spec.index), static_cast<std::int64_t>(spec.count + 1));
}

MonteCarloEstimate monte_carlo_order_stat_mean(const OrderStatSpec& spec, std::uint64_t samples, std::uint64_t seed,
                                               Execution exec) {
  if (!std::holds_alternative<UniformOn01>(spec.distribution))
    throw RequiresNumericOracle("sampling oracle implemented for the uniform law");
  if (spec.index < 1 || spec.index > spec.count) throw std::invalid_argument("order-statistic index out of range");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  constexpr std::uint64_t kBatch = 1u << 15;
  const std::uint64_t batches = (samples + kBatch - 1) / kBatch;
  std::vector<double> sums(batches, 0.0), sumsq(batches, 0.0);

  auto run_batch = [&](std::uint64_t b) {
    std::mt19937_64 rng(batch_seed(seed, b));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> draws(spec.count);
    const std::uint64_t begin = b * kBatch;
    const std::uint64_t end = std::min(samples, begin + kBatch);
    double s = 0, s2 = 0;
    for (std::uint64_t k = begin; k < end; ++k) {
      for (auto& d : draws) d = unif(rng);
      auto nth = draws.begin() + static_cast<std::ptrdiff_t>(spec.index - 1);
      std::nth_element(draws.begin(), nth, draws.end());
      s += *nth;
      s2 += *nth * *nth;
    }
    sums[b] = s;
    sumsq[b] = s2;
  };

  if (exec == Execution::Parallel) {
    const auto nb = static_cast<std::int64_t>(batches);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) run_batch(static_cast<std::uint64_t>(b));
  } else {
    for (std::uint64_t b = 0; b < batches; ++b) run_batch(b);
  }

  double s = 0, s2 = 0;
  for (std::uint64_t b = 0; b < batches; ++b) {
    s += sums[b];
    s2 += sumsq[b];
  }
  const double n = static_cast<double>(samples);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1));
  return {mean, std::sqrt(var / n), samples, seed};
}

Rational uniform_family_survival_integral(std::span<const Rational> x, const Rational& lo, const Rational& hi) {
  if (lo < Rational(0) || hi > Rational(1) || hi < lo) throw std::invalid_argument("integration bounds outside [0,1]");
  const auto n = static_cast<std::int64_t>(x.size());
  const std::int64_t trials = n - 1;

  std::vector<Rational> cuts{lo};
  for (const auto& v : x)
    if (v > lo && v < hi) cuts.push_back(v);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::vector<std::int64_t>> polys(static_cast<std::size_t>(n + 1));
  Rational total = 0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const Rational& p = cuts[s];
    const Rational& q = cuts[s + 1];
    const auto above = std::count_if(x.begin(), x.end(), [&](const Rational& v) { return v > p; });
    const std::int64_t j = n - above;
    if (j <= 0) {
      total += q - p;
    } else if (j <= trials) {
      auto& poly = polys[static_cast<std::size_t>(j)];
      if (poly.empty()) poly = tail_polynomial(trials, j);
      total += antiderivative_at(poly, q) - antiderivative_at(poly, p);
    }
  }
  return total;
}

Rational uniform_family_expected_location(std::span<const Rational> x) {
  return uniform_family_survival_integral(x, 0, 1);
}

Rational uniform_family_expected_distance(std::span<const Rational> x, const Rational& point) {
  if (point < Rational(0) || point > Rational(1)) throw std::invalid_argument("point outside [0,1]");
  // E|F - c| = int_c^1 P(F>t) dt + int_0^c P(F<=t) dt
  return uniform_family_survival_integral(x, point, 1) + point - uniform_family_survival_integral(x, 0, point);
}

double binomial_tail(std::size_t trials, double q, std::ptrdiff_t at_least) {
  if (at_least <= 0) return 1.0;
  if (at_least > static_cast<std::ptrdiff_t>(trials)) return 0.0;
  double sum = 0;
  for (auto b = static_cast<std::size_t>(at_least); b <= trials; ++b)
    sum += static_cast<double>(binomial(static_cast<std::int64_t>(trials), static_cast<std::int64_t>(b))) *
           std::pow(q, static_cast<double>(b)) * std::pow(1 - q, static_cast<double>(trials - b));
  return sum;
}

}  // namespace facloc
