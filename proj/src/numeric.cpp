#include "facloc/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "facloc/order_stats.hpp"

namespace facloc {

namespace {

constexpr double kRoundingFloor = 1e-12;

// Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 4> kNodes4 = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                           0.8611363115940526};
constexpr std::array<double, 4> kWeights4 = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                             0.3478548451374538};
constexpr std::array<double, 8> kNodes8 = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights8 = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                             0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                             0.2223810344533745, 0.1012285362903763};

struct Integral {
  double value = 0;
  double error = 0;
};

template <class F, std::size_t K>
double gauss(const F& f, double a, double b, const std::array<double, K>& nodes, const std::array<double, K>& weights) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (std::size_t i = 0; i < K; ++i) s += weights[i] * f(mid + half * nodes[i]);
  return s * half;
}

template <class F>
Integral adaptive(const F& f, double a, double b, double tol, int depth = 0) {
  const double g4 = gauss(f, a, b, kNodes4, kWeights4);
  const double g8 = gauss(f, a, b, kNodes8, kWeights8);
  const double err = std::abs(g8 - g4);
  if (err <= tol * (b - a) || depth >= 30) return {g8, err};
  const double m = 0.5 * (a + b);
  const Integral l = adaptive(f, a, m, tol, depth + 1);
  const Integral r = adaptive(f, m, b, tol, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

// P(F > t) for the facility F = median(x, 0, 1, U_1..U_{n-1}), 0 <= t < 1:
// F > t iff at most n of the 2n+1 values are <= t, i.e. the uniform draws
// below t number at most n - 1 - #{x_j <= t}.
double survival(const std::vector<double>& x, double t) {
  const auto n = static_cast<int>(x.size());
  const int at_most = n - 1 - static_cast<int>(std::count_if(x.begin(), x.end(), [&](double v) { return v <= t; }));
  if (at_most < 0) return 0.0;
  double sum = 0, coef = 1;
  for (int b = 0; b <= std::min(at_most, n - 1); ++b) {
    if (b > 0) coef = coef * (n - b) / b;
    sum += coef * std::pow(t, b) * std::pow(1 - t, n - 1 - b);
  }
  return sum;
}

// Integral of the survival function over [lo, hi], split at the reports.
Integral survival_integral(const std::vector<double>& x, double lo, double hi, double tol) {
  std::vector<double> cuts{lo, hi};
  for (double v : x)
    if (v > lo && v < hi) cuts.push_back(v);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Integral total;
  auto f = [&](double t) { return survival(x, t); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Integral piece = adaptive(f, cuts[i], cuts[i + 1], tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

struct MonteCarloSums {
  std::vector<double> sum;
  std::vector<double> sumsq;
};

}  // namespace

std::string to_string(NumericMode mode) { return mode == NumericMode::Quadrature ? "quadrature" : "monte_carlo"; }

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::Above:
      return "above";
    case Comparison::Below:
      return "below";
    case Comparison::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

NumericEstimate numeric_expectation_oracle(const RandomizedMechanism& m, const Profile& x,
                                           const NumericOptions& options) {
  if (x.size() != m.n()) throw std::invalid_argument("profile size does not match the mechanism");
  if (x.domain() != m.domain()) throw std::invalid_argument("profile and mechanism domains differ");
  const std::size_t n = x.size();

  NumericEstimate out;
  out.mode = options.mode;
  out.expected_distance.assign(n, 0.0);
  for (const auto& c : m.components()) {
    const double w = c.weight.to_double();
    const Rational f = evaluate_unchecked(c.mechanism, m.domain(), x.locations());
    out.expected_location += w * f.to_double();
    for (std::size_t i = 0; i < n; ++i) out.expected_distance[i] += w * abs_diff(f, x[i]).to_double();
  }
  const auto& fam = m.continuous_family();
  if (!fam || x.is_unanimous()) {
    if (fam) out.expected_location += fam->weight.to_double() * x[0].to_double();
    out.exact = true;
    return out;
  }

  const double w = fam->weight.to_double();
  std::vector<double> xs;
  for (const auto& v : x.locations()) xs.push_back(v.to_double());

  if (options.mode == NumericMode::Quadrature) {
    const Integral whole = survival_integral(xs, 0.0, 1.0, options.tolerance);
    out.expected_location += w * whole.value;
    double worst = whole.error;
    for (std::size_t i = 0; i < n; ++i) {
      const Integral above = survival_integral(xs, xs[i], 1.0, options.tolerance);
      const Integral below = survival_integral(xs, 0.0, xs[i], options.tolerance);
      out.expected_distance[i] += w * (above.value + xs[i] - below.value);
      worst = std::max(worst, above.error + below.error);
    }
    out.error_bound = w * worst + kRoundingFloor;
    return out;
  }

  if (options.samples < 2) throw std::invalid_argument("need at least two samples");
  constexpr std::uint64_t kBatch = 1u << 15;
  const std::uint64_t batches = (options.samples + kBatch - 1) / kBatch;
  const std::size_t q = n + 1;  // location, then one distance per agent
  std::vector<MonteCarloSums> parts(batches, {std::vector<double>(q, 0.0), std::vector<double>(q, 0.0)});

  auto run_batch = [&](std::uint64_t b) {
    std::mt19937_64 rng(batch_seed(options.seed, b));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> values(2 * n + 1);
    auto& part = parts[b];
    const std::uint64_t end = std::min(options.samples, (b + 1) * kBatch);
    for (std::uint64_t k = b * kBatch; k < end; ++k) {
      std::copy(xs.begin(), xs.end(), values.begin());
      values[n] = 0.0;
      values[n + 1] = 1.0;
      for (std::size_t j = n + 2; j < values.size(); ++j) values[j] = unif(rng);
      std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n), values.end());
      const double f = values[n];
      part.sum[0] += f;
      part.sumsq[0] += f * f;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(xs[i] - f);
        part.sum[i + 1] += d;
        part.sumsq[i + 1] += d * d;
      }
    }
  };

  if (options.exec == Execution::Parallel) {
    const auto nb = static_cast<std::int64_t>(batches);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) run_batch(static_cast<std::uint64_t>(b));
  } else {
    for (std::uint64_t b = 0; b < batches; ++b) run_batch(b);
  }

  const double count = static_cast<double>(options.samples);
  double worst_se = 0;
  std::vector<double> mean(q);
  for (std::size_t k = 0; k < q; ++k) {
    double s = 0, s2 = 0;
    for (const auto& part : parts) {
      s += part.sum[k];
      s2 += part.sumsq[k];
    }
    mean[k] = s / count;
    const double var = std::max(0.0, (s2 - count * mean[k] * mean[k]) / (count - 1));
    worst_se = std::max(worst_se, std::sqrt(var / count));
  }
  out.expected_location += w * mean[0];
  for (std::size_t i = 0; i < n; ++i) out.expected_distance[i] += w * mean[i + 1];
  out.error_bound = w * 3 * worst_se + kRoundingFloor;
  out.samples = options.samples;
  out.seed = options.seed;
  return out;
}

Comparison compare_with_bound(double estimate, double error, const Rational& bound) {
  const double b = bound.to_double();
  if (estimate - error > b) return Comparison::Above;
  if (estimate + error < b) return Comparison::Below;
  return Comparison::Inconclusive;
}

}  // namespace facloc
