#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facloc/execution.hpp"
#include "facloc/mechanism.hpp"

namespace facloc {

enum class NumericMode { Quadrature, MonteCarlo };

std::string to_string(NumericMode mode);

struct NumericOptions {
  NumericMode mode = NumericMode::Quadrature;
  double tolerance = 1e-9;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240611;
  Execution exec = Execution::Parallel;
};

/// Floating-point estimate, kept apart from the exact Rational results.
/// `error_bound` covers every entry: the quadrature error estimate, or three
/// standard errors for Monte Carlo.
struct NumericEstimate {
  double expected_location = 0;
  std::vector<double> expected_distance;
  double error_bound = 0;
  NumericMode mode = NumericMode::Quadrature;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  /// Unanimous profiles are pinned, so the answer is exact in any mode.
  bool exact = false;
};

/// Expected location and distances of `m` on `x` without the closed form:
/// 1-D adaptive Gauss-Legendre over the survival function of the facility,
/// or sampling the n-1 uniform phantoms. Finite components are added exactly.
NumericEstimate numeric_expectation_oracle(const RandomizedMechanism& m, const Profile& x,
                                           const NumericOptions& options = {});

enum class Comparison { Above, Below, Inconclusive };

std::string to_string(Comparison c);

/// Above iff estimate - error > bound, Below iff estimate + error < bound.
Comparison compare_with_bound(double estimate, double error, const Rational& bound);

}  // namespace facloc
