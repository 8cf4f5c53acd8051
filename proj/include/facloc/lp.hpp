#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facloc/rational.hpp"

namespace facloc {

enum class Relation { LessEqual, Equal, GreaterEqual };

std::string to_string(Relation r);

struct LinearConstraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  /// Human-readable origin of the row, one entry per generating instance.
  std::vector<std::string> provenance;
};

struct Variable {
  std::string name;
  Rational lower = 0;
  std::optional<Rational> upper;
};

/// Small dense system of exact linear constraints over bounded variables.
class ConstraintSystem {
 public:
  std::size_t add_variable(std::string name, Rational lower = 0, std::optional<Rational> upper = std::nullopt);

  /// Appends `c` (coefficients padded with zeros to the variable count) and
  /// returns its row. With `merge`, a positive multiple of an existing row is
  /// not added again; its provenance is appended to that row instead.
  std::size_t add_constraint(LinearConstraint c, bool merge = false);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  /// Copy with row `row`'s right-hand side replaced.
  ConstraintSystem with_rhs(std::size_t row, const Rational& rhs) const;

 private:
  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
};

/// Farkas multipliers proving a system empty. `constraint_multipliers[r]` is
/// >= 0 on <= rows, <= 0 on >= rows and free on = rows; `upper_multipliers[j]`
/// is >= 0 and zero for variables without an upper bound. With
/// g = sum_r lambda_r a_r + mu, infeasibility follows from g >= 0 and
/// g . lower > sum_r lambda_r b_r + sum_j mu_j upper_j.
struct FarkasCertificate {
  std::vector<Rational> constraint_multipliers;
  std::vector<Rational> upper_multipliers;
};

/// Checks the certificate against the system with exact arithmetic only.
bool verify_infeasibility(const ConstraintSystem& system, const FarkasCertificate& cert);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;
  Rational objective;
  std::optional<FarkasCertificate> certificate;
};

/// Exact two-phase simplex with Bland's rule. Minimizes objective . x; an
/// empty objective asks for any feasible point.
LpResult solve_lp(const ConstraintSystem& system, std::span<const Rational> objective = {});

}  // namespace facloc
