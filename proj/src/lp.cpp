#include "facloc/lp.hpp"

#include <stdexcept>

namespace facloc {

namespace {

// Row divided by the magnitude of its first non-zero coefficient.
struct NormalizedRow {
  std::vector<Rational> a;
  Relation rel;
  Rational b;
};

NormalizedRow normalize(const LinearConstraint& c) {
  Rational scale = 1;
  for (const auto& v : c.coefficients)
    if (!v.is_zero()) {
      scale = abs(v);
      break;
    }
  NormalizedRow out{{}, c.relation, c.rhs / scale};
  out.a.reserve(c.coefficients.size());
  for (const auto& v : c.coefficients) out.a.push_back(v / scale);
  return out;
}

bool same_row(const NormalizedRow& x, const NormalizedRow& y) { return x.rel == y.rel && x.b == y.b && x.a == y.a; }

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), t_(rows, std::vector<Rational>(cols + 1)), d_(cols + 1), basis_(rows) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r][cols_]; }
  Rational& cost(std::size_t c) { return d_[c]; }
  Rational& cost_rhs() { return d_[cols_]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    auto eliminate = [&](std::vector<Rational>& row) {
      const Rational f = row[c];
      if (f.is_zero()) return;
      for (std::size_t k = 0; k <= cols_; ++k)
        if (!t_[r][k].is_zero()) row[k] -= f * t_[r][k];
    };
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (i != r) eliminate(t_[i]);
    eliminate(d_);
    basis_[r] = c;
  }

  void erase_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  /// Bland's rule over columns with allowed[c]. Returns false if unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c)
        if (allowed[c] && d_[c].sign() < 0) {
          enter = c;
          break;
        }
      if (enter == cols_) return true;
      std::size_t leave = t_.size();
      Rational best;
      for (std::size_t r = 0; r < t_.size(); ++r) {
        if (t_[r][enter].sign() <= 0) continue;
        const Rational ratio = t_[r][cols_] / t_[r][enter];
        if (leave == t_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> d_;
  std::vector<std::size_t> basis_;
};

struct RowOrigin {
  bool upper;         // variable upper bound row
  std::size_t index;  // constraint or variable index
  int sign;           // +1, or -1 when a >= row was negated
};

}  // namespace

std::string to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual:
      return "<=";
    case Relation::Equal:
      return "=";
    case Relation::GreaterEqual:
      return ">=";
  }
  return "?";
}

std::size_t ConstraintSystem::add_variable(std::string name, Rational lower, std::optional<Rational> upper) {
  if (upper && *upper < lower) throw std::invalid_argument("variable " + name + " has upper < lower");
  variables_.push_back({std::move(name), lower, upper});
  for (auto& c : constraints_) c.coefficients.resize(variables_.size());
  return variables_.size() - 1;
}

std::size_t ConstraintSystem::add_constraint(LinearConstraint c, bool merge) {
  if (c.coefficients.size() > variables_.size())
    throw std::invalid_argument("constraint has more coefficients than variables");
  c.coefficients.resize(variables_.size());
  if (merge) {
    const NormalizedRow norm = normalize(c);
    for (std::size_t r = 0; r < constraints_.size(); ++r) {
      if (same_row(norm, normalize(constraints_[r]))) {
        auto& prov = constraints_[r].provenance;
        prov.insert(prov.end(), c.provenance.begin(), c.provenance.end());
        return r;
      }
    }
  }
  constraints_.push_back(std::move(c));
  return constraints_.size() - 1;
}

ConstraintSystem ConstraintSystem::with_rhs(std::size_t row, const Rational& rhs) const {
  ConstraintSystem out = *this;
  out.constraints_.at(row).rhs = rhs;
  return out;
}

bool verify_infeasibility(const ConstraintSystem& system, const FarkasCertificate& cert) {
  const auto& vars = system.variables();
  const auto& rows = system.constraints();
  if (cert.constraint_multipliers.size() != rows.size() || cert.upper_multipliers.size() != vars.size()) return false;

  std::vector<Rational> g(vars.size());
  Rational rhs = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Rational& l = cert.constraint_multipliers[r];
    if (rows[r].relation == Relation::LessEqual && l.sign() < 0) return false;
    if (rows[r].relation == Relation::GreaterEqual && l.sign() > 0) return false;
    if (l.is_zero()) continue;
    for (std::size_t j = 0; j < vars.size(); ++j) g[j] += l * rows[r].coefficients[j];
    rhs += l * rows[r].rhs;
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const Rational& mu = cert.upper_multipliers[j];
    if (mu.sign() < 0 || (!mu.is_zero() && !vars[j].upper)) return false;
    if (mu.is_zero()) continue;
    g[j] += mu;
    rhs += mu * *vars[j].upper;
  }
  Rational lhs = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (g[j].sign() < 0) return false;
    lhs += g[j] * vars[j].lower;
  }
  return lhs > rhs;
}

LpResult solve_lp(const ConstraintSystem& system, std::span<const Rational> objective) {
  const auto& vars = system.variables();
  const auto& cons = system.constraints();
  const std::size_t nv = vars.size();
  if (!objective.empty() && objective.size() != nv) throw std::invalid_argument("objective length != variable count");

  // Shift x = lower + x' and bring every row to  a x' (<= | =) b.
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<bool> is_le;
  std::vector<RowOrigin> origin;
  for (std::size_t c = 0; c < cons.size(); ++c) {
    const int s = cons[c].relation == Relation::GreaterEqual ? -1 : 1;
    Rational shifted = cons[c].rhs;
    std::vector<Rational> row(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      shifted -= cons[c].coefficients[j] * vars[j].lower;
      row[j] = s < 0 ? -cons[c].coefficients[j] : cons[c].coefficients[j];
    }
    a.push_back(std::move(row));
    b.push_back(s < 0 ? -shifted : shifted);
    is_le.push_back(cons[c].relation != Relation::Equal);
    origin.push_back({false, c, s});
  }
  for (std::size_t j = 0; j < nv; ++j) {
    if (!vars[j].upper) continue;
    std::vector<Rational> row(nv);
    row[j] = 1;
    a.push_back(std::move(row));
    b.push_back(*vars[j].upper - vars[j].lower);
    is_le.push_back(true);
    origin.push_back({true, j, 1});
  }

  const std::size_t m = a.size();
  std::vector<std::size_t> slack_col(m, 0);
  std::size_t cols = nv;
  for (std::size_t r = 0; r < m; ++r)
    if (is_le[r]) slack_col[r] = cols++;
  const std::size_t first_art = cols;
  cols += m;

  Tableau t(m, cols);
  std::vector<int> flip(m, 1);
  for (std::size_t r = 0; r < m; ++r) {
    flip[r] = b[r].sign() < 0 ? -1 : 1;
    const Rational f = flip[r];
    for (std::size_t j = 0; j < nv; ++j) t.at(r, j) = f * a[r][j];
    if (is_le[r]) t.at(r, slack_col[r]) = f;
    t.at(r, first_art + r) = 1;
    t.rhs(r) = f * b[r];
    t.basis(r) = first_art + r;
  }
  // Phase 1: minimize the sum of artificials.
  for (std::size_t c = 0; c < cols; ++c) {
    if (c >= first_art) continue;
    Rational s = 0;
    for (std::size_t r = 0; r < m; ++r) s += t.at(r, c);
    t.cost(c) = -s;
  }
  {
    Rational s = 0;
    for (std::size_t r = 0; r < m; ++r) s += t.rhs(r);
    t.cost_rhs() = -s;
  }
  std::vector<bool> allowed(cols, true);
  t.optimize(allowed);

  LpResult result;
  if ((-t.cost_rhs()).sign() > 0) {
    FarkasCertificate cert{std::vector<Rational>(cons.size()), std::vector<Rational>(nv)};
    for (std::size_t r = 0; r < m; ++r) {
      const Rational y = Rational(1) - t.cost(first_art + r);
      const Rational lambda = -(y * Rational(flip[r]));
      if (origin[r].upper)
        cert.upper_multipliers[origin[r].index] = lambda;
      else
        cert.constraint_multipliers[origin[r].index] = origin[r].sign < 0 ? -lambda : lambda;
    }
    result.status = LpStatus::Infeasible;
    result.certificate = std::move(cert);
    return result;
  }

  // Drive artificials out of the basis; rows where that fails are redundant.
  for (std::size_t r = t.rows(); r-- > 0;) {
    if (t.basis(r) < first_art) continue;
    std::size_t enter = first_art;
    for (std::size_t c = 0; c < first_art; ++c)
      if (!t.at(r, c).is_zero()) {
        enter = c;
        break;
      }
    if (enter < first_art)
      t.pivot(r, enter);
    else
      t.erase_row(r);
  }
  for (std::size_t c = first_art; c < cols; ++c) allowed[c] = false;

  auto cost_of = [&](std::size_t c) { return (!objective.empty() && c < nv) ? objective[c] : Rational(0); };
  for (std::size_t c = 0; c <= cols; ++c) {
    Rational d = c < cols ? cost_of(c) : Rational(0);
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const Rational cb = cost_of(t.basis(r));
      if (!cb.is_zero()) d -= cb * (c < cols ? t.at(r, c) : t.rhs(r));
    }
    if (c < cols)
      t.cost(c) = d;
    else
      t.cost_rhs() = d;
  }
  if (!t.optimize(allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(nv, Rational(0));
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (t.basis(r) < nv) result.x[t.basis(r)] = t.rhs(r);
  for (std::size_t j = 0; j < nv; ++j) {
    result.x[j] += vars[j].lower;
    if (!objective.empty()) result.objective += objective[j] * result.x[j];
  }
  return result;
}

}  // namespace facloc
