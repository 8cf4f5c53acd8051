#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "facloc/axioms.hpp"
#include "facloc/numeric.hpp"

namespace facloc {

struct TableOptions {
  std::size_t n = 3;
  std::int64_t grid = 6;
  Rational p{1, 2};
  Execution exec = Execution::Parallel;
  NumericOptions numeric;
};

/// Numeric second opinion on an exact failing cell of a mechanism with a
/// continuous phantom family.
struct NumericCheck {
  NumericEstimate estimate;
  double margin;  // estimate minus bound
  Comparison comparison;
};

struct TableCell {
  Axiom axiom;
  Variant variant;
  AxiomVerdict verdict;
  std::optional<NumericCheck> numeric;
  /// "Yes", "Yes*", "No" or "?".
  std::string mark;
};

struct TableRow {
  std::string label;
  std::string spec;  // MechanismSpec text
  std::vector<TableCell> cells;
};

struct PropertyTable {
  TableOptions options;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
};

/// Random Rank, Random Dictatorship, Random Phantom, AverageOrRandomRank-p,
/// Median and Uniform Phantom against universal truthfulness, strategyproofness
/// in expectation, universal anonymity, and (strong) proportionality in
/// expectation.
PropertyTable build_property_table(const TableOptions& options);

std::string render_markdown(const PropertyTable& t);
std::string render_csv(const PropertyTable& t);
nlohmann::json to_json(const PropertyTable& t);

}  // namespace facloc
