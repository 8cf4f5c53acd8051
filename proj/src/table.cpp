#include "facloc/table.hpp"

#include <cstdio>
#include <sstream>

#include "facloc/catalog.hpp"
#include "facloc/io.hpp"

namespace facloc {

namespace {

struct Column {
  const char* title;
  Axiom axiom;
  Variant variant;
};

constexpr Column kColumns[] = {
    {"Universal Truthfulness", Axiom::Strategyproofness, Variant::Universal},
    {"SP in Expectation", Axiom::Strategyproofness, Variant::InExpectation},
    {"Universal Anonymity", Axiom::Anonymity, Variant::Universal},
    {"Proportionality in Expectation", Axiom::Proportionality, Variant::InExpectation},
    {"Strong Proportionality in Expectation", Axiom::StrongProportionality, Variant::InExpectation},
};

bool is_proportionality_type(Axiom a) {
  return a == Axiom::Proportionality || a == Axiom::StrongProportionality || a == Axiom::SPF;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string numeric_note(const NumericCheck& c) {
  std::ostringstream out;
  out << "numeric oracle (" << to_string(c.estimate.mode) << "): " << format_double(c.margin)
      << " margin, error bound " << format_double(c.estimate.error_bound) << ", " << to_string(c.comparison);
  return out.str();
}

// Cell text plus footnotes, in row-major order.
struct Rendered {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> notes;
  bool starred = false;
};

Rendered render(const PropertyTable& t) {
  Rendered r;
  for (const auto& row : t.rows) {
    std::vector<std::string> line;
    for (const auto& cell : row.cells) {
      std::string text = cell.mark;
      r.starred |= text == "Yes*";
      if (cell.verdict.witness) {
        std::string note = row.label + ", " + to_string(cell.axiom) + "/" + to_string(cell.variant) + ": " +
                           describe(cell.verdict);
        if (cell.numeric) note += "; " + numeric_note(*cell.numeric);
        r.notes.push_back(note);
        text += " [" + std::to_string(r.notes.size()) + "]";
      } else if (!cell.verdict.note.empty() && cell.verdict.status != Status::Pass) {
        r.notes.push_back(row.label + ": " + cell.verdict.note);
        text += " [" + std::to_string(r.notes.size()) + "]";
      }
      line.push_back(text);
    }
    r.cells.push_back(std::move(line));
  }
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

PropertyTable build_property_table(const TableOptions& options) {
  PropertyTable t;
  t.options = options;
  for (const auto& c : kColumns) t.columns.push_back(c.title);

  const std::string p = options.p.to_string();
  const std::pair<std::string, std::string> mechanisms[] = {
      {"Random Rank", "random_rank"},
      {"Random Dictatorship", "random_dictator"},
      {"Random Phantom", "random_phantom"},
      {"AverageOrRandomRank-" + p, "avg_or_rr:p=" + p},
      {"Median", "median"},
      {"Uniform Phantom", "uniform_phantom"},
  };

  CheckDomain dom;
  dom.n = options.n;
  dom.grid = options.grid;
  dom.exec = options.exec;

  for (const auto& [label, text] : mechanisms) {
    const MechanismSpec spec = MechanismSpec::parse(text, options.n, Domain::UnitInterval);
    const RandomizedMechanism m = spec.build();
    TableRow row{label, spec.to_string(), {}};
    for (const auto& col : kColumns) {
      TableCell cell{col.axiom, col.variant, check(col.axiom, m, col.variant, dom), std::nullopt, ""};
      switch (cell.verdict.status) {
        case Status::Pass:
          cell.mark = (spec.name == "avg_or_rr" && col.axiom == Axiom::Strategyproofness &&
                       col.variant == Variant::InExpectation)
                          ? "Yes*"
                          : "Yes";
          break;
        case Status::Fail:
          cell.mark = "No";
          break;
        case Status::Inconclusive:
          cell.mark = "?";
          break;
      }
      const auto& w = cell.verdict.witness;
      if (m.has_continuous_family() && cell.verdict.status == Status::Fail && w && w->agent &&
          is_proportionality_type(col.axiom)) {
        const NumericEstimate est =
            numeric_expectation_oracle(m, Profile(m.domain(), w->profile), options.numeric);
        const double value = est.expected_distance[*w->agent - 1];
        cell.numeric = NumericCheck{est, value - w->bound.to_double(),
                                    compare_with_bound(value, est.error_bound, w->bound)};
      }
      row.cells.push_back(std::move(cell));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_markdown(const PropertyTable& t) {
  const Rendered r = render(t);
  std::ostringstream out;
  out << "| Mechanism |";
  for (const auto& c : t.columns) out << " " << c << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << "---|";
  out << "\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out << "| " << t.rows[i].label << " |";
    for (const auto& c : r.cells[i]) out << " " << c << " |";
    out << "\n";
  }
  out << "\nn = " << t.options.n << ", grid 1/" << t.options.grid << "\n";
  if (r.starred) out << "\n\\* strategyproof in expectation only for p <= 1/2\n";
  if (!r.notes.empty()) out << "\n";
  for (std::size_t i = 0; i < r.notes.size(); ++i) out << "[" << i + 1 << "] " << r.notes[i] << "\n";
  return out.str();
}

std::string render_csv(const PropertyTable& t) {
  std::ostringstream out;
  out << "mechanism,spec";
  for (const auto& c : t.columns) out << "," << csv_field(c);
  out << "\n";
  for (const auto& row : t.rows) {
    out << csv_field(row.label) << "," << csv_field(row.spec);
    for (const auto& cell : row.cells) out << "," << cell.mark;
    out << "\n";
  }
  return out.str();
}

nlohmann::json to_json(const PropertyTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      const auto& cell = row.cells[i];
      nlohmann::json c = {{"column", t.columns[i]}, {"mark", cell.mark}, {"verdict", to_json(cell.verdict)}};
      if (cell.numeric) {
        c["numeric"] = to_json(cell.numeric->estimate);
        c["numeric"]["margin"] = cell.numeric->margin;
        c["numeric"]["comparison"] = to_string(cell.numeric->comparison);
      }
      cells.push_back(c);
    }
    rows.push_back({{"mechanism", row.label}, {"spec", row.spec}, {"cells", cells}});
  }
  return {{"n", t.options.n}, {"grid", t.options.grid}, {"p", t.options.p.to_string()}, {"rows", rows}};
}

}  // namespace facloc
