#include "mmrkit/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string_view>

#include "mmrkit/errors.hpp"
#include "mmrkit/parallel.hpp"

namespace mmrkit {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

struct RawField {
  std::string_view text;
  int column;  // 1-based character position of the field start
};

std::vector<RawField> split_csv(std::string_view line) {
  std::vector<RawField> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t len = comma == std::string_view::npos ? line.size() - start
                                                            : comma - start;
    fields.push_back({line.substr(start, len), static_cast<int>(start) + 1});
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return fields;
}

double parse_number(const RawField& field, int line_no, std::string_view name) {
  std::string_view t = trim(field.text);
  if (!t.empty() && t.front() == '+') {
    t.remove_prefix(1);
  }
  double value = 0.0;
  const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || result.ec != std::errc{} || result.ptr != t.data() + t.size()) {
    throw ParseError("column '" + std::string(name) + "': expected a number, got '" +
                         std::string(trim(field.text)) + "'",
                     line_no, field.column);
  }
  return value;
}

struct TableRow {
  int line;  // 1-based file line number
  std::vector<double> values;
};

// Reads a comma-separated file with the given mandatory header row; blank
// lines are skipped, every other line must have exactly one number per column.
std::vector<TableRow> read_table(const std::string& path,
                                 const std::vector<std::string_view>& columns) {
  const std::string text = read_file(path);
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<TableRow> rows;
  while (std::getline(lines, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const std::vector<RawField> fields = split_csv(line);
    if (!header_seen) {
      for (std::size_t i = 0; i < columns.size() || i < fields.size(); ++i) {
        if (i >= columns.size() || i >= fields.size() ||
            trim(fields[i].text) != columns[i]) {
          std::string expected(columns[0]);
          for (std::size_t j = 1; j < columns.size(); ++j) {
            expected += ',';
            expected += columns[j];
          }
          throw ParseError("expected header '" + expected + "'", line_no,
                           i < fields.size() ? fields[i].column : 0);
        }
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != columns.size()) {
      throw ParseError("expected " + std::to_string(columns.size()) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no, 0);
    }
    TableRow row{line_no, {}};
    row.values.reserve(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) {
      row.values.push_back(parse_number(fields[i], line_no, columns[i]));
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) {
    throw ParseError("missing header row in '" + path + "'", 1, 0);
  }
  return rows;
}

void check_scalars(const PolicyInput& input) {
  if (!std::isfinite(input.delta) || input.delta <= 0.0) {
    throw DomainError("PolicyInput: delta must be finite and positive");
  }
  if (!std::isfinite(input.c)) {
    throw DomainError("PolicyInput: c must be finite");
  }
  if (!std::isfinite(input.b) || input.b <= 0.0) {
    throw DomainError("PolicyInput: b must be finite and positive");
  }
  if (!std::isfinite(input.C) || input.C < 0.0) {
    throw DomainError("PolicyInput: C must be finite and nonnegative");
  }
  if (!std::isfinite(input.V) || input.V <= 0.0) {
    throw DomainError("PolicyInput: V must be finite and positive");
  }
}

void check_unit(const Unit& unit, double delta, int row) {
  if (!std::isfinite(unit.x1) || !std::isfinite(unit.x2) ||
      !std::isfinite(unit.weight) || !std::isfinite(unit.tau_hat_proj)) {
    throw ConstraintError("unit has a non-finite value", row);
  }
  if (!(unit.weight > 0.0)) {
    throw ConstraintError("weight must be positive", row);
  }
  if (unit.x1 < 0.0 || unit.x1 >= delta) {
    std::ostringstream msg;
    msg << "x1 must lie in [0, delta): x1=" << unit.x1 << ", delta=" << delta;
    throw ConstraintError(msg.str(), row);
  }
  if (unit.x2 < 0.0) {
    throw ConstraintError("x2 must be nonnegative", row);
  }
  if (std::abs(unit.tau_hat_proj) > 1.0) {
    throw ConstraintError("tau_hat_proj must lie in [-1, 1]", row);
  }
}

void check_anchor(const BoundaryAnchor& anchor, int row) {
  if (!std::isfinite(anchor.x2) || !std::isfinite(anchor.tau_hat)) {
    throw ConstraintError("anchor has a non-finite value", row);
  }
  if (anchor.x2 < 0.0) {
    throw ConstraintError("x2 must be nonnegative", row);
  }
  if (std::abs(anchor.tau_hat) > 1.0) {
    throw ConstraintError("tau_hat must lie in [-1, 1]", row);
  }
}

// Rows here are whatever the caller reports on failure: file line numbers for
// loaded anchors, 1-based indices for programmatic ones.
void check_anchor_set(const std::vector<BoundaryAnchor>& anchors,
                      const std::vector<int>& rows) {
  std::set<double> seen;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    check_anchor(anchors[i], rows[i]);
    if (!seen.insert(anchors[i].x2).second) {
      throw ConstraintError("anchor x2 values must be distinct", rows[i]);
    }
  }
}

double distance(double dx1, double dx2, Norm norm) {
  switch (norm) {
    case Norm::Euclidean:
      return std::hypot(dx1, dx2);
    case Norm::Max:
      return std::max(std::abs(dx1), std::abs(dx2));
    case Norm::OneNorm:
      return std::abs(dx1) + std::abs(dx2);
  }
  throw DomainError("unknown norm");
}

struct WeightedMeans {
  double weight_sum;
  double tau_mean;
  double x1_mean;
};

WeightedMeans weighted_means(const PolicyInput& input) {
  double w_sum = 0.0;
  double tau_sum = 0.0;
  double x1_sum = 0.0;
  for (const Unit& unit : input.units) {
    w_sum += unit.weight;
    tau_sum += unit.weight * unit.tau_hat_proj;
    x1_sum += unit.weight * unit.x1;
  }
  if (!(w_sum > 0.0)) {
    throw DomainError("PolicyInput: total weight must be positive");
  }
  return {w_sum, tau_sum / w_sum, x1_sum / w_sum};
}

}  // namespace

const char* to_string(Norm norm) {
  switch (norm) {
    case Norm::Euclidean:
      return "euclidean";
    case Norm::Max:
      return "max";
    case Norm::OneNorm:
      return "one";
  }
  return "?";
}

Norm parse_norm(const std::string& text) {
  if (text == "euclidean") {
    return Norm::Euclidean;
  }
  if (text == "max") {
    return Norm::Max;
  }
  if (text == "one") {
    return Norm::OneNorm;
  }
  throw DomainError("unknown norm '" + text + "' (expected euclidean, max or one)");
}

void PolicyInput::validate() const {
  check_scalars(*this);
  if (units.empty()) {
    throw ConstraintError("PolicyInput: units must be nonempty");
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    check_unit(units[i], delta, static_cast<int>(i) + 1);
  }
}

PolicyScalars PolicyScalars::merged_with(const PolicyScalars& overrides) const {
  PolicyScalars merged = *this;
  if (overrides.delta) merged.delta = overrides.delta;
  if (overrides.c) merged.c = overrides.c;
  if (overrides.b) merged.b = overrides.b;
  if (overrides.C) merged.C = overrides.C;
  if (overrides.V) merged.V = overrides.V;
  if (overrides.mu_hat_override) merged.mu_hat_override = overrides.mu_hat_override;
  if (overrides.anchors_path) merged.anchors_path = overrides.anchors_path;
  if (overrides.norm) merged.norm = overrides.norm;
  return merged;
}

void PolicyScalars::require_complete() const {
  std::string missing;
  const auto need = [&](bool present, const char* name) {
    if (!present) {
      if (!missing.empty()) {
        missing += ", ";
      }
      missing += name;
    }
  };
  need(delta.has_value(), "delta");
  need(c.has_value(), "c");
  need(b.has_value(), "b");
  need(C.has_value(), "C");
  need(V.has_value(), "V");
  if (!missing.empty()) {
    throw MissingParameterError("missing required parameter(s): " + missing);
  }
}

double identified_effect(const PolicyInput& input) {
  input.validate();
  return input.c - input.b * weighted_means(input).tau_mean;
}

double identification_width(const PolicyInput& input) {
  input.validate();
  return input.b * input.C * weighted_means(input).x1_mean;
}

PolicyAssessment assess(const PolicyInput& input,
                        std::optional<double> mu_hat_override) {
  input.validate();
  if (mu_hat_override && !std::isfinite(*mu_hat_override)) {
    throw DomainError("assess: mu_hat_override must be finite");
  }
  const WeightedMeans means = weighted_means(input);
  const double sigma = std::sqrt(input.V);
  const double k = input.b * input.C * means.x1_mean;
  const double mu_hat = mu_hat_override ? *mu_hat_override
                                        : input.c - input.b * means.tau_mean;
  const Model model(k, sigma);
  const Regime reg = regime(model);

  // Same condition as the regime split, evaluated in its data-level form as
  // an internal consistency check.
  const bool non_randomized =
      input.b * input.C * (means.x1_mean * means.weight_sum) <=
      std::sqrt(input.V * std::numbers::pi / 2.0) * means.weight_sum;
  if (non_randomized != (reg == Regime::ThresholdOptimal)) {
    throw ConstraintError(
        "assess: non-randomization inequality disagrees with the rule regime");
  }

  PolicyAssessment out;
  out.mu_hat = mu_hat;
  out.k = k;
  out.sigma = sigma;
  out.action = evaluate_rule(mmr_rule(model), mu_hat);
  out.regime = reg;
  if (reg == Regime::RandomizedOptimal) {
    out.kstar = kstar(model);
  }
  return out;
}

std::pair<double, double> tight_bounds(const PolicyInput& input,
                                       const std::vector<BoundaryAnchor>& anchors,
                                       Norm norm) {
  input.validate();
  if (anchors.empty()) {
    throw DomainError("tight_bounds: anchors must be nonempty");
  }
  std::vector<int> rows(anchors.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = static_cast<int>(i) + 1;
  }
  check_anchor_set(anchors, rows);

  const std::size_t n = input.units.size();
  std::vector<double> tau_upper(n);
  std::vector<double> tau_lower(n);
  parallel_for(n, [&](std::size_t i) {
    const Unit& unit = input.units[i];
    double hi = std::numeric_limits<double>::infinity();
    double lo = -std::numeric_limits<double>::infinity();
    for (const BoundaryAnchor& anchor : anchors) {
      const double d = distance(unit.x1, unit.x2 - anchor.x2, norm);
      hi = std::min(hi, anchor.tau_hat + input.C * d);
      lo = std::max(lo, anchor.tau_hat - input.C * d);
    }
    tau_upper[i] = std::min(1.0, hi);
    tau_lower[i] = std::max(-1.0, lo);
  });

  double w_sum = 0.0;
  double upper_sum = 0.0;
  double lower_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (tau_lower[i] > tau_upper[i] + 1e-12) {
      throw ConstraintError(
          "tight_bounds: anchors are mutually inconsistent with the "
          "Lipschitz constant");
    }
    const double w = input.units[i].weight;
    w_sum += w;
    upper_sum += w * tau_upper[i];
    lower_sum += w * tau_lower[i];
  }
  const double lo = input.c - input.b * (upper_sum / w_sum);
  const double hi = input.c - input.b * (lower_sum / w_sum);

  // The identified effect is a Lipschitz-feasible value, so it must land
  // inside the envelope bounds; escaping them means the anchor values
  // contradict the units' own projected estimates.
  const double mu_hat = identified_effect(input);
  const double slack = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (mu_hat < lo - slack || mu_hat > hi + slack) {
    throw ConstraintError(
        "tight_bounds: anchors are inconsistent with the units' projected "
        "effect estimates (identified effect escapes the bounds)");
  }
  return {lo, hi};
}

PolicyInput ingest(const std::string& data_path, const PolicyScalars& scalars) {
  scalars.require_complete();
  PolicyInput input;
  input.delta = *scalars.delta;
  input.c = *scalars.c;
  input.b = *scalars.b;
  input.C = *scalars.C;
  input.V = *scalars.V;
  check_scalars(input);

  const std::vector<TableRow> rows =
      read_table(data_path, {"x1", "x2", "weight", "tau_hat_proj"});
  if (rows.empty()) {
    throw ConstraintError("data file '" + data_path + "' has no unit rows");
  }
  input.units.reserve(rows.size());
  for (const TableRow& row : rows) {
    const Unit unit{row.values[0], row.values[1], row.values[2], row.values[3]};
    check_unit(unit, input.delta, row.line);
    input.units.push_back(unit);
  }
  return input;
}

PolicyScalars load_config(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  PolicyScalars out;
  std::set<std::string> seen;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    std::string_view body = std::string_view(line).substr(
        0, hash == std::string::npos ? line.size() : hash);
    if (trim(body).empty()) {
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value'", line_no, 0);
    }
    const std::string key(trim(body.substr(0, eq)));
    const RawField value{body.substr(eq + 1), static_cast<int>(eq) + 2};
    if (key.empty()) {
      throw ParseError("empty key", line_no, 1);
    }
    const std::string canonical = key == "mu_hat" ? "mu_hat_override" : key;
    if (!seen.insert(canonical).second) {
      throw ParseError("duplicate key '" + key + "'", line_no, 1);
    }
    if (canonical == "delta") {
      out.delta = parse_number(value, line_no, key);
    } else if (canonical == "c") {
      out.c = parse_number(value, line_no, key);
    } else if (canonical == "b") {
      out.b = parse_number(value, line_no, key);
    } else if (canonical == "C") {
      out.C = parse_number(value, line_no, key);
    } else if (canonical == "V") {
      out.V = parse_number(value, line_no, key);
    } else if (canonical == "mu_hat_override") {
      out.mu_hat_override = parse_number(value, line_no, key);
    } else if (canonical == "anchors") {
      const std::string anchors_path{trim(value.text)};
      if (anchors_path.empty()) {
        throw ParseError("key 'anchors': expected a file path", line_no,
                         value.column);
      }
      out.anchors_path = anchors_path;
    } else if (canonical == "norm") {
      try {
        out.norm = parse_norm(std::string(trim(value.text)));
      } catch (const DomainError& e) {
        throw ParseError(e.what(), line_no, value.column);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, 1);
    }
  }
  return out;
}

std::vector<BoundaryAnchor> load_anchors(const std::string& path) {
  const std::vector<TableRow> rows = read_table(path, {"x2", "tau_hat"});
  if (rows.empty()) {
    throw ConstraintError("anchors file '" + path + "' has no rows");
  }
  std::vector<BoundaryAnchor> anchors;
  std::vector<int> lines;
  anchors.reserve(rows.size());
  for (const TableRow& row : rows) {
    anchors.push_back({row.values[0], row.values[1]});
    lines.push_back(row.line);
  }
  check_anchor_set(anchors, lines);
  return anchors;
}

}  // namespace mmrkit
