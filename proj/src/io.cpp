#include "wavemodel/io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace wavemodel::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool skip_line(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

Rational parse_exact(const std::string& field, std::size_t row, std::size_t column) {
  try {
    return parse_rational(field);
  } catch (const std::invalid_argument& e) {
    throw ParseError(row, column, e.what());
  }
}

bool looks_numeric(const std::string& field) {
  try {
    (void)parse_rational(field);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(row) + (column ? ", column " + std::to_string(column) : "") + ": " +
                         message),
      row_(row),
      column_(column) {}

Real parse_distance(const std::string& field, std::size_t row, std::size_t column) {
  return Real(parse_exact(field, row, column));
}

PointCloud read_points_csv(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t row = 0;
  bool decided = false;
  bool labelled = false;
  while (std::getline(in, line)) {
    ++row;
    if (skip_line(line)) continue;
    const auto fields = split_commas(line);
    if (!decided) {
      labelled = !looks_numeric(fields.front());
      decided = true;
    }
    std::size_t first = 0;
    if (labelled) {
      cloud.labels.push_back(fields.front());
      first = 1;
    }
    if (fields.size() <= first) throw ParseError(row, 0, "row has no coordinates");
    std::vector<Rational> point;
    for (std::size_t c = first; c < fields.size(); ++c) point.push_back(parse_exact(fields[c], row, c + 1));
    if (!cloud.coords.empty() && point.size() != cloud.coords.front().size()) {
      throw ParseError(row, 0,
                       "expected " + std::to_string(cloud.coords.front().size()) + " coordinates, found " +
                           std::to_string(point.size()));
    }
    cloud.coords.push_back(std::move(point));
  }
  if (cloud.coords.empty()) throw ParseError(row, 0, "no points found");
  return cloud;
}

std::vector<WeightedEdge> read_edge_list(std::istream& in) {
  std::vector<WeightedEdge> edges;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) fields.push_back(f);
    if (fields.size() != 3) {
      throw ParseError(row, 0, "expected 'i j weight', found " + std::to_string(fields.size()) + " fields");
    }
    PointIndex ends[2];
    for (int c = 0; c < 2; ++c) {
      const auto& f = fields[c];
      if (f.empty() || f.size() > 9 ||
          !std::all_of(f.begin(), f.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        throw ParseError(row, c + 1, "vertex index '" + f + "' is not a non-negative integer");
      }
      ends[c] = std::stoul(f);
    }
    edges.push_back({ends[0], ends[1], parse_distance(fields[2], row, 3)});
  }
  if (edges.empty()) throw ParseError(row, 0, "no edges found");
  return edges;
}

std::vector<std::vector<Real>> read_matrix_csv(std::istream& in) {
  std::vector<std::vector<Real>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (skip_line(line)) continue;
    const auto fields = split_commas(line);
    std::vector<Real> values;
    values.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) values.push_back(parse_distance(fields[c], row, c + 1));
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError(row, 0,
                       "expected " + std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(row, 0, "empty matrix");
  if (rows.size() != rows.front().size()) {
    throw ParseError(row, 0,
                     "matrix is " + std::to_string(rows.size()) + "x" + std::to_string(rows.front().size()) +
                         ", expected square");
  }
  return rows;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const Real& value) {
  if (value.is_exact()) return format_rational(value.exact());
  if (value.is_infinite()) return "inf";
  return value.to_double();
}

nlohmann::json to_json(const PointSet& set) { return set.indices(); }

nlohmann::json to_json(const LatticeFunction& f) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& t : f.grid().values()) grid.push_back(format_rational(t));
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : f.sets()) sets.push_back(to_json(s));
  return {{"grid", std::move(grid)}, {"sets", std::move(sets)}};
}

nlohmann::json to_json(const TauBracket& bracket) { return {to_json(bracket.lower), to_json(bracket.upper)}; }

nlohmann::json to_json(const interval1d::IntervalSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : set.components()) {
    out.push_back({{"lo", format_rational(c.lo.value)},
                   {"lo_closed", c.lo.closed},
                   {"hi", format_rational(c.hi.value)},
                   {"hi_closed", c.hi.closed}});
  }
  return out;
}

interval1d::IntervalSet interval_set_from_json(const nlohmann::json& j, const Rational& length) {
  if (!j.is_array()) throw std::invalid_argument("interval set JSON must be an array");
  std::vector<interval1d::Interval> parts;
  for (const auto& c : j) {
    parts.push_back({{parse_rational(c.at("lo").get<std::string>()), c.at("lo_closed").get<bool>()},
                     {parse_rational(c.at("hi").get<std::string>()), c.at("hi_closed").get<bool>()}});
  }
  return interval1d::IntervalSet(length, std::move(parts));
}

nlohmann::json to_json(const interval1d::PiecewiseLatticeFunction1D& f) {
  nlohmann::json exceptions = nlohmann::json::array();
  for (const auto& [t, set] : f.exceptions()) {
    exceptions.push_back({{"t", format_rational(t)}, {"set", to_json(set)}});
  }
  return {{"length", format_rational(f.length())},
          {"base", {{"kind", "open_ball"}, {"center", format_rational(f.center())}}},
          {"exceptions", std::move(exceptions)}};
}

}  // namespace wavemodel::io
