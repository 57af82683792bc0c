#pragma once

#include "wavemodel/interval1d.hpp"
#include "wavemodel/lattice.hpp"
#include "wavemodel/metric_space.hpp"

#include <json.hpp>

#include <istream>
#include <stdexcept>
#include <string>

namespace wavemodel::io {

/// Malformed input. Rows and columns are 1-based; column 0 means "whole row".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& message);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct PointCloud {
  std::vector<std::vector<Rational>> coords;
  std::vector<std::string> labels;  // empty when the input has no label column
};

/// One point per row, comma-separated coordinates, optional leading label
/// column (detected when the first field of the first row is not a number).
/// Blank lines and lines starting with '#' are skipped.
PointCloud read_points_csv(std::istream& in);

/// Whitespace-separated "i j weight" per line, 0-based indices.
std::vector<WeightedEdge> read_edge_list(std::istream& in);

/// n rows of n comma-separated distances.
std::vector<std::vector<Real>> read_matrix_csv(std::istream& in);

/// Decimal (optionally with exponent) and "p/q" fields, read exactly.
Real parse_distance(const std::string& field, std::size_t row, std::size_t column);

nlohmann::json to_json(const Real& value);
nlohmann::json to_json(const PointSet& set);
/// {"grid": ["p/q", ...], "sets": [[indices], ...]}
nlohmann::json to_json(const LatticeFunction& f);
nlohmann::json to_json(const TauBracket& bracket);

/// [{"lo": "p/q", "lo_closed": bool, "hi": "p/q", "hi_closed": bool}, ...]
nlohmann::json to_json(const interval1d::IntervalSet& set);
interval1d::IntervalSet interval_set_from_json(const nlohmann::json& j, const Rational& length);
nlohmann::json to_json(const interval1d::PiecewiseLatticeFunction1D& f);

}  // namespace wavemodel::io
