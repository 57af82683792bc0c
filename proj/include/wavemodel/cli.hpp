#pragma once

#include "wavemodel/lattice.hpp"
#include "wavemodel/metric_space.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wavemodel::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kParseFailure = 2,
  kConfigRefused = 3,
};

enum class Backend { Points, Graph, Matrix, Discrete, Segment, Interval1d };

struct GridSpec {
  Rational min;
  Rational max;
  std::size_t count = 64;
  bool geometric = true;
};

struct RunConfig {
  std::string command;
  Backend backend = Backend::Points;
  std::string input;
  std::size_t n = 0;                 // discrete
  std::size_t samples = 0;           // segment
  Rational length{1};                // segment / interval1d
  std::optional<GridSpec> grid;
  double eta = 1e-9;
  std::string out;                   // empty: stdout
  std::string format = "json";
  std::optional<Rational> spacing;   // sample spacing used by verdicts
  Rational x{3, 10};                 // segment-demo / interval1d nets
  std::string net = "balls";         // nucleus-demo
  std::size_t center = 0;
  std::vector<std::size_t> members;  // nucleus-demo --net constant
};

/// Parses "min,max,count,law" with law linear|geometric.
GridSpec parse_grid_spec(const std::string& text);

/// Builds the space named by the config. Ingestion problems raise
/// io::ParseError; metric problems raise MetricAxiomError or
/// std::invalid_argument.
FiniteMetricSpace load_space(const RunConfig& config);

/// Command reports. Every number comes from a core-module call.
nlohmann::json validate_report(const FiniteMetricSpace& space);
nlohmann::json conditions_report(const FiniteMetricSpace& space, const std::optional<Rational>& spacing);
nlohmann::json tau_report(const FiniteMetricSpace& space, const TimeGrid& grid);
nlohmann::json isometry_report(const FiniteMetricSpace& space, const TimeGrid& grid,
                               const std::optional<Rational>& spacing);
nlohmann::json segment_demo_report(const Rational& x);
nlohmann::json nucleus_demo_report(const RunConfig& config);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wavemodel::cli
