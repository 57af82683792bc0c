#include "wavemodel/cli.hpp"

#include "wavemodel/interval1d.hpp"
#include "wavemodel/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>

namespace wavemodel::cli {

namespace {

using nlohmann::json;
namespace iv = interval1d;

/// Carries the exit code out of the command layer.
class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

Rational parse_option_rational(const std::string& text, const std::string& option) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw Failure(kConfigRefused, option + ": " + e.what());
  }
}

json matrix_json(const FiniteMetricSpace& space, const std::vector<Real>& values) {
  const std::size_t n = space.size();
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(io::to_json(values[i * n + j]));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_csv(const FiniteMetricSpace& space, const std::vector<Real>& values) {
  std::ostringstream os;
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << values[i * n + j].to_string();
    os << '\n';
  }
  return os.str();
}

Real max_nearest_neighbor(const FiniteMetricSpace& space) {
  Real worst(0);
  for (PointIndex i = 0; i < space.size(); ++i) {
    Real nearest = Real::infinity();
    for (PointIndex j = 0; j < space.size(); ++j) {
      if (i != j) nearest = min(nearest, space.distance(i, j));
    }
    if (nearest.is_finite()) worst = max(worst, nearest);
  }
  return worst;
}

json condition1_json(const FiniteMetricSpace& space) {
  const auto c1 = check_condition1(space);
  return {{"holds", c1.holds}, {"note", c1.note}};
}

std::string condition2_verdict(const FiniteMetricSpace& space, const Real& max_defect,
                               const std::optional<Rational>& spacing) {
  const Tolerance& tol = space.tolerance();
  if (tol.compare(max_defect, 0) <= 0) return "holds";
  if (spacing && tol.compare(max_defect, Real(2 * *spacing)) <= 0) return "holds within sample tolerance";
  return "fails";
}

TimeGrid grid_from(const RunConfig& config, const FiniteMetricSpace& space) {
  if (!config.grid) return default_grid(space);
  try {
    const GridSpec& g = *config.grid;
    return g.geometric ? TimeGrid::geometric(g.min, g.max, g.count) : TimeGrid::linear(g.min, g.max, g.count);
  } catch (const std::invalid_argument& e) {
    throw Failure(kConfigRefused, std::string("--grid: ") + e.what());
  }
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out);
  if (!file) throw Failure(kConfigRefused, "cannot write " + config.out);
  file << text;
}

std::string kv_csv(const json& report) {
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : report.items()) {
    if (value.is_structured()) continue;
    os << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  return os.str();
}

// -- segment demo -------------------------------------------------------------

std::string segment_traces_csv(const iv::FourChain& chain, const std::vector<Rational>& probes) {
  std::ostringstream os;
  os << "function,t,component,lo,lo_closed,hi,hi_closed\n";
  const std::pair<const char*, const iv::PiecewiseLatticeFunction1D*> named[] = {
      {"b_lower", &chain.lower}, {"a1", &chain.first}, {"a2", &chain.second}, {"b_upper", &chain.upper}};
  for (const auto& [name, f] : named) {
    for (const auto& t : probes) {
      const iv::IntervalSet value = (*f)(t);
      std::size_t k = 0;
      for (const auto& c : value.components()) {
        os << name << ',' << format_rational(t) << ',' << k++ << ',' << format_rational(c.lo.value) << ','
           << (c.lo.closed ? 1 : 0) << ',' << format_rational(c.hi.value) << ',' << (c.hi.closed ? 1 : 0) << '\n';
      }
    }
  }
  return os.str();
}

// -- nucleus demo on the segment ---------------------------------------------

iv::AffineFamily closure_family(const iv::AffineFamily& family) {
  std::vector<iv::AffineInterval> parts = family.components();
  for (auto& c : parts) {
    c.lo.closed = true;
    c.hi.closed = true;
  }
  return iv::AffineFamily(family.length(), std::move(parts), family.eps_max());
}

json nucleus_demo_interval(const RunConfig& config) {
  const Rational& length = config.length;
  const Rational& x = config.x;
  if (x < 0 || x > length) throw Failure(kConfigRefused, "--x must lie in [0, L]");
  std::optional<iv::AffineFamily> family;
  if (config.net == "left") {
    family = iv::AffineFamily::left_of(length, x);
  } else if (config.net == "right") {
    family = iv::AffineFamily::right_of(length, x);
  } else if (config.net == "balls") {
    family = iv::AffineFamily(length, {iv::AffineInterval{{x, -1, false}, {x, 1, false}}}, length);
  } else if (config.net == "constant-omega") {
    family = iv::AffineFamily::constant(iv::IntervalSet::whole(length));
  } else {
    throw Failure(kConfigRefused, "net '" + config.net + "' is not available on the interval1d backend");
  }

  std::vector<Rational> times;
  if (config.grid) {
    const GridSpec& g = *config.grid;
    try {
      times = (g.geometric ? TimeGrid::geometric(g.min, g.max, g.count) : TimeGrid::linear(g.min, g.max, g.count)).values();
    } catch (const std::invalid_argument& e) {
      throw Failure(kConfigRefused, std::string("--grid: ") + e.what());
    }
  } else {
    const iv::PiecewiseLatticeFunction1D ball(length, x);
    std::vector<Rational> extra;
    for (int k = 1; k <= 24; ++k) extra.push_back(length * Rational(k, 20));
    times = iv::probe_times({&ball}, extra);
  }

  // Lemma-1 route: the nucleus is the meet of the closures of the members.
  const iv::IntervalSet core = iv::iv_family_meet(closure_family(*family));
  json limit = json::array();
  json sandwich = json::array();
  bool passes = true;
  for (const auto& t : times) {
    const iv::IntervalSet value = iv::iv_net_limit(*family, t);
    const iv::IntervalSet spread = iv::iv_neighborhood(core, t);
    const bool lower_ok = spread.is_subset_of(value);
    const bool upper_ok = value.is_subset_of(iv::iv_interior(iv::iv_closure(spread)));
    passes = passes && lower_ok && upper_ok;
    limit.push_back({{"t", format_rational(t)}, {"set", io::to_json(value)}});
    sandwich.push_back({{"t", format_rational(t)}, {"lower_ok", lower_ok}, {"upper_ok", upper_ok}});
  }
  return {{"backend", "interval1d"},
          {"net", config.net},
          {"x", format_rational(x)},
          {"limit", std::move(limit)},
          {"nucleus", io::to_json(core)},
          {"nucleus_text", core.to_string()},
          {"nucleus_nonempty", !core.empty()},
          {"sandwich", std::move(sandwich)},
          {"sandwich_passes", passes}};
}

}  // namespace

// ---------------------------------------------------------------------------

GridSpec parse_grid_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 4) throw Failure(kConfigRefused, "--grid expects min,max,count,law");
  GridSpec g;
  g.min = parse_option_rational(parts[0], "--grid min");
  g.max = parse_option_rational(parts[1], "--grid max");
  try {
    g.count = std::stoul(parts[2]);
  } catch (const std::exception&) {
    throw Failure(kConfigRefused, "--grid count '" + parts[2] + "' is not a positive integer");
  }
  if (parts[3] == "linear") {
    g.geometric = false;
  } else if (parts[3] != "geometric") {
    throw Failure(kConfigRefused, "--grid law must be linear or geometric");
  }
  if (g.count < 2 || g.min <= 0 || g.max <= g.min) {
    throw Failure(kConfigRefused, "--grid needs 0 < min < max and count >= 2");
  }
  return g;
}

FiniteMetricSpace load_space(const RunConfig& config) {
  const Tolerance tol{config.eta};
  auto open_input = [&]() {
    if (config.input.empty()) throw Failure(kConfigRefused, "--input is required for this backend");
    std::ifstream in(config.input);
    if (!in) throw io::ParseError(0, 0, "cannot open " + config.input);
    return in;
  };
  switch (config.backend) {
    case Backend::Points: {
      auto in = open_input();
      auto cloud = io::read_points_csv(in);
      return build_from_points(cloud.coords, std::move(cloud.labels), tol);
    }
    case Backend::Graph: {
      auto in = open_input();
      return build_from_graph(io::read_edge_list(in), 0, {}, tol);
    }
    case Backend::Matrix: {
      auto in = open_input();
      return build_from_matrix(io::read_matrix_csv(in), {}, tol);
    }
    case Backend::Discrete:
      if (config.n == 0) throw Failure(kConfigRefused, "--n must be at least 1 for the discrete backend");
      return build_discrete(config.n);
    case Backend::Segment:
      if (config.samples < 2) throw Failure(kConfigRefused, "--samples must be at least 2 for the segment backend");
      if (config.length <= 0) throw Failure(kConfigRefused, "--length must be positive");
      return build_segment_sample(config.samples, config.length);
    case Backend::Interval1d:
      break;
  }
  throw Failure(kConfigRefused, "the interval1d backend has no finite metric space; use segment-demo or nucleus-demo");
}

json validate_report(const FiniteMetricSpace& space) {
  return {{"status", "valid"},
          {"n", space.size()},
          {"exact", space.is_exact()},
          {"diameter", io::to_json(space.diameter())},
          {"min_positive_distance", io::to_json(space.min_positive_distance())},
          {"max_nearest_neighbor_distance", io::to_json(max_nearest_neighbor(space))}};
}

json conditions_report(const FiniteMetricSpace& space, const std::optional<Rational>& spacing) {
  const auto defects = condition2_defects(space);
  Real worst(0);
  for (const auto& d : defects) worst = max(worst, d);
  return {{"condition1", condition1_json(space)},
          {"condition2",
           {{"defects", matrix_json(space, defects)},
            {"max_defect", io::to_json(worst)},
            {"verdict", condition2_verdict(space, worst, spacing)}}},
          {"sample_spacing", spacing ? json(format_rational(*spacing)) : json(nullptr)},
          {"max_nearest_neighbor_distance", io::to_json(max_nearest_neighbor(space))}};
}

json tau_report(const FiniteMetricSpace& space, const TimeGrid& grid) {
  const WaveModel model = wave_model(space, grid);
  json brackets = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(io::to_json(model.bracket_at(i, j)));
    brackets.push_back(std::move(row));
  }
  return {{"labels", space.labels()},
          {"tau", matrix_json(space, model.tau)},
          {"brackets", std::move(brackets)},
          {"grid", {{"min", format_rational(grid.front())}, {"max", format_rational(grid.back())}, {"count", grid.size()}}},
          {"brackets_contain_tau", model.brackets_contain_tau},
          {"representative_independent", model.representative_independent},
          {"warnings", model.warnings}};
}

json isometry_report(const FiniteMetricSpace& space, const TimeGrid& grid, const std::optional<Rational>& spacing) {
  const WaveModel model = wave_model(space, grid);
  const Tolerance& tol = space.tolerance();
  const bool isometric = tol.compare(model.max_abs_error, 0) <= 0;
  bool homothetic = model.homothety.has_value();
  if (homothetic) {
    for (PointIndex i = 0; i < space.size() && homothetic; ++i) {
      for (PointIndex j = i + 1; j < space.size(); ++j) {
        if (!tol.equal(model.tau_at(i, j), *model.homothety * space.distance(i, j))) {
          homothetic = false;
          break;
        }
      }
    }
  }
  std::string verdict;
  if (isometric) {
    verdict = "isometric";
  } else if (homothetic) {
    verdict = "isometric up to homothety c = " + model.homothety->to_string();
  } else if (spacing && tol.compare(model.max_abs_error, Real(2 * *spacing)) <= 0) {
    verdict = "isometric within sample tolerance";
  } else {
    verdict = "not isometric";
  }
  json cause = nullptr;
  if (!isometric && tol.compare(model.max_defect, 0) > 0) {
    cause = "condition 2 fails (max defect " + model.max_defect.to_string() + ")";
  }
  json atom_labels = json::array();
  for (PointIndex p : model.atom_points) atom_labels.push_back(space.label(p));
  return {{"n", space.size()},
          {"atoms", model.atoms.size()},
          {"atom_points", std::move(atom_labels)},
          {"max_abs_error", io::to_json(model.max_abs_error)},
          {"homothety", model.homothety ? io::to_json(*model.homothety) : json(nullptr)},
          {"homothety_exact", homothetic},
          {"condition1", condition1_json(space)},
          {"max_defect", io::to_json(model.max_defect)},
          {"sample_spacing", spacing ? json(format_rational(*spacing)) : json(nullptr)},
          {"verdict", verdict},
          {"cause", cause},
          {"brackets_contain_tau", model.brackets_contain_tau},
          {"representative_independent", model.representative_independent},
          {"warnings", model.warnings}};
}

json segment_demo_report(const Rational& x) {
  const iv::FourChain chain = iv::segment_example(x);
  const iv::FourChainReport report = iv::verify_four_chain(x);
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json probes = json::array();
  for (const auto& t : report.probes) probes.push_back(format_rational(t));
  return {{"x", format_rational(x)},
          {"functions",
           {{"b_lower", io::to_json(chain.lower)},
            {"a1", io::to_json(chain.first)},
            {"a2", io::to_json(chain.second)},
            {"b_upper", io::to_json(chain.upper)}}},
          {"merged_exception", chain.merged_exception},
          {"report", {{"probes", std::move(probes)}, {"checks", std::move(checks)}, {"all_passed", report.all_passed()}}}};
}

json nucleus_demo_report(const RunConfig& config) {
  if (config.backend == Backend::Interval1d) return nucleus_demo_interval(config);
  const FiniteMetricSpace space = load_space(config);
  const TimeGrid grid = grid_from(config, space);
  check_grid_admissible(space, grid);
  if (config.center >= space.size()) throw Failure(kConfigRefused, "--center outside the space");

  std::optional<DecreasingNet> net;
  if (config.net == "balls") {
    const PointIndex c = config.center;
    const Real& diam = space.diameter();
    Rational eps0 = space.size() == 1 ? Rational(1)
                    : diam.is_exact() ? diam.exact()
                                      : rational_from_double(diam.to_double());
    net = DecreasingNet::parametric([&space, c](const Rational& eps) { return open_ball(space, c, Radius(eps)); },
                                    eps0);
  } else if (config.net == "constant-omega") {
    net = DecreasingNet::chain({space.all()});
  } else if (config.net == "constant") {
    try {
      net = DecreasingNet::chain({PointSet(space.size(), config.members)});
    } catch (const std::out_of_range& e) {
      throw Failure(kConfigRefused, std::string("--set: ") + e.what());
    }
  } else {
    throw Failure(kConfigRefused, "net '" + config.net + "' needs --backend interval1d");
  }

  NetLimit limit = [&] {
    try {
      return net_limit(space, *net, grid);
    } catch (const NetError& e) {
      throw Failure(kValidationFailure, e.what());
    }
  }();
  const NucleusSet core = nucleus(limit.function);
  const PointSet open_core = nucleus_without_closures(limit.function);
  const auto rows = sandwich_check(space, limit.function);
  json sandwich = json::array();
  for (const auto& r : rows) {
    sandwich.push_back({{"t", format_rational(r.t)}, {"lower_ok", r.lower_ok}, {"upper_ok", r.upper_ok}});
  }
  const bool members_nonempty = !net->sample().back().empty();
  return {{"backend", "finite"},
          {"net", config.net},
          {"members_used", limit.members},
          {"limit", io::to_json(limit.function)},
          {"nucleus", io::to_json(core.points)},
          {"nucleus_without_closures", io::to_json(open_core)},
          {"infimum_of_closures", io::to_json(limit.infimum)},
          {"nucleus_identity_holds", core.points == open_core && core.points == limit.infimum},
          {"members_nonempty", members_nonempty},
          {"nucleus_nonempty", !core.points.empty()},
          {"sandwich", std::move(sandwich)},
          {"sandwich_passes", sandwich_passes(rows)}};
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Wave model of finite metric spaces and of the unit segment"};
  std::string backend = "points";
  std::string grid_text;
  std::string length_text = "1";
  std::string spacing_text;
  std::string x_text = "3/10";
  std::string set_text;
  app.add_option("command", config.command, "validate|conditions|tau|isometry|segment-demo|nucleus-demo")
      ->required()
      ->check(CLI::IsMember({"validate", "conditions", "tau", "isometry", "segment-demo", "nucleus-demo"}));
  app.add_option("--backend", backend, "points|graph|matrix|discrete|segment|interval1d")
      ->check(CLI::IsMember({"points", "graph", "matrix", "discrete", "segment", "interval1d"}));
  app.add_option("--input", config.input, "input file (points CSV, edge list, or matrix CSV)");
  app.add_option("--n", config.n, "point count for --backend discrete");
  app.add_option("--samples", config.samples, "sample count for --backend segment");
  app.add_option("--length", length_text, "segment length L (rational)");
  app.add_option("--grid", grid_text, "time grid min,max,count,linear|geometric");
  app.add_option("--eta", config.eta, "comparison tolerance for floating distances")->check(CLI::NonNegativeNumber);
  app.add_option("--out", config.out, "output file (directory for segment-demo); stdout if omitted");
  app.add_option("--format", config.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--spacing", spacing_text, "sample spacing used by the tolerance verdicts");
  app.add_option("--x", x_text, "point of the segment for segment-demo and interval1d nets (rational)");
  app.add_option("--net", config.net, "balls|constant-omega|constant|left|right");
  app.add_option("--center", config.center, "center point index for --net balls");
  app.add_option("--set", set_text, "comma-separated point indices for --net constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigRefused;
  }

  try {
    static const std::map<std::string, Backend> backends{
        {"points", Backend::Points},   {"graph", Backend::Graph},     {"matrix", Backend::Matrix},
        {"discrete", Backend::Discrete}, {"segment", Backend::Segment}, {"interval1d", Backend::Interval1d}};
    config.backend = backends.at(backend);
    config.length = parse_option_rational(length_text, "--length");
    config.x = parse_option_rational(x_text, "--x");
    if (!grid_text.empty()) config.grid = parse_grid_spec(grid_text);
    if (!spacing_text.empty()) {
      config.spacing = parse_option_rational(spacing_text, "--spacing");
    } else if (config.backend == Backend::Segment && config.samples >= 2) {
      config.spacing = config.length / Rational(config.samples - 1);
    }
    if (!set_text.empty()) {
      std::stringstream ss(set_text);
      for (std::string p; std::getline(ss, p, ',');) {
        try {
          config.members.push_back(std::stoul(p));
        } catch (const std::exception&) {
          throw Failure(kConfigRefused, "--set entry '" + p + "' is not an index");
        }
      }
    }

    json report;
    std::string csv;
    if (config.command == "segment-demo") {
      if (config.x <= 0 || config.x >= 1) throw Failure(kConfigRefused, "--x must lie strictly between 0 and 1");
      report = segment_demo_report(config.x);
      if (!config.out.empty()) {
        std::filesystem::create_directories(config.out);
        const iv::FourChainReport checks = iv::verify_four_chain(config.x);
        std::ofstream(std::filesystem::path(config.out) / "four_chain.json") << report.dump(2) << '\n';
        std::ofstream(std::filesystem::path(config.out) / "traces.csv")
            << segment_traces_csv(iv::segment_example(config.x), checks.probes);
      }
      out << report.dump(2) << '\n';
      return report["report"]["all_passed"].get<bool>() ? kSuccess : kValidationFailure;
    }
    if (config.command == "nucleus-demo") {
      report = nucleus_demo_report(config);
      if (config.format == "csv") {
        std::ostringstream os;
        os << "t,lower_ok,upper_ok\n";
        for (const auto& r : report["sandwich"]) {
          os << r["t"].get<std::string>() << ',' << r["lower_ok"].dump() << ',' << r["upper_ok"].dump() << '\n';
        }
        csv = os.str();
      }
      emit(config, out, config.format == "csv" ? csv : report.dump(2) + "\n");
      return report["sandwich_passes"].get<bool>() ? kSuccess : kValidationFailure;
    }

    const FiniteMetricSpace space = load_space(config);
    if (config.command == "validate") {
      report = validate_report(space);
      csv = kv_csv(report);
    } else if (config.command == "conditions") {
      report = conditions_report(space, config.spacing);
      csv = matrix_csv(space, condition2_defects(space));
    } else {
      const TimeGrid grid = grid_from(config, space);
      if (config.command == "tau") {
        report = tau_report(space, grid);
        std::vector<Real> tau;
        for (const auto& row : report["tau"]) {
          for (const auto& v : row) {
            if (!v.is_string()) {
              tau.push_back(Real::approx(v.get<double>()));
            } else if (v.get<std::string>() == "inf") {
              tau.push_back(Real::infinity());
            } else {
              tau.push_back(Real(parse_rational(v.get<std::string>())));
            }
          }
        }
        csv = matrix_csv(space, tau);
      } else {
        report = isometry_report(space, grid, config.spacing);
        csv = kv_csv(report);
      }
    }
    emit(config, out, config.format == "csv" ? csv : report.dump(2) + "\n");
    return kSuccess;
  } catch (const Failure& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const MetricAxiomError& e) {
    err << "invalid metric: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const GridRefused& e) {
    err << "grid refused: " << e.what() << '\n';
    return kConfigRefused;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace wavemodel::cli
