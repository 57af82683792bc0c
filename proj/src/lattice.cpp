#include "wavemodel/lattice.hpp"

#include <cmath>
#include <set>

namespace wavemodel {

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid::TimeGrid(std::vector<Rational> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("time grid needs at least two values");
  if (values_.front() <= 0) throw std::invalid_argument("time grid values must be positive");
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] <= values_[i - 1]) {
      throw std::invalid_argument("time grid must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

TimeGrid TimeGrid::linear(const Rational& lo, const Rational& hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("time grid needs at least two values");
  std::vector<Rational> values;
  values.reserve(count);
  const Rational step = (hi - lo) / Rational(count - 1);
  for (std::size_t i = 0; i < count; ++i) values.push_back(lo + step * Rational(i));
  return TimeGrid(std::move(values));
}

TimeGrid TimeGrid::geometric(const Rational& lo, const Rational& hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("time grid needs at least two values");
  if (lo <= 0 || hi <= lo) throw std::invalid_argument("geometric grid needs 0 < min < max");
  std::vector<Rational> values;
  values.reserve(count);
  const double ratio = to_double(hi) / to_double(lo);
  values.push_back(lo);
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const double v = to_double(lo) * std::pow(ratio, static_cast<double>(i) / static_cast<double>(count - 1));
    values.push_back(rational_from_double(v));
  }
  values.push_back(hi);
  return TimeGrid(std::move(values));
}

// ---------------------------------------------------------------------------
// LatticeFunction

LatticeFunction::LatticeFunction(TimeGrid grid, std::vector<PointSet> sets)
    : grid_(std::move(grid)), sets_(std::move(sets)) {
  if (sets_.size() != grid_.size()) throw std::invalid_argument("one set per grid value required");
  for (std::size_t i = 1; i < sets_.size(); ++i) {
    if (!sets_[i - 1].is_subset_of(sets_[i])) {
      throw std::invalid_argument("lattice function is not monotone between t = " + format_rational(grid_[i - 1]) +
                                  " and t = " + format_rational(grid_[i]));
    }
  }
}

LatticeFunction LatticeFunction::constant(TimeGrid grid, const PointSet& set) {
  std::vector<PointSet> sets(grid.size(), set);
  return LatticeFunction(std::move(grid), std::move(sets));
}

bool LatticeFunction::leq(const LatticeFunction& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("lattice functions on different grids");
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (!sets_[i].is_subset_of(other.sets_[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// DecreasingNet

DecreasingNet DecreasingNet::chain(std::vector<PointSet> members) {
  if (members.empty()) throw std::invalid_argument("a net needs at least one member");
  DecreasingNet net;
  net.chain_ = std::move(members);
  return net;
}

DecreasingNet DecreasingNet::parametric(Family family, Rational eps0, std::size_t max_halvings,
                                        std::size_t patience) {
  if (!family) throw std::invalid_argument("empty family");
  if (eps0 <= 0) throw std::invalid_argument("initial parameter must be positive");
  DecreasingNet net;
  net.family_ = std::move(family);
  net.eps0_ = std::move(eps0);
  net.max_halvings_ = max_halvings;
  net.patience_ = std::max<std::size_t>(1, patience);
  return net;
}

std::vector<PointSet> DecreasingNet::sample() const {
  auto check_step = [](const PointSet& prev, const PointSet& next, std::size_t k) {
    if (!next.is_subset_of(prev)) {
      throw NetError(NetError::Kind::NotDecreasing,
                     "net is not decreasing: member " + std::to_string(k) + " is not contained in member " +
                         std::to_string(k - 1));
    }
  };
  if (!family_) {
    for (std::size_t k = 1; k < chain_.size(); ++k) check_step(chain_[k - 1], chain_[k], k);
    return chain_;
  }
  std::vector<PointSet> members;
  Rational eps = eps0_;
  members.push_back(family_(eps));
  std::size_t unchanged = 0;
  for (std::size_t k = 1; k <= max_halvings_; ++k) {
    eps /= 2;
    PointSet next = family_(eps);
    check_step(members.back(), next, k);
    unchanged = next == members.back() ? unchanged + 1 : 0;
    members.push_back(std::move(next));
    if (unchanged >= patience_) return members;
  }
  throw NetError(NetError::Kind::NotStabilizing,
                 "parametric net did not stabilize after " + std::to_string(max_halvings_) + " halvings");
}

// ---------------------------------------------------------------------------
// Isotony and limits

LatticeFunction isotony_apply(const FiniteMetricSpace& space, const PointSet& set, const TimeGrid& grid) {
  std::vector<PointSet> sets;
  sets.reserve(grid.size());
  for (const auto& t : grid.values()) sets.push_back(neighborhood(space, set, Radius(t)));
  return LatticeFunction(grid, std::move(sets));
}

bool isotony_monotone_check(const FiniteMetricSpace& space, const PointSet& g, const PointSet& h,
                            const TimeGrid& grid) {
  if (!g.is_subset_of(h)) return true;
  return isotony_apply(space, g, grid).leq(isotony_apply(space, h, grid));
}

NetLimit net_limit(const FiniteMetricSpace& space, const DecreasingNet& net, const TimeGrid& grid) {
  const std::vector<PointSet> members = net.sample();
  std::vector<PointSet> sets;
  sets.reserve(grid.size());
  for (const auto& t : grid.values()) {
    const Radius radius(t);
    PointSet meet = space.all();
    for (const auto& member : members) meet &= neighborhood(space, member, radius);
    // Interior is the identity in the discrete topology.
    sets.push_back(std::move(meet));
  }
  PointSet infimum = space.all();
  for (const auto& member : members) infimum &= member;
  return {LatticeFunction(grid, std::move(sets)), std::move(infimum), members.size()};
}

// ---------------------------------------------------------------------------
// Nuclei

NucleusSet nucleus(const LatticeFunction& g) {
  // Closure is the identity on finite backends.
  PointSet meet = PointSet::full(g.universe_size());
  for (const auto& s : g.sets()) meet &= s;
  return {std::move(meet)};
}

PointSet nucleus_without_closures(const LatticeFunction& g) {
  PointSet meet = PointSet::full(g.universe_size());
  for (const auto& s : g.sets()) meet &= s;
  return meet;
}

std::vector<SandwichRow> sandwich_check(const FiniteMetricSpace& space, const LatticeFunction& g) {
  const PointSet core = nucleus(g).points;
  std::vector<SandwichRow> rows;
  rows.reserve(g.grid().size());
  for (std::size_t i = 0; i < g.grid().size(); ++i) {
    const Rational& t = g.grid()[i];
    const PointSet spread = neighborhood(space, core, Radius(t));
    // int closure((ġ)^t) = (ġ)^t here.
    rows.push_back({t, spread.is_subset_of(g.at(i)), g.at(i).is_subset_of(spread)});
  }
  return rows;
}

bool sandwich_passes(const std::vector<SandwichRow>& rows) {
  for (const auto& r : rows) {
    if (!r.lower_ok || !r.upper_ok) return false;
  }
  return true;
}

LatticeFunction b_star_lower(const FiniteMetricSpace& space, PointIndex x, const TimeGrid& grid) {
  std::vector<PointSet> sets;
  sets.reserve(grid.size());
  for (const auto& t : grid.values()) sets.push_back(open_ball(space, x, Radius(t)));
  return LatticeFunction(grid, std::move(sets));
}

LatticeFunction b_star_upper(const FiniteMetricSpace& space, PointIndex x, const TimeGrid& grid) {
  std::vector<PointSet> sets;
  sets.reserve(grid.size());
  for (const auto& t : grid.values()) sets.push_back(closed_ball(space, x, Radius(t)));
  return LatticeFunction(grid, std::move(sets));
}

bool class_equivalent(const LatticeFunction& f, const LatticeFunction& g) { return nucleus(f) == nucleus(g); }

bool class_leq(const LatticeFunction& f, const LatticeFunction& g) {
  return nucleus(f).points.is_subset_of(nucleus(g).points);
}

AtomClass make_class(const LatticeFunction& representative) { return {nucleus(representative), representative}; }

bool is_atom(const AtomClass& c) { return c.nucleus.points.size() == 1; }

// ---------------------------------------------------------------------------
// Wave distance

bool TauBracket::contains(const Real& value, const Tolerance& tol) const {
  return tol.compare(lower, value) <= 0 && tol.compare(value, upper) <= 0;
}

namespace {

// Index of the first grid value where a(t) and b(t) meet; size() if never.
std::size_t first_meeting(const LatticeFunction& a, const LatticeFunction& b) {
  const std::size_t m = a.grid().size();
  for (std::size_t i = 0; i < m; ++i) {
    if (a.at(i).intersects(b.at(i))) return i;
  }
  return m;
}

TauBracket bracket_from_index(const std::vector<Real>& doubled, std::size_t i) {
  if (i == doubled.size()) return {doubled.back(), Real::infinity()};
  return {i == 0 ? Real(0) : doubled[i - 1], doubled[i]};
}

std::vector<Real> doubled_grid(const TimeGrid& grid) {
  std::vector<Real> out;
  out.reserve(grid.size());
  for (const auto& t : grid.values()) out.emplace_back(Rational(2) * t);
  return out;
}

}  // namespace

TauBracket wave_distance_classes(const LatticeFunction& a, const LatticeFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("wave distance needs a common grid");
  return bracket_from_index(doubled_grid(a.grid()), first_meeting(a, b));
}

void check_grid_admissible(const FiniteMetricSpace& space, const TimeGrid& grid) {
  const Tolerance& tol = space.tolerance();
  const Real& min_pos = space.min_positive_distance();
  std::string problems;
  if (min_pos.is_finite()) {
    const Real half = Rational(1, 2) * min_pos;
    if (!tol.strictly_less(Real(grid.front()), half)) {
      problems += "smallest grid value " + format_rational(grid.front()) +
                  " must be below half the minimum positive distance (" + half.to_string() + ")";
    }
  }
  if (!tol.strictly_less(space.diameter(), Real(grid.back()))) {
    if (!problems.empty()) problems += "; ";
    problems += "largest grid value " + format_rational(grid.back()) + " must exceed the diameter (" +
                space.diameter().to_string() + ")";
  }
  if (!problems.empty()) throw GridRefused("time grid too coarse: " + problems);
}

TimeGrid default_grid(const FiniteMetricSpace& space, std::size_t count) {
  if (space.size() == 1) return TimeGrid::geometric(Rational(1, 4), Rational(2), count);
  auto as_rational = [](const Real& r) { return r.is_exact() ? r.exact() : rational_from_double(r.to_double()); };
  const TimeGrid grid =
      TimeGrid::geometric(as_rational(space.min_positive_distance()) / 4, 2 * as_rational(space.diameter()), count);
  if (!space.is_exact()) return grid;
  // tau/2 is always a distance value; a grid point sitting on one separates
  // open-ball from closed-ball representatives by a whole bracket.
  std::set<Rational> distances;
  for (PointIndex i = 0; i < space.size(); ++i) {
    for (PointIndex j = i + 1; j < space.size(); ++j) distances.insert(space.distance(i, j).exact());
  }
  std::vector<Rational> values = grid.values();
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    Rational gap = (values[i + 1] - values[i]) / 2;
    while (distances.count(values[i])) {
      values[i] += gap;
      gap /= 2;
    }
  }
  return TimeGrid(std::move(values));
}

std::optional<Real> fit_homothety(const FiniteMetricSpace& space, const std::vector<Real>& tau) {
  const std::size_t n = space.size();
  if (n < 2) return std::nullopt;
  Real num(0);
  Real den(0);
  for (PointIndex i = 0; i < n; ++i) {
    for (PointIndex j = i + 1; j < n; ++j) {
      const Real& d = space.distance(i, j);
      num = num + tau[i * n + j] * d;
      den = den + d * d;
    }
  }
  return num / den;
}

WaveModel wave_model(const FiniteMetricSpace& space, const TimeGrid& grid) {
  check_grid_admissible(space, grid);
  const std::size_t n = space.size();
  const Tolerance& tol = space.tolerance();
  WaveModel model;
  model.n = n;

  std::vector<LatticeFunction> lower_reps;
  std::vector<LatticeFunction> upper_reps;
  lower_reps.reserve(n);
  upper_reps.reserve(n);
  for (PointIndex x = 0; x < n; ++x) {
    lower_reps.push_back(b_star_lower(space, x, grid));
    upper_reps.push_back(b_star_upper(space, x, grid));
    AtomClass c = make_class(lower_reps.back());
    if (c.nucleus.points.empty()) continue;  // least element
    if (!is_atom(c)) {
      model.warnings.push_back("class of b_*[" + space.label(x) + "] has nucleus " + c.nucleus.points.to_string() +
                               ", not a single point");
      continue;
    }
    model.atoms.push_back(std::move(c));
    model.atom_points.push_back(x);
  }

  model.tau.assign(n * n, Real(0));
  model.brackets.assign(n * n, TauBracket{Real(0), Real(0)});
  const std::vector<Real> doubled = doubled_grid(grid);
  for (PointIndex x = 0; x < n; ++x) {
    for (PointIndex y = x; y < n; ++y) {
      Real tau = wave_distance_points(space, x, y);
      const std::size_t meet = first_meeting(lower_reps[x], lower_reps[y]);
      TauBracket bracket = bracket_from_index(doubled, meet);
      if (!bracket.contains(tau, tol)) model.brackets_contain_tau = false;
      if (first_meeting(upper_reps[x], upper_reps[y]) != meet) {
        model.representative_independent = false;
        model.warnings.push_back("bracket for (" + space.label(x) + ", " + space.label(y) +
                                 ") changes between b_* and b^* representatives: a grid value equals tau/2");
      }
      const Real err = (tau - space.distance(x, y)).abs();
      model.max_abs_error = max(model.max_abs_error, err);
      model.tau[x * n + y] = tau;
      model.tau[y * n + x] = tau;
      model.brackets[x * n + y] = bracket;
      model.brackets[y * n + x] = std::move(bracket);
    }
  }

  model.defects = condition2_defects(space);
  for (const auto& d : model.defects) model.max_defect = max(model.max_defect, d);
  model.homothety = fit_homothety(space, model.tau);
  if (tol.compare(model.max_defect, 0) > 0 && tol.compare(model.max_abs_error, 0) > 0) {
    model.warnings.push_back("condition 2 fails (max defect " + model.max_defect.to_string() +
                             "); tau differs from d by up to " + model.max_abs_error.to_string());
  }
  return model;
}

}  // namespace wavemodel
