#pragma once

#include "wavemodel/metric_space.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavemodel {

/// Strictly increasing positive rationals t_1 < ... < t_m with m >= 2; the
/// sampled part of the half-line on which lattice-valued functions live.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<Rational> values);

  static TimeGrid linear(const Rational& lo, const Rational& hi, std::size_t count);
  /// Interior points are the doubles of lo*(hi/lo)^(i/(m-1)) taken as exact
  /// rationals; both ends are exact.
  static TimeGrid geometric(const Rational& lo, const Rational& hi, std::size_t count);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& front() const { return values_.front(); }
  const Rational& back() const { return values_.back(); }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.values_ == b.values_; }

 private:
  std::vector<Rational> values_;
};

/// A monotone open-set-valued function of t sampled on a grid. Construction
/// rejects non-monotone data: every element of the order closure grows in t.
class LatticeFunction {
 public:
  LatticeFunction(TimeGrid grid, std::vector<PointSet> sets);

  static LatticeFunction constant(TimeGrid grid, const PointSet& set);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<PointSet>& sets() const { return sets_; }
  const PointSet& at(std::size_t i) const { return sets_.at(i); }
  std::size_t universe_size() const { return sets_.front().universe_size(); }

  /// Point-wise order f <= g.
  bool leq(const LatticeFunction& other) const;

  friend bool operator==(const LatticeFunction& a, const LatticeFunction& b) {
    return a.grid_ == b.grid_ && a.sets_ == b.sets_;
  }

 private:
  TimeGrid grid_;
  std::vector<PointSet> sets_;
};

class NetError : public std::runtime_error {
 public:
  enum class Kind { NotDecreasing, NotStabilizing };
  NetError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A decreasing net of open sets: either an explicit chain G_1 ⊇ ... ⊇ G_k or
/// a family G_eps sampled at eps_k = eps_0 * 2^-k until it stabilizes.
class DecreasingNet {
 public:
  using Family = std::function<PointSet(const Rational& eps)>;

  static DecreasingNet chain(std::vector<PointSet> members);
  /// Sampling stops once `patience` successive refinements return the same
  /// set; more than `max_halvings` halvings without that is an error.
  static DecreasingNet parametric(Family family, Rational eps0, std::size_t max_halvings = 64,
                                  std::size_t patience = 2);

  /// The members actually used: the whole chain, or the sampled prefix of the
  /// family. Throws NetError if the members are not decreasing or the family
  /// never stabilizes.
  std::vector<PointSet> sample() const;

 private:
  DecreasingNet() = default;
  std::vector<PointSet> chain_;
  Family family_;
  Rational eps0_;
  std::size_t max_halvings_ = 64;
  std::size_t patience_ = 2;
};

/// (IG)(t) = G^t on the grid.
LatticeFunction isotony_apply(const FiniteMetricSpace& space, const PointSet& set, const TimeGrid& grid);

/// Whether G ⊆ H implies I(G) <= I(H). Vacuously true when G ⊄ H.
bool isotony_monotone_check(const FiniteMetricSpace& space, const PointSet& g, const PointSet& h,
                            const TimeGrid& grid);

struct NetLimit {
  LatticeFunction function;  // t -> int ∩_α (G_α)^t
  PointSet infimum;          // ∩_α closure(G_α)
  std::size_t members = 0;   // how many net members were used
};

NetLimit net_limit(const FiniteMetricSpace& space, const DecreasingNet& net, const TimeGrid& grid);

/// The closed set ∩_t closure(g(t)).
struct NucleusSet {
  PointSet points;
  friend bool operator==(const NucleusSet& a, const NucleusSet& b) { return a.points == b.points; }
};

NucleusSet nucleus(const LatticeFunction& g);
/// ∩_t g(t) without closures; equals nucleus(g) for every element of the
/// order closure.
PointSet nucleus_without_closures(const LatticeFunction& g);

struct SandwichRow {
  Rational t;
  bool lower_ok = false;  // (ġ)^t ⊆ g(t)
  bool upper_ok = false;  // g(t) ⊆ int closure((ġ)^t)
};

/// Checks the nucleus bounds at every grid value. Failures are reported in
/// the rows, not thrown.
std::vector<SandwichRow> sandwich_check(const FiniteMetricSpace& space, const LatticeFunction& g);
bool sandwich_passes(const std::vector<SandwichRow>& rows);

/// t -> B_t(x)
LatticeFunction b_star_lower(const FiniteMetricSpace& space, PointIndex x, const TimeGrid& grid);
/// t -> int B_t[x] (the closed ball itself in a finite space)
LatticeFunction b_star_upper(const FiniteMetricSpace& space, PointIndex x, const TimeGrid& grid);

bool class_equivalent(const LatticeFunction& f, const LatticeFunction& g);
bool class_leq(const LatticeFunction& f, const LatticeFunction& g);

/// An equivalence class, keyed by its nucleus.
struct AtomClass {
  NucleusSet nucleus;
  LatticeFunction representative;
};

AtomClass make_class(const LatticeFunction& representative);
/// Atoms are exactly the classes with a one-point nucleus.
bool is_atom(const AtomClass& c);

/// Grid bracket around 2*inf{t : a(t) ∩ b(t) ≠ ∅}: [2 t_{i-1}, 2 t_i] where t_i
/// is the first grid value with nonempty intersection. lower = 0 if already
/// intersecting at t_1; upper = infinity if never intersecting on the grid.
struct TauBracket {
  Real lower;
  Real upper;
  bool contains(const Real& value, const Tolerance& tol = {}) const;
  friend bool operator==(const TauBracket& a, const TauBracket& b) {
    return a.lower == b.lower && a.upper == b.upper;
  }
};

TauBracket wave_distance_classes(const LatticeFunction& a, const LatticeFunction& b);

class GridRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws GridRefused unless t_1 < (min positive distance)/2 and t_m > diameter.
void check_grid_admissible(const FiniteMetricSpace& space, const TimeGrid& grid);

/// Geometric, `count` points from (min positive distance)/4 to 2*diameter.
TimeGrid default_grid(const FiniteMetricSpace& space, std::size_t count = 64);

struct WaveModel {
  std::vector<AtomClass> atoms;
  std::vector<PointIndex> atom_points;  // atoms[k] is the class of b_*[atom_points[k]]
  std::size_t n = 0;
  std::vector<Real> tau;                // closed form, row-major n*n
  std::vector<TauBracket> brackets;     // from b_* representatives, row-major n*n
  std::vector<Real> defects;            // condition-2 defects, row-major n*n
  Real max_defect{0};
  Real max_abs_error{0};                // max |tau - d|
  std::optional<Real> homothety;        // least-squares c in tau ≈ c d; absent for n = 1
  bool brackets_contain_tau = true;
  bool representative_independent = true;
  std::vector<std::string> warnings;

  const Real& tau_at(PointIndex i, PointIndex j) const { return tau[i * n + j]; }
  const TauBracket& bracket_at(PointIndex i, PointIndex j) const { return brackets[i * n + j]; }
  const Real& defect_at(PointIndex i, PointIndex j) const { return defects[i * n + j]; }
};

/// Builds the atom set {<b_*[x]>} with the wave distance and the isometry
/// report. Throws GridRefused for a grid that is too coarse.
WaveModel wave_model(const FiniteMetricSpace& space, const TimeGrid& grid);

/// sum tau*d / sum d^2 over off-diagonal pairs; nullopt when n = 1.
std::optional<Real> fit_homothety(const FiniteMetricSpace& space, const std::vector<Real>& tau);

}  // namespace wavemodel
