#include "support.hpp"

#include <gtest/gtest.h>

using namespace wavemodel;
using namespace wavemodel::testing;

namespace {

Real R(long long p, long long q = 1) { return Real(Rational(p, q)); }

TimeGrid grid_of(std::initializer_list<Rational> values) { return TimeGrid(std::vector<Rational>(values)); }

TimeGrid fine_grid(const FiniteMetricSpace& s) { return default_grid(s, 64); }

}  // namespace

TEST(TimeGrid, Validation) {
  EXPECT_THROW(grid_of({Rational(1)}), std::invalid_argument);
  EXPECT_THROW(grid_of({Rational(0), Rational(1)}), std::invalid_argument);
  EXPECT_THROW(grid_of({Rational(2), Rational(1)}), std::invalid_argument);
  EXPECT_THROW(grid_of({Rational(1), Rational(1)}), std::invalid_argument);
  const auto lin = TimeGrid::linear(Rational(1, 10), Rational(1), 10);
  EXPECT_EQ(lin.size(), 10u);
  EXPECT_EQ(lin[1], Rational(2, 10));
  const auto geo = TimeGrid::geometric(Rational(1, 4), Rational(4), 5);
  EXPECT_EQ(geo.front(), Rational(1, 4));
  EXPECT_EQ(geo.back(), Rational(4));
  EXPECT_NEAR(to_double(geo[2]), 1.0, 1e-15);
  for (std::size_t i = 1; i < geo.size(); ++i) EXPECT_LT(geo[i - 1], geo[i]);
}

TEST(LatticeFunction, RejectsDecreasingData) {
  const auto g = grid_of({Rational(1), Rational(2)});
  EXPECT_THROW(LatticeFunction(g, {PointSet(3, {0, 1}), PointSet(3, {0})}), std::invalid_argument);
  EXPECT_THROW(LatticeFunction(g, {PointSet(3)}), std::invalid_argument);
  EXPECT_NO_THROW(LatticeFunction(g, {PointSet(3, {0}), PointSet(3, {0, 2})}));
}

TEST(Isotony, Examples) {
  const auto seg = build_segment_sample(11);
  const auto g = grid_of({Rational(15, 100), Rational(25, 100)});
  EXPECT_EQ(isotony_apply(seg, seg.none(), g), LatticeFunction::constant(g, seg.none()));
  EXPECT_EQ(isotony_apply(seg, seg.all(), g), LatticeFunction::constant(g, seg.all()));
  const auto f = isotony_apply(seg, PointSet(11, {5}), g);
  EXPECT_EQ(f.at(0), PointSet(11, {4, 5, 6}));
  EXPECT_EQ(f.at(1), PointSet(11, {3, 4, 5, 6, 7}));
}

TEST(Isotony, MonotoneCheck) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_space(rng);
    const auto grid = fine_grid(s);
    const PointSet h = random_subset(rng, s.size());
    const PointSet g = h & random_subset(rng, s.size());
    EXPECT_TRUE(isotony_monotone_check(s, g, h, grid));
    EXPECT_TRUE(isotony_monotone_check(s, h, h, grid));
    EXPECT_TRUE(isotony_monotone_check(s, s.all(), s.none(), grid));  // vacuous
  }
}

TEST(DecreasingNet, RejectsGrowingChains) {
  const auto net = DecreasingNet::chain({PointSet(3, {0}), PointSet(3, {0, 1})});
  EXPECT_THROW(net.sample(), NetError);
  EXPECT_THROW(DecreasingNet::chain({}).sample(), std::invalid_argument);
}

TEST(DecreasingNet, ReportsNonStabilizingFamilies) {
  // Alternates between two sets: never two equal refinements in a row, and
  // not decreasing either; either way it is reported, never guessed.
  auto flip = [](const Rational& eps) {
    const bool odd = (boost::multiprecision::denominator(eps) % 3) == 1;
    return odd ? PointSet(2, {0, 1}) : PointSet(2, {0});
  };
  EXPECT_THROW(DecreasingNet::parametric(flip, Rational(1), 10).sample(), NetError);
  // A family that shrinks once per halving for more than max_halvings steps.
  auto slow = [](const Rational& eps) {
    PointSet out(100);
    const double e = to_double(eps);
    for (PointIndex i = 0; i < 100; ++i) {
      if (std::ldexp(1.0, -static_cast<int>(i)) <= e) out.insert(i);
    }
    return out;
  };
  try {
    (void)DecreasingNet::parametric(slow, Rational(1), 20).sample();
    FAIL();
  } catch (const NetError& e) {
    EXPECT_EQ(e.kind(), NetError::Kind::NotStabilizing);
  }
}

TEST(NetLimit, ConstantNetGivesIsotony) {
  const auto seg = build_segment_sample(11);
  const auto grid = fine_grid(seg);
  const PointSet g(11, {2, 3, 7});
  const auto limit = net_limit(seg, DecreasingNet::chain({g, g, g}), grid);
  EXPECT_EQ(limit.function, isotony_apply(seg, g, grid));
  EXPECT_EQ(limit.infimum, g);
}

TEST(NetLimit, ShrinkingBallsOnSampleGiveTheOpenBall) {
  const auto seg = build_segment_sample(101);
  const PointIndex x = 37;
  const auto grid = fine_grid(seg);
  auto family = [&](const Rational& eps) { return open_ball(seg, x, Radius(eps)); };
  const auto limit = net_limit(seg, DecreasingNet::parametric(family, Rational(1)), grid);
  // Once eps is below the spacing the member is {x}, so the limit is B_t(x).
  EXPECT_EQ(limit.function, b_star_lower(seg, x, grid));
  EXPECT_EQ(limit.infimum, PointSet(101, {x}));
  // Direct enumeration at eps = 0.01 * 2^-k.
  for (std::size_t i = 0; i < grid.size(); i += 9) {
    PointSet meet = seg.all();
    for (int k = 0; k < 6; ++k) {
      const Rational eps = Rational(1, 100) / (1 << k);
      meet &= oracle_neighborhood(seg, oracle_neighborhood(seg, PointSet(101, {x}), Real(eps)), Real(grid[i]));
    }
    EXPECT_EQ(limit.function.at(i), meet);
  }
}

TEST(NetLimit, LiesBelowEveryMember) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_space(rng);
    std::vector<PointSet> chain{random_subset(rng, s.size(), true)};
    for (int k = 0; k < 3; ++k) chain.push_back(chain.back() & random_subset(rng, s.size()));
    const auto grid = fine_grid(s);
    const auto limit = net_limit(s, DecreasingNet::chain(chain), grid);
    for (const auto& member : chain) EXPECT_TRUE(limit.function.leq(isotony_apply(s, member, grid)));
    EXPECT_EQ(limit.function, isotony_apply(s, chain.back(), grid));
  }
}

TEST(Nucleus, Examples) {
  const auto seg = build_segment_sample(11);
  const auto grid = fine_grid(seg);
  EXPECT_EQ(nucleus(isotony_apply(seg, PointSet(11, {4}), grid)).points, PointSet(11, {4}));
  EXPECT_EQ(nucleus(LatticeFunction::constant(grid, seg.all())).points, seg.all());
  EXPECT_TRUE(nucleus(LatticeFunction::constant(grid, seg.none())).points.empty());
  // A coarse grid only gives a superset.
  const auto coarse = grid_of({Rational(15, 100), Rational(2)});
  const auto wide = nucleus(isotony_apply(seg, PointSet(11, {4}), coarse)).points;
  EXPECT_TRUE(PointSet(11, {4}).is_subset_of(wide));
  EXPECT_EQ(wide.size(), 3u);
}

TEST(Sandwich, Examples) {
  const auto seg = build_segment_sample(11);
  const auto grid = fine_grid(seg);
  const auto ball_net = net_limit(seg, DecreasingNet::chain({open_ball(seg, 3, Radius(Rational(1, 20)))}), grid);
  EXPECT_TRUE(sandwich_passes(sandwich_check(seg, ball_net.function)));
  const auto empty_rows = sandwich_check(seg, LatticeFunction::constant(grid, seg.none()));
  EXPECT_TRUE(sandwich_passes(empty_rows));
  EXPECT_EQ(empty_rows.size(), grid.size());
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet g = random_subset(rng, 11);
    const auto f = isotony_apply(seg, g, grid);
    EXPECT_TRUE(sandwich_passes(sandwich_check(seg, f)));
    EXPECT_EQ(nucleus(f).points, g);
  }
}

TEST(Sandwich, ReportsViolations) {
  // Not an element of the order closure: g(t) = Ω while the nucleus is {0}.
  const auto seg = build_segment_sample(11);
  const auto g = grid_of({Rational(1, 100), Rational(2, 100)});
  const LatticeFunction f(g, {PointSet(11, {0}), seg.all()});
  const auto rows = sandwich_check(seg, f);
  EXPECT_FALSE(sandwich_passes(rows));
  EXPECT_TRUE(rows[1].lower_ok);
  EXPECT_FALSE(rows[1].upper_ok);
}

TEST(BStar, Examples) {
  const auto disc = build_discrete(4);
  const auto g = grid_of({Rational(1, 4), Rational(1), Rational(3)});
  EXPECT_EQ(b_star_lower(disc, 1, g).at(1), PointSet(4, {1}));
  EXPECT_EQ(b_star_upper(disc, 1, g).at(1), disc.all());
  EXPECT_TRUE(b_star_lower(disc, 1, g).leq(b_star_upper(disc, 1, g)));
  const auto seg = build_segment_sample(11);
  const auto g2 = grid_of({Rational(1, 10), Rational(2, 10)});
  EXPECT_EQ(b_star_lower(seg, 5, g2).at(0), PointSet(11, {5}));
  EXPECT_EQ(b_star_lower(seg, 5, g2).at(1), PointSet(11, {4, 5, 6}));
  EXPECT_EQ(b_star_upper(seg, 5, g2).at(0), PointSet(11, {4, 5, 6}));
  EXPECT_EQ(b_star_upper(seg, 5, g2).at(1), PointSet(11, {3, 4, 5, 6, 7}));
}

TEST(Classes, EquivalenceAndOrder) {
  const auto seg = build_segment_sample(11);
  const auto grid = fine_grid(seg);
  const auto lo = b_star_lower(seg, 2, grid);
  const auto hi = b_star_upper(seg, 2, grid);
  EXPECT_TRUE(class_equivalent(lo, hi));
  const auto zero = LatticeFunction::constant(grid, seg.none());
  EXPECT_TRUE(class_leq(zero, lo));
  EXPECT_FALSE(class_equivalent(zero, lo));
  EXPECT_FALSE(class_equivalent(lo, b_star_lower(seg, 3, grid)));
  EXPECT_TRUE(class_leq(lo, LatticeFunction::constant(grid, seg.all())));
}

TEST(Atoms, SingletonNucleusOnly) {
  const auto seg = build_segment_sample(11);
  const auto grid = fine_grid(seg);
  EXPECT_TRUE(is_atom(make_class(b_star_lower(seg, 6, grid))));
  EXPECT_FALSE(is_atom(make_class(LatticeFunction::constant(grid, seg.all()))));
  EXPECT_FALSE(is_atom(make_class(LatticeFunction::constant(grid, seg.none()))));
}

TEST(WaveDistanceClasses, Examples) {
  const auto seg = build_segment_sample(101);
  const auto grid = fine_grid(seg);
  const auto a = b_star_lower(seg, 40, grid);
  EXPECT_EQ(wave_distance_classes(a, a).lower, R(0));
  const auto disc = build_discrete(3);
  const auto g = TimeGrid::linear(Rational(1, 8), Rational(2), 16);
  const auto bracket = wave_distance_classes(b_star_lower(disc, 0, g), b_star_lower(disc, 2, g));
  EXPECT_EQ(bracket.lower, R(2));
  EXPECT_EQ(bracket.upper, R(9, 4));
  EXPECT_TRUE(bracket.contains(wave_distance_points(disc, 0, 2)));
  const auto dense = TimeGrid::linear(Rational(1, 200), Rational(2), 400);
  const auto mid = wave_distance_classes(b_star_lower(seg, 25, dense), b_star_lower(seg, 75, dense));
  EXPECT_TRUE(mid.contains(R(1, 2)));
  EXPECT_LE(mid.upper - mid.lower, R(1, 100));
  EXPECT_THROW(wave_distance_classes(a, b_star_lower(seg, 1, dense)), std::invalid_argument);
}

TEST(WaveDistanceClasses, NeverMeetingGivesInfiniteUpper) {
  const auto disc = build_discrete(2);
  const auto g = grid_of({Rational(1, 4), Rational(1, 2)});
  const auto bracket = wave_distance_classes(b_star_lower(disc, 0, g), b_star_lower(disc, 1, g));
  EXPECT_EQ(bracket.lower, R(1));
  EXPECT_TRUE(bracket.upper.is_infinite());
}

TEST(GridAdmissibility, RefusesCoarseGrids) {
  const auto seg = build_segment_sample(11);
  EXPECT_THROW(check_grid_admissible(seg, grid_of({Rational(1, 20), Rational(2)})), GridRefused);
  EXPECT_THROW(check_grid_admissible(seg, grid_of({Rational(1, 100), Rational(1)})), GridRefused);
  EXPECT_NO_THROW(check_grid_admissible(seg, grid_of({Rational(1, 100), Rational(101, 100)})));
  EXPECT_NO_THROW(check_grid_admissible(seg, default_grid(seg)));
  try {
    wave_model(seg, grid_of({Rational(1), Rational(2)}));
    FAIL();
  } catch (const GridRefused& e) {
    EXPECT_NE(std::string(e.what()).find("minimum positive distance"), std::string::npos);
  }
}

TEST(DefaultGrid, AvoidsDistanceValuesOnExactSpaces) {
  for (const auto& s : {build_segment_sample(33), build_discrete(5),
                        build_from_graph({{0, 1, Real(1)}, {1, 2, Real(2)}, {2, 3, Real(4)}})}) {
    const auto grid = default_grid(s);
    ASSERT_EQ(grid.size(), 64u);
    EXPECT_EQ(grid.front(), s.min_positive_distance().exact() / 4);
    EXPECT_EQ(grid.back(), 2 * s.diameter().exact());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (k > 0) EXPECT_LT(grid[k - 1], grid[k]);
      for (PointIndex i = 0; i < s.size(); ++i) {
        for (PointIndex j = 0; j < s.size(); ++j) EXPECT_NE(grid[k], s.distance(i, j).exact());
      }
    }
  }
}

TEST(WaveModel, DiscreteIsAHomothety) {
  const auto s = build_discrete(10);
  const auto model = wave_model(s, default_grid(s));
  EXPECT_EQ(model.atoms.size(), 10u);
  for (PointIndex x = 0; x < 10; ++x) {
    for (PointIndex y = 0; y < 10; ++y) EXPECT_EQ(model.tau_at(x, y), Rational(2) * s.distance(x, y));
  }
  ASSERT_TRUE(model.homothety.has_value());
  EXPECT_TRUE(model.homothety->is_exact());
  EXPECT_EQ(*model.homothety, R(2));
  EXPECT_EQ(model.max_defect, R(1));
  EXPECT_TRUE(model.brackets_contain_tau);
  EXPECT_TRUE(model.representative_independent);
  EXPECT_FALSE(model.warnings.empty());
}

TEST(WaveModel, SinglePoint) {
  const auto s = build_discrete(1);
  const auto model = wave_model(s, default_grid(s));
  EXPECT_EQ(model.atoms.size(), 1u);
  EXPECT_EQ(model.tau, std::vector<Real>{R(0)});
  EXPECT_FALSE(model.homothety.has_value());
}

TEST(WaveModel, PathGraphFlagsConditionTwo) {
  const auto s = build_from_graph({{0, 1, R(1)}, {1, 2, R(1)}});
  const auto model = wave_model(s, default_grid(s));
  EXPECT_EQ(model.tau_at(0, 1), R(2));
  EXPECT_EQ(model.tau_at(0, 2), R(2));
  EXPECT_EQ(model.max_abs_error, R(1));
  EXPECT_GT(model.max_defect, R(0));
  ASSERT_FALSE(model.warnings.empty());
  EXPECT_NE(model.warnings.back().find("condition 2 fails"), std::string::npos);
}

TEST(WaveModel, RepresentativeDependenceIsReportedOnTauHalfGrid) {
  // Grid value 1 = tau/2 for the discrete pair: the closed balls meet there,
  // the open balls do not.
  const auto s = build_discrete(2);
  const auto model = wave_model(s, grid_of({Rational(1, 4), Rational(1), Rational(3)}));
  EXPECT_FALSE(model.representative_independent);
  EXPECT_TRUE(model.brackets_contain_tau);
}

TEST(FitHomothety, ThroughTheOrigin) {
  const auto s = build_segment_sample(3);
  std::vector<Real> tau;
  for (PointIndex i = 0; i < 3; ++i) {
    for (PointIndex j = 0; j < 3; ++j) tau.push_back(Rational(3) * s.distance(i, j));
  }
  EXPECT_EQ(*fit_homothety(s, tau), R(3));
  EXPECT_FALSE(fit_homothety(build_discrete(1), {R(0)}).has_value());
}
