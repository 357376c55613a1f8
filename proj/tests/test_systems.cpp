#include <cmath>

#include <gtest/gtest.h>

#include "infoloss/systems.hpp"

namespace {

using namespace infoloss;

Point run(const System& s, Point x) { return infoloss::apply(s, x); }

TEST(Apply, CenterClipper) {
  const auto s = System::center_clipper(0.5);
  EXPECT_EQ(run(s, {0.3}), Point{0.0});
  EXPECT_EQ(run(s, {0.8}), Point{0.8});
  EXPECT_EQ(run(s, {-0.8}), Point{-0.8});
  EXPECT_EQ(run(s, {0.5}), Point{0.0});
}

TEST(Apply, IdentityAndOthers) {
  EXPECT_EQ(run(System::identity(), {0.2, -0.7}), (Point{0.2, -0.7}));
  EXPECT_EQ(run(System::magnitude_clipper(0.5), {-0.8}), Point{0.8});
  EXPECT_EQ(run(System::square(), {-0.5}), Point{0.25});
  EXPECT_EQ(run(System::magnitude(), {-0.5}), Point{0.5});
  EXPECT_EQ(run(System::affine(2.0, 1.0), {0.5}), Point{2.0});
  EXPECT_EQ(run(System::projection({1}), {0.1, 0.2, 0.3}), Point{0.2});
  EXPECT_EQ(run(System::projection({2, 0}), {0.1, 0.2, 0.3}), (Point{0.3, 0.1}));
}

TEST(Apply, QuantizerMidpointsAndUpperTies) {
  const auto q = System::uniform_quantizer(8, 0.0, 1.0);
  EXPECT_EQ(run(q, {0.0}), Point{0.0625});
  EXPECT_EQ(run(q, {0.125}), Point{0.1875});
  EXPECT_EQ(run(q, {0.999}), Point{0.9375});
  EXPECT_EQ(run(q, {1.0}), Point{0.9375});
  EXPECT_EQ(run(q, {-5.0}), Point{0.0625});
}

TEST(Apply, DimensionMismatchAndBadParameters) {
  const auto cw = System::componentwise({System::identity(), System::square()});
  EXPECT_THROW(run(cw, {0.1, 0.2, 0.3}), ConfigError);
  EXPECT_THROW(run(System::projection({3}), {0.1, 0.2}), ConfigError);
  EXPECT_THROW(validate(System::center_clipper(0.0), 1), ConfigError);
  EXPECT_THROW(validate(System::affine(0.0, 1.0), 1), ConfigError);
  EXPECT_THROW(validate(System::uniform_quantizer(1, 0.0, 1.0), 1), ConfigError);
  EXPECT_THROW(validate(System::uniform_quantizer(4, 1.0, 1.0), 1), ConfigError);
  EXPECT_THROW(validate(System::compose(System::identity(), System::magnitude_clipper(-1.0)), 1), ConfigError);
}

TEST(Apply, RepeatedEvaluationIsBitIdentical) {
  const auto s = System::compose(System::affine(1.7, -0.3), System::magnitude_clipper(0.4));
  const auto batch = sample(Distribution::uniform(-1.0, 1.0), 1000, 4);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto x = batch.point(i);
    EXPECT_EQ(infoloss::apply(s, x), infoloss::apply(s, x));
  }
}

TEST(Apply, ComponentwiseCommutesWithAxisSlicing) {
  const std::vector<System> parts = {System::center_clipper(0.3), System::square(),
                                     System::uniform_quantizer(4, -1.0, 1.0)};
  const auto s = System::componentwise(parts);
  const auto batch = sample(Distribution::uniform({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}), 2000, 8);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto x = batch.point(i);
    const Point y = infoloss::apply(s, x);
    for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(y[a], infoloss::apply(parts[a], Point{x[a]})[0]);
  }
}

TEST(Apply, ConstantSetPointsMapToTheirAtomExactly) {
  const std::vector<System> catalog = {
      System::center_clipper(0.5), System::magnitude_clipper(0.25), System::uniform_quantizer(8, 0.0, 1.0),
      System::uniform_quantizer(5, -1.0, 2.0), System::compose(System::affine(2.0, 0.1), System::center_clipper(0.5)),
      System::compose(System::uniform_quantizer(4, 0.0, 1.0), System::affine(3.0, -1.0))};
  const auto batch = sample(Distribution::uniform(-1.0, 1.0), 5000, 13);
  for (const auto& s : catalog) {
    const auto sets = scalar_constant_sets(s);
    ASSERT_TRUE(sets.has_value()) << describe(s);
    for (double x : batch.values) {
      for (const auto& iv : *sets) {
        if (x > iv.lo && x < iv.hi) {
          EXPECT_EQ(scalar_apply(s, x), iv.value) << describe(s) << " x=" << x;
          EXPECT_TRUE(scalar_is_constant(s, x));
        }
      }
    }
  }
}

TEST(Preimages, InvertTheMap) {
  const std::vector<System> catalog = {System::identity(),          System::affine(-2.0, 0.5),
                                       System::center_clipper(0.5), System::magnitude_clipper(0.5),
                                       System::square(),            System::magnitude(),
                                       System::compose(System::affine(0.5, 0.0), System::square())};
  const auto batch = sample(Distribution::uniform(-1.0, 1.0), 2000, 5);
  for (const auto& s : catalog) {
    for (double x : batch.values) {
      if (scalar_is_constant(s, x)) continue;
      const double y = scalar_apply(s, x);
      const auto pre = scalar_preimages(s, y);
      ASSERT_FALSE(pre.empty()) << describe(s);
      EXPECT_LE(pre.size(), scalar_max_preimages(s));
      bool found = false;
      for (const auto& p : pre) {
        EXPECT_NEAR(scalar_apply(s, p.x), y, 1e-12) << describe(s);
        found = found || std::abs(p.x - x) < 1e-12;
      }
      EXPECT_TRUE(found) << describe(s) << " x=" << x;
    }
  }
}

TEST(AtomTable, CenterClipper) {
  const auto t = atom_table(System::center_clipper(0.5), Distribution::uniform(-1.0, 1.0));
  ASSERT_EQ(t.entries.size(), 1U);
  EXPECT_EQ(t.entries[0].y, Point{0.0});
  ASSERT_EQ(t.entries[0].region.size(), 1U);
  EXPECT_EQ(t.entries[0].region[0].lo, Point{-0.5});
  EXPECT_EQ(t.entries[0].region[0].hi, Point{0.5});
  EXPECT_DOUBLE_EQ(t.entries[0].mass, 0.5);
}

TEST(AtomTable, QuantizerHasEightEqualAtoms) {
  const auto t = atom_table(System::uniform_quantizer(8, 0.0, 1.0), Distribution::uniform(0.0, 1.0));
  ASSERT_EQ(t.entries.size(), 8U);
  for (const auto& e : t.entries) EXPECT_DOUBLE_EQ(e.mass, 0.125);
  EXPECT_DOUBLE_EQ(t.total_mass(), 1.0);
}

TEST(AtomTable, IdentityIsEmptyAndZeroMassAtomsAreOmitted) {
  EXPECT_TRUE(atom_table(System::identity(), Distribution::uniform(0.0, 1.0)).entries.empty());
  EXPECT_TRUE(atom_table(System::square(), Distribution::truncated_gaussian({0.0}, {1.0}, {-2.0}, {2.0})).entries.empty());
  const auto t = atom_table(System::uniform_quantizer(8, 0.0, 1.0), Distribution::uniform(0.0, 0.5));
  EXPECT_EQ(t.entries.size(), 4U);
  for (const auto& e : t.entries) EXPECT_GT(e.mass, 0.0);
}

TEST(AtomTable, MassesMatchRegionProbability) {
  const auto d = Distribution::truncated_gaussian({0.0, 0.0}, {1.0, 1.0}, {-2.0, -2.0}, {2.0, 2.0});
  const auto s = System::componentwise({System::center_clipper(0.5), System::uniform_quantizer(2, -2.0, 2.0)});
  const auto t = atom_table(s, d);
  ASSERT_EQ(t.entries.size(), 2U);
  for (const auto& e : t.entries) {
    double m = 0.0;
    for (const auto& b : e.region) m += region_prob(d, b);
    EXPECT_DOUBLE_EQ(e.mass, m);
  }
  EXPECT_NEAR(t.total_mass(), region_prob(d, Box{{-0.5, -2.0}, {0.5, 2.0}}), 1e-15);
}

TEST(AnalyticLoss, Examples) {
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::center_clipper(0.5), Distribution::uniform(-1.0, 1.0)), 0.5);
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::uniform_quantizer(8, 0.0, 1.0), Distribution::uniform(0.0, 1.0)), 1.0);
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::identity(), Distribution::uniform(0.0, 1.0)), 0.0);
  for (int i = 1; i <= 9; ++i) {
    const double c = i / 10.0;
    EXPECT_NEAR(*analytic_relative_loss(System::center_clipper(c), Distribution::uniform(-1.0, 1.0)), c, 1e-15);
  }
}

TEST(AnalyticLoss, MultiAxisCases) {
  const auto u2 = Distribution::uniform({0.0, 0.0}, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(
      *analytic_relative_loss(System::componentwise({System::identity(), System::uniform_quantizer(8, 0.0, 1.0)}), u2), 0.5);
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::projection({0}), u2), 0.5);
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::center_clipper(0.5), Distribution::uniform({-1.0, -1.0}, {1.0, 1.0})), 0.5);
}

TEST(AnalyticLoss, CompositionWithInjectiveOuterKeepsInnerLoss) {
  const auto d = Distribution::uniform(0.0, 1.0);
  const auto q = System::uniform_quantizer(8, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::compose(q, System::affine(3.0, -2.0)), d), 1.0);
  const auto dc = Distribution::uniform(-1.0, 1.0);
  const auto clip = System::center_clipper(0.5);
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::compose(clip, System::affine(-2.0, 7.0)), dc), 0.5);
  // Pulling the clipper's set back through x -> 2x gives [-0.25, 0.25].
  EXPECT_DOUBLE_EQ(*analytic_relative_loss(System::compose(System::affine(2.0, 0.0), clip), dc), 0.25);
}

TEST(AnalyticLoss, NotAvailableWhenHypothesesFail) {
  EXPECT_FALSE(analytic_relative_loss(System::compose(System::square(), System::center_clipper(0.5)),
                                      Distribution::uniform(-1.0, 1.0)));
  const auto mixed = Distribution::mixture({0.5, 0.5}, {Distribution::uniform(0.0, 1.0), Distribution::point_mass({0.5})});
  EXPECT_FALSE(analytic_relative_loss(System::center_clipper(0.2), mixed));
  EXPECT_FALSE(analytic_relative_loss(System::identity(), Distribution::discrete({{0.0}, {1.0}}, {0.5, 0.5})));
}

TEST(Decompose, CompositionAcrossAxes) {
  const auto s = System::compose(System::projection({2, 0}),
                                 System::componentwise({System::square(), System::center_clipper(0.5)}));
  EXPECT_EQ(output_dim(s, 3), 2U);
  EXPECT_EQ(run(s, {0.3, 0.9, -0.5}), (Point{0.25, 0.0}));
  const auto plan = decompose(s, 3);
  EXPECT_FALSE(plan.axis_maps[1].has_value());
  EXPECT_EQ(plan.output_axes, (std::vector<std::size_t>{2, 0}));
}

}  // namespace
