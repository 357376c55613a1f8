#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "infoloss/reconstruct.hpp"

namespace {

using namespace infoloss;

TEST(Reconstructor, IdentityReproducesCells) {
  const auto d = Distribution::uniform({0.0, -1.0}, {1.0, 1.0});
  const auto rec = train_map_reconstructor(d, System::identity(), 64, 10000, 1);
  const auto batch = sample(d, 1000, 2);
  for (std::size_t i = 0; i < batch.count(); ++i) EXPECT_EQ(rec.cell_for(batch.point(i)), quantize(batch.point(i), 64));
  EXPECT_EQ(rec.training_count(), 10000U);
  EXPECT_EQ(rec.resolution(), 64U);
}

TEST(Reconstructor, ClipperRules) {
  const auto d = Distribution::uniform(-1.0, 1.0);
  const std::uint64_t n = 1024;
  const auto rec = train_map_reconstructor(d, System::center_clipper(0.5), n, 100000, 1);
  for (double y : {-0.9, -0.51, 0.6, 0.999}) EXPECT_EQ(rec.cell_for(Point{y}), quantize(y, n)) << y;
  const auto atom = rec.cell_for(Point{0.0});
  EXPECT_GE(atom.coords[0], -512);
  EXPECT_LT(atom.coords[0], 512);
  const auto mid = rec.reconstruct(Point{0.0});
  EXPECT_GE(mid[0], -0.5);
  EXPECT_LE(mid[0], 0.5);
}

TEST(Reconstructor, QuantizerAtomsMapInsideTheirCell) {
  const auto d = Distribution::uniform(0.0, 1.0);
  for (int k = 3; k <= 8; ++k) {
    const std::uint64_t n = std::uint64_t{1} << k;
    const auto rec = train_map_reconstructor(d, System::uniform_quantizer(8, 0.0, 1.0), n, 50000, 4);
    for (int j = 0; j < 8; ++j) {
      const double y = (j + 0.5) / 8.0;
      const auto c = rec.cell_for(Point{y});
      const std::int64_t per = static_cast<std::int64_t>(n / 8);
      EXPECT_GE(c.coords[0], j * per) << k;
      EXPECT_LT(c.coords[0], (j + 1) * per) << k;
    }
  }
}

TEST(Reconstructor, TiesGoToTheSmallestCell) {
  // Both points clip to 0 and each appears twice.
  const auto d = Distribution::discrete({{0.1}, {0.3}}, {0.5, 0.5});
  SampleBatch batch;
  batch.dim = 1;
  batch.seed = 77;
  batch.values = {0.3, 0.1, 0.3, 0.1};
  const auto rec = Reconstructor::train(batch, d, System::center_clipper(0.5), 16);
  EXPECT_EQ(rec.cell_for(Point{0.0}).coords[0], quantize(0.1, 16).coords[0]);
}

TEST(Reconstructor, UnseenAtomGoesToGlobalModalCell) {
  const auto d = Distribution::uniform(0.0, 1.0);
  SampleBatch batch;
  batch.dim = 1;
  batch.seed = 5;
  batch.values = {0.05, 0.06, 0.07, 0.2};
  const auto rec = Reconstructor::train(batch, d, System::uniform_quantizer(2, 0.0, 1.0), 8);
  // Atom 0.75 never appears in training.
  EXPECT_EQ(rec.cell_for(Point{0.75}).coords[0], 0);
}

TEST(Reconstructor, SecondAxisDroppedUsesModalCell) {
  const auto d = Distribution::product({Distribution::uniform(0.0, 1.0), Distribution::point_mass({0.3})});
  const auto rec = train_map_reconstructor(d, System::projection({0}), 16, 5000, 1);
  const auto c = rec.cell_for(Point{0.52});
  EXPECT_EQ(c.coords, (std::vector<std::int64_t>{8, 4}));
  EXPECT_THROW(rec.cell_for(Point{0.1, 0.2}), ConfigError);
}

TEST(ErrorProbability, Identity) {
  const auto d = Distribution::uniform(0.0, 1.0);
  const auto rec = train_map_reconstructor(d, System::identity(), 1024, 100000, 1);
  EXPECT_LE(error_probability(rec, d, System::identity(), 100000, 2), 0.01);
}

TEST(ErrorProbability, ClipperAtKTen) {
  const auto d = Distribution::uniform(-1.0, 1.0);
  const auto s = System::center_clipper(0.5);
  const auto rec = train_map_reconstructor(d, s, 1024, 1'000'000, 1);
  // Wrong unless the atom's chosen cell (mass 2^-10 of [-1,1]) is hit:
  // P_e = 0.5 - 2^-(k+1).
  const double pe = error_probability(rec, d, s, 1'000'000, 2);
  EXPECT_NEAR(pe, 0.5 - std::ldexp(1.0, -11), 0.01);
  EXPECT_NEAR(pe, 0.4990, 0.01);
}

TEST(ErrorProbability, MagnitudeClipperLosesTheSign) {
  const auto d = Distribution::uniform(-1.0, 1.0);
  const auto s = System::magnitude_clipper(0.5);
  const auto rec = train_map_reconstructor(d, s, 1024, 1'000'000, 1);
  // Atom: 0.5 - 2^-11. Outside: one of two equally likely signs, 0.25.
  EXPECT_NEAR(error_probability(rec, d, s, 1'000'000, 2), 0.75 - std::ldexp(1.0, -11), 0.01);
}

TEST(ErrorProbability, SameSeedIsRejected) {
  const auto d = Distribution::uniform(0.0, 1.0);
  const auto rec = train_map_reconstructor(d, System::identity(), 16, 2000, 9);
  EXPECT_THROW(error_probability(rec, d, System::identity(), 2000, 9), ConfigError);
}

TEST(ErrorProbability, AtomOracleUnavailableIsConfigError) {
  const auto mixed = Distribution::mixture({0.5, 0.5}, {Distribution::uniform(-1.0, 1.0), Distribution::point_mass({0.5})});
  EXPECT_THROW(train_map_reconstructor(mixed, System::square(), 16, 2000, 1), ConfigError);
}

TEST(ErrorSequence, MonotoneOnCatalog) {
  const std::vector<std::pair<Distribution, System>> cases = {
      {Distribution::uniform(-1.0, 1.0), System::center_clipper(0.5)},
      {Distribution::uniform(-1.0, 1.0), System::magnitude_clipper(0.5)},
      {Distribution::uniform(-1.0, 1.0), System::square()},
      {Distribution::uniform(0.0, 1.0), System::uniform_quantizer(8, 0.0, 1.0)},
  };
  for (const auto& [d, s] : cases) {
    const auto seq = error_sequence(d, s, 4, 12, 200000, 3);
    ASSERT_EQ(seq.size(), 9U);
    for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_GE(seq[i].pe + 0.01, seq[i - 1].pe) << describe(s);
  }
}

TEST(ErrorSequence, CellsAndKeysRespectCardinalityBound) {
  const auto d = Distribution::uniform({-1.0, -1.0}, {1.0, 1.0});
  const auto s = System::center_clipper(0.5);
  const auto batch = sample(d, 100000, 3);
  const double diam = support_diameter(d);
  for (std::uint64_t n : {4U, 16U, 64U}) {
    std::set<BinIndex> cells;
    std::set<BinIndex> keys;
    for (std::size_t i = 0; i < batch.count(); ++i) {
      cells.insert(quantize(batch.point(i), n));
      keys.insert(quantize(infoloss::apply(s, batch.point(i)), n));
    }
    EXPECT_LE(static_cast<double>(cells.size()), cell_count_bound(n, diam, 2));
    EXPECT_LE(static_cast<double>(keys.size()), cell_count_bound(n, diam, 2));
  }
}

LossReport report_with_slope(double slope) {
  LossReport r;
  r.relative_slope = slope;
  return r;
}

TEST(FanoCheck, Examples) {
  const auto tight = fano_check(report_with_slope(0.5), {{4, 0.47}, {8, 0.498}, {10, 0.4995}});
  EXPECT_TRUE(tight.satisfied);
  EXPECT_NEAR(tight.margin, 0.0, 0.03);
  EXPECT_TRUE(tight.monotone);
  const auto strict = fano_check(report_with_slope(0.5), {{4, 0.72}, {10, 0.7495}});
  EXPECT_TRUE(strict.satisfied);
  EXPECT_NEAR(strict.margin, 0.25, 0.03);
  const auto id = fano_check(report_with_slope(0.0), {{4, 0.0}, {10, 0.0}});
  EXPECT_TRUE(id.satisfied);
  EXPECT_NEAR(id.margin, 0.0, 0.02);
  const auto bad = fano_check(report_with_slope(0.9), {{4, 0.5}, {5, 0.3}});
  EXPECT_FALSE(bad.satisfied);
  EXPECT_FALSE(bad.monotone);
  EXPECT_THROW(fano_check(report_with_slope(0.1), {}), DataError);
}

TEST(FanoCheck, CatalogRunsSatisfyTheBound) {
  const std::vector<std::pair<Distribution, System>> cases = {
      {Distribution::uniform(-1.0, 1.0), System::center_clipper(0.5)},
      {Distribution::uniform(-1.0, 1.0), System::magnitude_clipper(0.5)},
      {Distribution::uniform(0.0, 1.0), System::identity()},
  };
  for (const auto& [d, s] : cases) {
    const auto rep = loss_report(entropy_curve(d, s, CurveOptions{}), d, s);
    const auto f = fano_check(rep, error_sequence(d, s, 4, 12, 1'000'000, 1));
    EXPECT_TRUE(f.satisfied) << describe(s);
    EXPECT_GE(f.margin, -0.02) << describe(s);
  }
}

}  // namespace
