#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wavinv/error.hpp"
#include "wavinv/wavelet/quadtree.hpp"

using namespace wavinv;
using namespace wavinv::wavelet;

namespace {

CoefficientQuadtree random_dense_tree(int S, std::uint64_t seed) {
  auto t = make_parameter_tree(S);
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd;
  for (auto& v : t.scaling.storage()) v = nd(g);
  for (int j = 0; j < S; ++j)
    for (int b = 0; b < kBands; ++b) {
      for (auto& v : t.details[j][b].storage()) v = nd(g) * std::pow(0.5, j);
      t.mask[j][b].fill(1);
    }
  return t;
}

}  // namespace

TEST(Quadtree, ParameterTreeShapes) {
  const auto t = make_parameter_tree(5);
  EXPECT_EQ(t.grid_rows(), 64u);
  EXPECT_EQ(t.scaling.rows(), 2u);
  for (int j = 0; j < 5; ++j)
    for (int b = 0; b < kBands; ++b) {
      EXPECT_EQ(t.details[j][b].rows(), std::size_t(2) << j);
      if (j > 0) EXPECT_EQ(t.details[j][b].size(), 4 * t.details[j - 1][b].size());
    }
  t.validate();
}

TEST(Quadtree, ActiveBasisCounts) {
  for (int S = 0; S <= 5; ++S) {
    const auto t = random_dense_tree(S, 3);
    EXPECT_EQ(count_active_bases(t, S), std::size_t{1} << (2 * (S + 1)));
    EXPECT_EQ(count_active_bases(t, 0), 4u);
  }
  const auto empty = make_parameter_tree(4);
  EXPECT_EQ(count_active_bases(empty, 4), 4u);
  EXPECT_THROW(count_active_bases(empty, 5), LevelError);
}

TEST(Quadtree, ThresholdMatchesLinearScan) {
  const auto t = random_dense_tree(4, 9);
  const double norm = 2.7;
  const auto th = threshold_tree(t, 0.02, norm);
  for (int j = 0; j < 4; ++j)
    for (int b = 0; b < kBands; ++b)
      for (std::size_t i = 0; i < t.details[j][b].size(); ++i) {
        const double v = t.details[j][b].storage()[i];
        const bool keep = std::abs(v) >= 0.02 * norm;
        EXPECT_EQ(bool(th.mask[j][b].storage()[i]), keep);
        EXPECT_EQ(th.details[j][b].storage()[i], keep ? v : 0.0);
      }
  EXPECT_EQ(th.scaling, t.scaling);
  EXPECT_EQ(count_active_bases(threshold_tree(t, 1e9, 1.0), 4), 4u);
  EXPECT_EQ(count_active_bases(threshold_tree(t, 1e-300, 1.0), 4), count_active_bases(t, 4));
  EXPECT_THROW(threshold_tree(t, 0.0, 1.0), ParameterError);
  EXPECT_THROW(threshold_tree(t, -1.0, 1.0), ParameterError);
}

TEST(Quadtree, ZeroTreeValidation) {
  auto t = make_parameter_tree(3);
  t.band_mask(1, Band::diagonal)(3, 2) = 1;
  EXPECT_THROW(t.validate_zero_tree(), InvariantError);
  t.band_mask(0, Band::diagonal)(1, 1) = 1;
  EXPECT_NO_THROW(t.validate_zero_tree());
  t.band(2, Band::vertical)(0, 0) = 1.0;  // masked but nonzero
  EXPECT_THROW(t.validate(), InvariantError);
}

TEST(Quadtree, CropIsLeadingBlock) {
  const auto t = random_dense_tree(5, 21);
  LiftingConfig cfg;
  const auto full = inverse_transform_2d(t, cfg);
  ASSERT_EQ(full.rows(), 64u);
  const auto c = crop_reconstruction(full);
  ASSERT_EQ(c.rows(), 32u);
  for (std::size_t i = 0; i < 32; ++i)
    for (std::size_t j = 0; j < 32; ++j) EXPECT_EQ(c(i, j), full(i, j));
  EXPECT_DOUBLE_EQ(c.domain.x1, 1.0);
  const auto n = crop_reconstruction_nodes(full);
  EXPECT_EQ(n.rows(), 33u);
  EXPECT_DOUBLE_EQ(n.x(32), 1.0);
  GridField2D bad;
  bad.values = Array2D<double>(32, 32);
  bad.sampling = Sampling::periodic;
  EXPECT_THROW(crop_reconstruction(bad), ShapeError);
}

TEST(Quadtree, ConstantReconstructionCrop) {
  auto t = make_parameter_tree(2);
  t.scaling.fill(0.4);
  const auto full = inverse_transform_2d(with_levels(t, 5), LiftingConfig{});
  const auto cropped = crop_reconstruction(full);
  for (double v : cropped.values.storage()) EXPECT_NEAR(v, 0.4, 1e-14);
}

TEST(Quadtree, LinearFieldReconstructedThenCropped) {
  LiftingConfig cfg;
  GridField2D f;
  f.values = Array2D<double>(64, 64);
  f.domain = Rect{0, 2, 0, 2};
  f.sampling = Sampling::periodic;
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) f(r, c) = 2.0 * (f.x(c) + f.y(r) - 1.0);
  const auto tree = forward_transform_2d(f, 5, cfg);
  EXPECT_EQ(tree.scaling.rows(), 2u);
  const auto out = crop_reconstruction(inverse_transform_2d(tree, cfg));
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t c = 0; c < 32; ++c)
      EXPECT_NEAR(out(r, c), 2.0 * (c / 32.0 + r / 32.0 - 1.0), 1e-10);
}

TEST(Quadtree, WithLevelsPadsAndTruncates) {
  const auto t = random_dense_tree(2, 5);
  const auto p = with_levels(t, 4);
  EXPECT_EQ(p.max_level, 4);
  EXPECT_EQ(count_active_bases(p, 4), count_active_bases(t, 2));
  EXPECT_EQ(with_levels(p, 2), t);
}
