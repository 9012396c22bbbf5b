#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pdfw/regularization.hpp"
#include "properties.hpp"

namespace pdfw {
namespace {

using testing::random_vector;

const std::vector<PixelOffset> kLine = {{1, 0}};

TEST(DiffStack, ShapesAndInvariants) {
  const DiffStack d(5, 4, default_offsets_2d());
  EXPECT_EQ(d.num_blocks(), 4u);
  EXPECT_EQ(d.block_len(0), 4u * 4u);  // (1,0)
  EXPECT_EQ(d.block_len(1), 5u * 3u);  // (0,1)
  EXPECT_EQ(d.block_len(2), 4u * 3u);  // (1,1)
  EXPECT_EQ(d.block_len(3), 4u * 3u);  // (1,-1)
  EXPECT_EQ(d.total_len(), 16u + 15u + 12u + 12u);
  EXPECT_EQ(d.max_block_len(), 16u);
  for (std::size_t i = 0; i < d.num_blocks(); ++i) {
    EXPECT_LE(d.block_len(i), d.image_len());
    const Eigen::MatrixXd m = testing::materialize(d.block(i));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      EXPECT_EQ((m.row(r).array() != 0.0).count(), 2);
      EXPECT_EQ(m.row(r).maxCoeff(), 1.0);
      EXPECT_EQ(m.row(r).minCoeff(), -1.0);
    }
  }
}

TEST(DiffStack, RejectsBadOffsetsAndIndices) {
  EXPECT_THROW(DiffStack(4, 4, {{0, 0}}), ContractViolation);
  EXPECT_THROW(DiffStack(4, 4, {{1, 0}, {1, 0}}), ContractViolation);
  EXPECT_THROW(DiffStack(4, 4, {{4, 0}}), ContractViolation);
  const DiffStack d(4, 4, kLine);
  EXPECT_THROW(d.block(1), ContractViolation);
  EXPECT_THROW(diff_forward(d, 3, Vector(16, 0.0)), ContractViolation);
  EXPECT_THROW(diff_adjoint(d, 0, Vector(5, 0.0)), ContractViolation);
}

TEST(DiffForward, ConstantImageGivesZero) {
  const DiffStack d(6, 5, default_offsets_2d());
  const Vector x(30, 2.75);
  for (std::size_t i = 0; i < d.num_blocks(); ++i) {
    EXPECT_EQ(diff_forward(d, i, x), Vector(d.block_len(i), 0.0));
  }
}

TEST(DiffForward, LineStencil) {
  const DiffStack d(3, 1, kLine);
  EXPECT_EQ(diff_forward(d, 0, Vector{0, 1, 3}), (Vector{1, 2}));
}

TEST(DiffForward, MatchesDenseAssemblyOracle) {
  std::mt19937_64 rng(31);
  const auto x = random_vector(9, rng);
  for (PixelOffset o : {PixelOffset{1, 1}, PixelOffset{1, -1}, PixelOffset{-2, 1}, PixelOffset{0, 2}}) {
    const DiffStack d(3, 3, {o});
    const Eigen::MatrixXd m = testing::dense_diff_block(3, 3, o);
    EXPECT_LT(testing::max_abs_diff(diff_forward(d, 0, x), m * testing::to_eigen(x)), 1e-15)
        << "offset (" << o.dx << "," << o.dy << ")";
  }
}

TEST(DiffAdjoint, Examples) {
  const DiffStack d(3, 1, kLine);
  EXPECT_EQ(diff_adjoint(d, 0, Vector{0, 0}), Vector(3, 0.0));
  EXPECT_EQ(diff_adjoint(d, 0, Vector{1, 1}), (Vector{-1, 0, 1}));
}

TEST(DiffAdjoint, UnitRowScatters) {
  const DiffStack d(5, 4, default_offsets_2d());
  for (std::size_t i = 0; i < d.num_blocks(); ++i) {
    for (std::size_t r = 0; r < d.block_len(i); ++r) {
      Vector e(d.block_len(i), 0.0);
      e[r] = 1.0;
      const auto img = diff_adjoint(d, i, e);
      const auto [base, nbr] = d.block(i).row_pixels(r);
      Vector expect(20, 0.0);
      expect[base] = -1.0;
      expect[nbr] = 1.0;
      ASSERT_EQ(img, expect) << "block " << i << " row " << r;
    }
  }
}

TEST(DiffAdjoint, MatchesDenseTransposeAndAdjointIdentity) {
  std::mt19937_64 rng(32);
  const DiffStack d(6, 5, default_offsets_2d());
  for (std::size_t i = 0; i < d.num_blocks(); ++i) {
    const Eigen::MatrixXd m = testing::dense_diff_block(6, 5, d.offsets()[i]);
    const auto y = random_vector(d.block_len(i), rng);
    EXPECT_LT(testing::max_abs_diff(diff_adjoint(d, i, y), m.transpose() * testing::to_eigen(y)), 1e-15);
    const auto x = random_vector(30, rng);
    EXPECT_NEAR(dot(diff_forward(d, i, x), y), dot(x, diff_adjoint(d, i, y)), 1e-12);
  }
}

TEST(SignMap, Examples) {
  EXPECT_EQ(sign_map(Vector{0, -2, 3}), (Vector{0, -1, 1}));
  EXPECT_EQ(sign_map(Vector(4, 0.0)), Vector(4, 0.0));
  const auto neg_zero = sign_map(Vector{-0.0});
  EXPECT_EQ(neg_zero[0], 0.0);
  EXPECT_FALSE(std::signbit(neg_zero[0] + 0.0));
  EXPECT_EQ(sign_map(Vector{1e-300, -1e-300}), (Vector{1, -1}));
}

TEST(FwDirection, Examples) {
  const DiffStack line(3, 1, kLine);
  EXPECT_EQ(fw_direction_accumulate(line, Vector{0, 1, 3}, 1.0), (Vector{-1, 0, 1}));

  const DiffStack d(5, 5, default_offsets_2d());
  EXPECT_EQ(fw_direction_accumulate(d, Vector(25, -1.5), 3.0), Vector(25, 0.0));

  std::mt19937_64 rng(33);
  const auto x = random_vector(25, rng);
  const auto one = fw_direction_accumulate(d, x, 1.0);
  const auto two = fw_direction_accumulate(d, x, 2.0);
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(two[i], 2.0 * one[i]);
  EXPECT_THROW(fw_direction_accumulate(d, x, 0.0), ContractViolation);
}

TEST(FwDirection, AddRequiresBlockSizedScratch) {
  const DiffStack d(5, 5, default_offsets_2d());
  Vector out(25, 0.0);
  Vector small(d.max_block_len() - 1);
  EXPECT_THROW(fw_direction_add(d, Vector(25, 0.0), 1.0, out, small), ContractViolation);
}

TEST(FwDirection, MaximizesLinearFormOverBall) {
  std::mt19937_64 rng(34);
  const std::size_t nx = 6, ny = 5;
  const DiffStack d(nx, ny, default_offsets_2d());
  const double lambda = 0.7;
  const auto x = random_vector(nx * ny, rng);
  std::uniform_real_distribution<double> u(-lambda, lambda);
  for (std::size_t i = 0; i < d.num_blocks(); ++i) {
    const Eigen::VectorXd dx = testing::dense_diff_block(nx, ny, d.offsets()[i]) * testing::to_eigen(x);
    const double best = lambda * dx.cwiseAbs().sum();
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd s(dx.size());
      for (Eigen::Index r = 0; r < s.size(); ++r) s(r) = u(rng);
      EXPECT_GE(best, s.dot(dx)) << "block " << i << " trial " << trial;
    }
  }
}

TEST(FwDirection, LiesInImageOfFeasibleDual) {
  std::mt19937_64 rng(35);
  for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{4, 4}, {7, 3}, {5, 6}}) {
    const DiffStack d(nx, ny, default_offsets_2d());
    const Eigen::MatrixXd dense = testing::dense_diff_stack(nx, ny, default_offsets_2d());
    const double lambda = 1.3;
    const auto x = random_vector(nx * ny, rng);
    Eigen::VectorXd y = dense * testing::to_eigen(x);
    for (Eigen::Index r = 0; r < y.size(); ++r) y(r) = y(r) > 0 ? lambda : (y(r) < 0 ? -lambda : 0.0);
    EXPECT_LE(y.cwiseAbs().maxCoeff(), lambda * (1 + 1e-9));
    const auto out = fw_direction_accumulate(d, x, lambda);
    EXPECT_LE((dense.transpose() * y - testing::to_eigen(out)).norm(), 1e-8);
  }
}

TEST(RegValue, Examples) {
  const DiffStack line(3, 1, kLine);
  EXPECT_EQ(reg_value(line, Vector{0, 1, 3}), 3.0);
  const DiffStack d(6, 6, default_offsets_2d());
  EXPECT_EQ(reg_value(d, Vector(36, 4.0)), 0.0);
}

TEST(RegValue, MatchesDenseOracle) {
  std::mt19937_64 rng(36);
  const DiffStack d(6, 6, default_offsets_2d());
  const Eigen::MatrixXd dense = testing::dense_diff_stack(6, 6, default_offsets_2d());
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_vector(36, rng);
    const double oracle = (dense * testing::to_eigen(x)).lpNorm<1>();
    EXPECT_NEAR(reg_value(d, x), oracle, 1e-12 * oracle);
  }
}

TEST(RegValue, ZeroExactlyForConstantImages) {
  std::mt19937_64 rng(37);
  const DiffStack d(5, 4, default_offsets_2d());
  auto x = random_vector(20, rng);
  EXPECT_GT(reg_value(d, x), 0.0);
  Vector c(20, x[0]);
  EXPECT_EQ(reg_value(d, c), 0.0);
  c[7] += 1e-9;
  EXPECT_GT(reg_value(d, c), 0.0);
}

}  // namespace
}  // namespace pdfw
