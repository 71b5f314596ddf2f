#include "fsir/errors.hpp"
#include "fsir/regression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

namespace fsir {
namespace {

Eigen::MatrixXd random_inputs(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
  return x;
}

TEST(FitGp, ConstantTargets) {
  std::mt19937_64 rng(1);
  const auto x = random_inputs(10, 2, rng);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(10, 2.5);
  const auto gp = fit_gp(x, y);
  EXPECT_TRUE(gp.is_constant());
  const auto test = random_inputs(5, 2, rng);
  const Eigen::VectorXd pred = gp.predict(test);
  EXPECT_EQ(mse(pred, Eigen::VectorXd::Constant(5, 2.5)), 0.0);
}

TEST(FitGp, InterpolatesLinearFunction) {
  Eigen::MatrixXd x(20, 1);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = i / 19.0;
    y[i] = x(i, 0);
  }
  const auto gp = fit_gp(x, y);
  const Eigen::VectorXd pred = gp.predict(x);
  const double rmse = std::sqrt(mse(pred, y));
  EXPECT_LT(rmse, 0.05 * (y.maxCoeff() - y.minCoeff()));
  EXPECT_LE(gp.hyperparameters().noise_variance, 1.0001e-3 * (y.array() - y.mean()).square().mean());
}

TEST(FitGp, ConflictingDuplicatesStayFinite) {
  Eigen::MatrixXd x(4, 1);
  x << 0.0, 0.0, 1.0, 2.0;
  Eigen::VectorXd y(4);
  y << 1.0, -1.0, 0.5, 0.2;
  const auto gp = fit_gp(x, y);
  EXPECT_TRUE(gp.predict(x).allFinite());
}

TEST(FitGp, Validation) {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 1.0;
  EXPECT_THROW(fit_gp(x, Eigen::VectorXd::Zero(2)), InvalidArgument);
  Eigen::MatrixXd x3(3, 1);
  x3 << 0.0, NAN, 1.0;
  EXPECT_THROW(fit_gp(x3, Eigen::VectorXd::Zero(3)), InvalidArgument);
  EXPECT_THROW(fit_gp(Eigen::MatrixXd::Zero(3, 1), Eigen::VectorXd::Zero(4)), InvalidArgument);
}

TEST(Predict, FarPointsReturnMean) {
  std::mt19937_64 rng(2);
  const auto x = random_inputs(30, 2, rng);
  Eigen::VectorXd y = x.col(0).array().sin() + 3.0;
  const auto gp = fit_gp(x, y);
  const std::vector<double> far = {1e4, -1e4};
  EXPECT_NEAR(gp.predict(far), gp.target_mean(), 1e-6);
  EXPECT_NEAR(gp.target_mean(), y.mean(), 1e-12);
}

TEST(Predict, TrainingPointWithTinyNoise) {
  std::mt19937_64 rng(3);
  const auto x = random_inputs(15, 1, rng);
  const Eigen::VectorXd y = x.col(0).array().cos() + 2.0;
  const double v = (y.array() - y.mean()).square().mean();
  const GpGrid grid{{1.0}, {v}, {1e-8 * v}};
  const auto gp = fit_gp(x, y, grid);
  for (Eigen::Index i = 0; i < 15; ++i) {
    const std::vector<double> xi = {x(i, 0)};
    EXPECT_NEAR(gp.predict(xi), y[i], 0.01 * std::abs(y[i]));
  }
}

TEST(Predict, BatchMatchesPointwise) {
  std::mt19937_64 rng(4);
  const auto x = random_inputs(25, 3, rng);
  const Eigen::VectorXd y = x.rowwise().squaredNorm();
  const auto gp = fit_gp(x, y);
  const auto test = random_inputs(10, 3, rng);
  const Eigen::VectorXd batch = gp.predict(test);
  for (Eigen::Index i = 0; i < 10; ++i) {
    std::vector<double> xi = {test(i, 0), test(i, 1), test(i, 2)};
    EXPECT_NEAR(batch[i], gp.predict(xi), 1e-12);
  }
  EXPECT_THROW(gp.predict(Eigen::MatrixXd::Zero(2, 2)), InvalidArgument);
}

TEST(FitGp, ShiftEquivariant) {
  std::mt19937_64 rng(5);
  const auto x = random_inputs(30, 2, rng);
  const Eigen::VectorXd y = x.col(0).array().sin() + x.col(1).array();
  const auto a = fit_gp(x, y);
  const auto b = fit_gp(x, (y.array() + 7.25).matrix());
  const auto test = random_inputs(8, 2, rng);
  EXPECT_LT((b.predict(test).array() - a.predict(test).array() - 7.25).abs().maxCoeff(), 1e-10);
}

TEST(FitGp, PermutationInvariant) {
  std::mt19937_64 rng(6);
  const auto x = random_inputs(30, 2, rng);
  const Eigen::VectorXd y = x.col(0).array().sin() + 0.3 * x.col(1).array();
  std::vector<int> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd xp(30, 2);
  Eigen::VectorXd yp(30);
  for (int i = 0; i < 30; ++i) {
    xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    yp[i] = y[perm[static_cast<std::size_t>(i)]];
  }
  const auto a = fit_gp(x, y);
  const auto b = fit_gp(xp, yp);
  const auto test = random_inputs(8, 2, rng);
  EXPECT_LT((a.predict(test) - b.predict(test)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SquaredExponential, Values) {
  const GpHyperparameters hp{2.0, 3.0, 0.1};
  Eigen::RowVectorXd a(2), b(2);
  a << 0.0, 0.0;
  b << 2.0, 0.0;
  EXPECT_DOUBLE_EQ(squared_exponential(a, a, hp), 3.0);
  EXPECT_NEAR(squared_exponential(a, b, hp), 3.0 * std::exp(-0.5), 1e-15);
}

TEST(Mse, Examples) {
  const std::vector<double> t = {1.0, 2.0, 3.0};
  EXPECT_EQ(mse(t, t), 0.0);
  const std::vector<double> shifted = {2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(mse(shifted, t), 1.0);
  const std::vector<double> a = {0.0, 2.0}, b = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(mse(a, b), 1.0);
  EXPECT_THROW(mse(a, t), InvalidArgument);
  EXPECT_THROW(mse(std::span<const double>{}, std::span<const double>{}), InvalidArgument);
}

}  // namespace
}  // namespace fsir
