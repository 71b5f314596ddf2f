#include "fsir/errors.hpp"
#include "fsir/operators.hpp"
#include "test_support.hpp"

#include <Eigen/QR>
#include <gtest/gtest.h>

#include <cmath>

namespace fsir {
namespace {

// Operator with prescribed spectrum and random L2-orthonormal eigenfunctions.
struct Planted {
  OperatorMatrix op;
  Eigen::VectorXd values;
  Eigen::MatrixXd functions;  // raw values, G x r
};

Planted planted(const GridPtr& g, const Eigen::VectorXd& values, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(g->size());
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(n, values.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                            Eigen::MatrixXd::Identity(n, values.size());
  const Eigen::MatrixXd sym = q * values.asDiagonal() * q.transpose();
  Eigen::MatrixXd f = g->sqrt_weights().cwiseInverse().asDiagonal() * q;
  return {OperatorMatrix::from_symmetric_form(g, sym), values, f};
}

TEST(OuterProductAverage, ConstantCurve) {
  const auto g = make_grid(6);
  const std::vector<Curve> c = {Curve::constant(g, 1.0)};
  const auto op = outer_product_average(c, 1.0);
  EXPECT_LT((op.kernel() - Eigen::MatrixXd::Ones(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OuterProductAverage, SignCancels) {
  const auto g = make_grid(64);
  const auto p2 = cosine_basis(2, g);
  const std::vector<Curve> c = {p2, -1.0 * p2};
  const auto op = outer_product_average(c, 0.5);
  const Eigen::MatrixXd expected = p2.values() * p2.values().transpose();
  EXPECT_LT((op.kernel() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(OuterProductAverage, MatchesDirectSummation) {
  const auto g = make_grid(40);
  std::mt19937_64 rng(11);
  std::vector<Curve> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(testing::random_curve(g, rng));
  const auto op = outer_product_average(xs, 1.0 / 3.0);
  for (const auto& f : xs) {
    Curve direct = Curve::zero(g);
    for (const auto& x : xs) direct += (inner_product(x, f) / 3.0) * x;
    EXPECT_LT(testing::max_abs_diff(apply(op, f), direct), 1e-10);
  }
}

TEST(OuterProductAverage, RowFormMatchesCurveForm) {
  const auto g = make_grid(20);
  std::mt19937_64 rng(5);
  std::vector<Curve> xs;
  CurveMatrix rows(7, 20);
  for (Eigen::Index i = 0; i < 7; ++i) {
    xs.push_back(testing::random_curve(g, rng));
    rows.row(i) = xs.back().values().transpose();
  }
  const auto a = outer_product_average(xs, 1.0 / 7.0);
  const auto b = outer_product_average(rows, g, 1.0 / 7.0);
  EXPECT_LT((a.kernel() - b.kernel()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OuterProductAverage, EmptyThrows) {
  EXPECT_THROW(outer_product_average(std::span<const Curve>{}, 1.0), InvalidArgument);
}

TEST(OuterProductAverage, PositiveSemidefinite) {
  const auto g = make_grid(30);
  std::mt19937_64 rng(9);
  std::vector<Curve> xs;
  for (int i = 0; i < 12; ++i) xs.push_back(testing::random_curve(g, rng));
  const auto eig = eig_top(outer_product_average(xs, 1.0 / 12.0), 30);
  EXPECT_GE(eig.values[29], -1e-10 * eig.values[0]);
}

TEST(Apply, ZeroKernel) {
  const auto g = make_grid(16);
  const auto out = apply(OperatorMatrix::zero(g), cosine_basis(3, g));
  EXPECT_EQ(out.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Apply, RankOneProjector) {
  const auto g = make_grid(256);
  const auto p2 = cosine_basis(2, g);
  const auto op = OperatorMatrix::rank_one(p2);
  EXPECT_LT(testing::max_abs_diff(apply(op, p2), p2), 1e-3);
  EXPECT_LT(apply(op, cosine_basis(3, g)).values().cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Apply, GridMismatchThrows) {
  EXPECT_THROW(apply(OperatorMatrix::zero(make_grid(8)), Curve::zero(make_grid(9))), InvalidArgument);
}

TEST(EigTop, RankOne) {
  const auto g = make_grid(256);
  const auto p2 = cosine_basis(2, g);
  const auto eig = eig_top(OperatorMatrix::rank_one(p2), 1);
  EXPECT_NEAR(eig.values[0], 1.0, 1e-3);
  const auto f = eig.function(0);
  EXPECT_LT(std::min(testing::max_abs_diff(f, p2), testing::max_abs_diff(f, -1.0 * p2)), 1e-3);
}

TEST(EigTop, TwoTermSynthesis) {
  const auto g = make_grid(256);
  auto op = OperatorMatrix::rank_one(cosine_basis(1, g), 2.0) + OperatorMatrix::rank_one(cosine_basis(2, g));
  const auto eig = eig_top(op, 2);
  EXPECT_NEAR(eig.values[0], 2.0, 1e-3);
  EXPECT_NEAR(eig.values[1], 1.0, 1e-3);
}

TEST(EigTop, Identity) {
  const auto g = make_grid(50);
  EXPECT_NEAR(eig_top(OperatorMatrix::identity(g), 1).values[0], 1.0, 1e-12);
}

TEST(EigTop, AsymmetricThrows) {
  const auto g = make_grid(4);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(4, 4);
  k(0, 1) = 1.0;
  EXPECT_THROW(eig_top(OperatorMatrix(g, k), 1), InvalidArgument);
}

TEST(EigTop, SignConvention) {
  const auto g = make_grid(64);
  const auto eig = eig_top(OperatorMatrix::rank_one(cosine_basis(2, g), -1.0) +
                               OperatorMatrix::rank_one(cosine_basis(4, g), 3.0),
                           2);
  for (std::size_t i = 0; i < eig.count(); ++i) {
    Eigen::Index arg = 0;
    eig.functions.col(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(eig.functions(arg, static_cast<Eigen::Index>(i)), 0.0);
  }
}

TEST(EigTop, PlantedSpectraAndResiduals) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t gsize = 8 + static_cast<std::size_t>(trial) % 25;
    const auto g = make_grid(gsize);
    const int r = 1 + trial % 5;
    Eigen::VectorXd values(r);
    for (int i = 0; i < r; ++i) values[i] = 5.0 - 0.9 * i;
    const auto p = planted(g, values, rng);
    const auto eig = eig_top(p.op, static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      EXPECT_NEAR(eig.values[i], values[i], 1e-8);
      const Curve f = eig.function(static_cast<std::size_t>(i));
      const Curve truth(g, p.functions.col(i));
      const double s = inner_product(f, truth) >= 0 ? 1.0 : -1.0;
      EXPECT_LT(testing::max_abs_diff(f, s * truth), 1e-8 * std::sqrt(static_cast<double>(gsize)));
      const Curve residual = apply(p.op, f) - eig.values[i] * f;
      EXPECT_LT(l2_norm(residual), 1e-8 * eig.values[0]);
      for (int j = 0; j < r; ++j) {
        EXPECT_NEAR(inner_product(f, eig.function(static_cast<std::size_t>(j))), i == j ? 1.0 : 0.0, 1e-8);
      }
    }
  }
}

TEST(TruncatedPinv, RankOneInversion) {
  const auto g = make_grid(256);
  const auto p1 = cosine_basis(1, g);
  const auto inv = truncated_pinv(OperatorMatrix::rank_one(p1, 2.0), 1);
  const auto expected = OperatorMatrix::rank_one(p1, 0.5);
  EXPECT_LT((inv.kernel() - expected.kernel()).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(TruncatedPinv, MoorePenroseOnRetainedSpan) {
  std::mt19937_64 rng(77);
  const auto g = make_grid(32);
  Eigen::VectorXd values(5);
  values << 4.0, 2.5, 1.2, 0.6, 0.1;
  const auto p = planted(g, values, rng);
  for (std::size_t m = 1; m <= 5; ++m) {
    const auto pinv = truncated_pinv(p.op, m);
    const auto pap = compose(compose(pinv, p.op), pinv);
    const double scale = pinv.symmetric_form().cwiseAbs().maxCoeff();
    EXPECT_LT((pap.symmetric_form() - pinv.symmetric_form()).cwiseAbs().maxCoeff(), 1e-8 * scale);
    EXPECT_LT(compose(p.op, pinv).asymmetry(), 1e-8);
    const auto pa = compose(pinv, p.op);
    for (std::size_t i = 0; i < m; ++i) {
      const Curve phi(g, p.functions.col(static_cast<Eigen::Index>(i)));
      EXPECT_LT(l2_norm(apply(pa, phi) - phi), 1e-8);
    }
    for (std::size_t i = m; i < 5; ++i) {
      const Curve phi(g, p.functions.col(static_cast<Eigen::Index>(i)));
      EXPECT_LT(l2_norm(apply(pa, phi)), 1e-8);
    }
  }
}

TEST(TruncatedPinv, FloorExcludesNullDirections) {
  const auto g = make_grid(64);
  const auto op = OperatorMatrix::rank_one(cosine_basis(2, g)) + OperatorMatrix::rank_one(cosine_basis(3, g), 0.5);
  const auto eig = eig_top(op, 10);
  EXPECT_EQ(retained_rank(eig, 10, 1e-12), 2u);
  const auto inv = truncated_pinv(op, 10, 1e-12);
  EXPECT_TRUE(inv.kernel().allFinite());
  EXPECT_LT(operator_norm(inv), 2.0 + 1e-6);
}

TEST(TruncatedPinv, NonPositiveLeadingEigenvalueThrows) {
  const auto g = make_grid(8);
  EXPECT_THROW(truncated_pinv(OperatorMatrix::zero(g), 1), DegenerateOperator);
  EXPECT_THROW(truncated_pinv(-1.0 * OperatorMatrix::identity(g), 1), DegenerateOperator);
}

TEST(RidgeInverseApply, ZeroOperator) {
  const auto g = make_grid(32);
  std::mt19937_64 rng(1);
  const auto f = testing::random_curve(g, rng);
  EXPECT_LT(testing::max_abs_diff(ridge_inverse_apply(OperatorMatrix::zero(g), 0.25, f), 4.0 * f), 1e-12);
}

TEST(RidgeInverseApply, ShermanMorrison) {
  const auto g = make_grid(256);
  const auto p1 = cosine_basis(1, g);
  const auto out = ridge_inverse_apply(OperatorMatrix::rank_one(p1), 1.0, p1);
  EXPECT_LT(testing::max_abs_diff(out, 0.5 * p1), 1e-3);
}

TEST(RidgeInverseApply, LargeRhoDominates) {
  const auto g = make_grid(64);
  std::mt19937_64 rng(4);
  std::vector<Curve> xs;
  for (int i = 0; i < 5; ++i) xs.push_back(testing::random_curve(g, rng));
  const auto op = outer_product_average(xs, 0.2);
  const Curve f = Curve::constant(g, 1.0) + 0.1 * testing::random_curve(g, rng);
  const double rho = 1e6;
  const auto out = ridge_inverse_apply(op, rho, f);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(out[i], f[i] / rho, 0.01 * std::abs(f[i] / rho));
}

TEST(RidgeInverseApply, Errors) {
  const auto g = make_grid(8);
  EXPECT_THROW(ridge_inverse_apply(OperatorMatrix::zero(g), 0.0, Curve::zero(g)), InvalidArgument);
  EXPECT_THROW(ridge_inverse_apply(OperatorMatrix::rank_one(cosine_basis(1, g), -2.0), 1.0, Curve::zero(g)),
               NumericalError);
}

TEST(OperatorNorm, Examples) {
  const auto g = make_grid(256);
  EXPECT_EQ(operator_norm(OperatorMatrix::zero(g)), 0.0);
  EXPECT_NEAR(operator_norm(OperatorMatrix::rank_one(cosine_basis(2, g))), 1.0, 1e-3);
  const auto diff = OperatorMatrix::rank_one(cosine_basis(1, g)) - OperatorMatrix::rank_one(cosine_basis(2, g));
  EXPECT_NEAR(operator_norm(diff), 1.0, 1e-3);
}

}  // namespace
}  // namespace fsir
