#include "fsir/datagen.hpp"
#include "fsir/errors.hpp"
#include "fsir/operators.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

namespace fsir {
namespace {

ModelSpec spec(ModelId model, std::size_t n, std::size_t g, std::uint64_t seed = 1) {
  return ModelSpec{model, n, make_grid(g), seed, kDefaultNoiseScale, kDefaultKlTerms};
}

bool same_bytes(const FunctionalSample& a, const FunctionalSample& b) {
  return a.curves().size() == b.curves().size() && a.responses().size() == b.responses().size() &&
         std::memcmp(a.curves().data(), b.curves().data(), sizeof(double) * a.curves().size()) == 0 &&
         std::memcmp(a.responses().data(), b.responses().data(), sizeof(double) * a.responses().size()) == 0;
}

double variance(const Eigen::VectorXd& v) {
  return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

TEST(ModelI, UnitCurveGivesMinusOne) {
  const auto g = make_grid(256);
  const auto truth = ground_truth(ModelId::I, g);
  const double index = inner_product(truth.directions.curves()[0], cosine_basis(1, g));
  EXPECT_NEAR(index, -1.0, 1e-10);
  const double y = link_response(ModelId::I, std::vector<double>{index});
  EXPECT_NEAR(y, -1.0, 1e-10);
}

TEST(ModelI, NoiseFreeResponseIsIndex) {
  auto s = spec(ModelId::I, 50, 128);
  s.noise_scale = 0.0;
  const auto gen = gen_model_i(s);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_NEAR(gen.sample.responses()[static_cast<Eigen::Index>(i)],
                inner_product(gen.truth.directions.curves()[0], gen.sample.curve(i)), 1e-12);
  }
}

TEST(ModelI, CoefficientVariances) {
  const auto gen = gen_model_i(spec(ModelId::I, 100000, 64, 5));
  for (int j : {1, 2, 4}) {
    const auto phi = cosine_basis(j, gen.sample.grid_ptr());
    const Eigen::VectorXd proj = gen.sample.curves() * gen.sample.grid().weights().cwiseProduct(phi.values());
    EXPECT_NEAR(variance(proj) / std::pow(j, -1.5), 1.0, 0.05) << "j=" << j;
  }
}

TEST(ModelI, SampleCovarianceSpectrum) {
  const auto gen = gen_model_i(spec(ModelId::I, 100000, 64, 6));
  const auto centered = center_sample(gen.sample);
  const auto eig = eig_top(outer_product_average(centered.curves(), centered.grid_ptr(), 1e-5), 5);
  for (int j = 1; j <= 5; ++j) EXPECT_NEAR(eig.values[j - 1] / std::pow(j, -1.5), 1.0, 0.05) << "j=" << j;
}

TEST(ModelI, TruthAndRate) {
  const auto truth = ground_truth(ModelId::I, make_grid(64));
  EXPECT_EQ(truth.d, 1u);
  ASSERT_TRUE(truth.rate.has_value());
  EXPECT_DOUBLE_EQ(1.0 / (truth.rate->alpha + 2.0 * truth.rate->beta), 2.0 / 11.0);
  EXPECT_FALSE(ground_truth(ModelId::II, make_grid(64)).rate.has_value());
}

TEST(ModelII, SecondIndexIsThirdKlFunction) {
  const auto g = make_grid(100);
  const auto truth = ground_truth(ModelId::II, g);
  ASSERT_EQ(truth.d, 2u);
  const auto& b2 = truth.directions.curves()[1];
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double t = g->nodes()[static_cast<Eigen::Index>(i)];
    EXPECT_NEAR(b2[i], std::numbers::sqrt2 * std::sin(2.5 * std::numbers::pi * t), 1e-14);
  }
  EXPECT_EQ(b2.values(), bm_kl_basis(3, g).function.values());
}

TEST(ModelII, EndpointVarianceMatchesMercerSum) {
  const auto gen = gen_model_ii(spec(ModelId::II, 100000, 32, 8));
  const Eigen::VectorXd x1 = gen.sample.curves().col(31);
  double mercer = 0.0;
  for (int k = 1; k <= kDefaultKlTerms; ++k) mercer += bm_kl_eigenvalue(k) * 2.0 * std::pow(std::sin((k - 0.5) * std::numbers::pi), 2);
  EXPECT_NEAR(mercer, 1.0, 3e-3);
  EXPECT_NEAR(variance(x1) / mercer, 1.0, 0.03);
}

TEST(ModelIII, NoiseFreeResponsesPositive) {
  auto s = spec(ModelId::III, 2000, 64, 9);
  s.noise_scale = 0.0;
  const auto gen = gen_model_iii(s);
  EXPECT_GT(gen.sample.responses().minCoeff(), 0.0);
}

TEST(ModelIII, IndexVariance) {
  const auto gen = gen_model_iii(spec(ModelId::III, 100000, 64, 10));
  const auto& beta = gen.truth.directions.curves()[0];
  const Eigen::VectorXd idx = gen.sample.curves() * gen.sample.grid().weights().cwiseProduct(beta.values());
  const double lambda2 = std::pow(1.5 * std::numbers::pi, -2.0);
  EXPECT_NEAR(lambda2, 0.04503, 1e-5);
  EXPECT_NEAR(variance(idx) / lambda2, 1.0, 0.05);
}

class Determinism : public ::testing::TestWithParam<ModelId> {};

TEST_P(Determinism, SameSeedSameBytes) {
  const auto a = generate(spec(GetParam(), 300, 48, 42));
  const auto b = generate(spec(GetParam(), 300, 48, 42));
  const auto c = generate(spec(GetParam(), 300, 48, 43));
  EXPECT_TRUE(same_bytes(a.sample, b.sample));
  EXPECT_FALSE(same_bytes(a.sample, c.sample));
}

INSTANTIATE_TEST_SUITE_P(Models, Determinism, ::testing::Values(ModelId::I, ModelId::II, ModelId::III));

TEST(Generate, PrefixStable) {
  // Observation i depends only on its own stretch of the stream.
  const auto small = generate(spec(ModelId::III, 10, 32, 3));
  const auto large = generate(spec(ModelId::III, 40, 32, 3));
  EXPECT_EQ(small.sample.curves(), large.sample.curves().topRows(10));
}

TEST(Generate, SpecValidation) {
  EXPECT_THROW(generate(spec(ModelId::I, 1, 16)), InvalidArgument);
  auto s = spec(ModelId::I, 10, 16);
  s.noise_scale = -1.0;
  EXPECT_THROW(generate(s), InvalidArgument);
  s = spec(ModelId::I, 10, 16);
  s.kl_terms = 0;
  EXPECT_THROW(generate(s), InvalidArgument);
}

TEST(GammaTimes, KlEigenfunctionIdentity) {
  const auto g = make_grid(256);
  for (int k : {1, 2, 3, 7}) {
    const auto kl = bm_kl_basis(k, g);
    const auto out = gamma_times(kl.function, ModelId::III);
    EXPECT_LT(testing::max_abs_diff(out, kl.eigenvalue * kl.function), 1e-3) << "k=" << k;
  }
}

TEST(GammaTimes, ZeroAndModelI) {
  const auto g = make_grid(256);
  EXPECT_EQ(gamma_times(Curve::zero(g), ModelId::II).values().cwiseAbs().maxCoeff(), 0.0);
  for (int j : {1, 2, 5, 30}) {
    const auto phi = cosine_basis(j, g);
    EXPECT_LT(testing::max_abs_diff(gamma_times(phi, ModelId::I), std::pow(j, -1.5) * phi), 1e-6) << "j=" << j;
  }
}

TEST(ModelNames, RoundTrip) {
  for (auto m : {ModelId::I, ModelId::II, ModelId::III}) EXPECT_EQ(parse_model(to_string(m)), m);
  EXPECT_THROW(parse_model("IV"), InvalidArgument);
}

}  // namespace
}  // namespace fsir
