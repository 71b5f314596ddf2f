#pragma once

// Seeded synthetic functional regression models with known central spaces.
//
//   I   Y = <b1, X> + e,  X = sum_{j<=K} j^{-3/4} Z_j phi_j (cosine basis),
//                         b1 = sum_{j<=K} (-1)^j j^{-2} phi_j
//   II  Y = <b1, X> + 100 <b2, X>^3 + e,  X Brownian motion,
//                         b1 = sqrt2 sin(3 pi t / 2), b2 = sqrt2 sin(5 pi t / 2)
//   III Y = exp(<b, X>) + e,  X Brownian motion, b = sqrt2 sin(3 pi t / 2)
//
// Brownian motion is synthesized from its first K Karhunen-Loeve terms and
// e = noise_scale * N(0, 1).

#include "fsir/func_core.hpp"
#include "fsir/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fsir {

enum class ModelId { I, II, III };

std::string to_string(ModelId model);
ModelId parse_model(std::string_view text);

inline constexpr std::size_t kDefaultGridSize = 256;
inline constexpr int kDefaultKlTerms = 100;
inline constexpr double kDefaultNoiseScale = 0.01;

struct ModelSpec {
  ModelId model = ModelId::I;
  std::size_t n = 0;
  GridPtr grid;
  std::uint64_t seed = 0;
  double noise_scale = kDefaultNoiseScale;
  int kl_terms = kDefaultKlTerms;
};

/// Decay exponents of the covariance eigenvalue gaps (alpha) and of the
/// index coefficients (beta).
struct RateConstants {
  double alpha;
  double beta;
};

struct GroundTruth {
  SubspaceBasis directions;
  std::size_t d;
  std::optional<RateConstants> rate;
};

struct GeneratedSample {
  FunctionalSample sample;
  GroundTruth truth;
};

GeneratedSample gen_model_i(const ModelSpec& spec);
GeneratedSample gen_model_ii(const ModelSpec& spec);
GeneratedSample gen_model_iii(const ModelSpec& spec);
GeneratedSample generate(const ModelSpec& spec);

GroundTruth ground_truth(ModelId model, GridPtr grid, int kl_terms = kDefaultKlTerms);

/// Noise-free response as a function of the index values <b_k, X>.
double link_response(ModelId model, std::span<const double> indices);

/// Covariance eigenvalue of the k-th basis function of X.
double model_eigenvalue(ModelId model, int k);
/// k-th basis function of X (cosine basis for I, Brownian KL basis otherwise).
Curve model_basis(ModelId model, int k, GridPtr grid);

/// Gamma beta for the covariance of X in the given model. For the Brownian
/// models this is the quadrature of int_0^1 min(s, t) beta(s) ds; for
/// Model I it is the spectral form sum_j lambda_j <beta, phi_j> phi_j over
/// kl_terms terms.
Curve gamma_times(const Curve& beta, ModelId model, int kl_terms = kDefaultKlTerms);

}  // namespace fsir
