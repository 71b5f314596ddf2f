#include "fsir/datagen.hpp"

#include "fsir/errors.hpp"
#include "fsir/rng.hpp"

#include <cmath>
#include <vector>

namespace fsir {

std::string to_string(ModelId model) {
  switch (model) {
    case ModelId::I:
      return "I";
    case ModelId::II:
      return "II";
    case ModelId::III:
      return "III";
  }
  return "?";
}

ModelId parse_model(std::string_view text) {
  if (text == "I" || text == "1" || text == "i") return ModelId::I;
  if (text == "II" || text == "2" || text == "ii") return ModelId::II;
  if (text == "III" || text == "3" || text == "iii") return ModelId::III;
  throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

double model_eigenvalue(ModelId model, int k) {
  if (k < 1) {
    throw InvalidArgument("basis index must be >= 1");
  }
  if (model == ModelId::I) {
    return std::pow(static_cast<double>(k), -1.5);
  }
  return bm_kl_eigenvalue(k);
}

Curve model_basis(ModelId model, int k, GridPtr grid) {
  if (model == ModelId::I) {
    return cosine_basis(k, std::move(grid));
  }
  return bm_kl_basis(k, std::move(grid)).function;
}

namespace {

void validate(const ModelSpec& spec) {
  if (spec.n < 2) throw InvalidArgument("model spec: n must be >= 2");
  if (!spec.grid) throw InvalidArgument("model spec: missing grid");
  if (!(spec.noise_scale >= 0.0)) throw InvalidArgument("model spec: noise_scale must be >= 0");
  if (spec.kl_terms < 1) throw InvalidArgument("model spec: kl_terms must be >= 1");
}

std::vector<Curve> truth_curves(ModelId model, const GridPtr& grid, int kl_terms) {
  switch (model) {
    case ModelId::I: {
      Curve b = Curve::zero(grid);
      for (int j = 1; j <= kl_terms; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        b += (sign / (static_cast<double>(j) * j)) * cosine_basis(j, grid);
      }
      return {b};
    }
    case ModelId::II:
      return {bm_kl_basis(2, grid).function, bm_kl_basis(3, grid).function};
    case ModelId::III:
      return {bm_kl_basis(2, grid).function};
  }
  throw InvalidArgument("unknown model");
}

GeneratedSample generate_impl(const ModelSpec& spec, ModelId model) {
  validate(spec);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto g = static_cast<Eigen::Index>(spec.grid->size());
  const int terms = spec.kl_terms;

  Eigen::MatrixXd basis(g, terms);
  Eigen::VectorXd scales(terms);
  for (int k = 1; k <= terms; ++k) {
    basis.col(k - 1) = model_basis(model, k, spec.grid).values();
    scales[k - 1] = std::sqrt(model_eigenvalue(model, k));
  }

  // Draw order: for each observation, the KL coefficients then the noise.
  CounterStream stream(spec.seed);
  Eigen::MatrixXd coef(n, terms);
  Eigen::VectorXd noise(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < terms; ++k) {
      coef(i, k) = scales[k] * stream.normal();
    }
    noise[i] = stream.normal();
  }
  CurveMatrix x = coef * basis.transpose();

  GroundTruth truth = ground_truth(model, spec.grid, terms);
  const auto& w = spec.grid->weights();
  const std::size_t d = truth.d;
  Eigen::MatrixXd index_dirs(g, static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    index_dirs.col(static_cast<Eigen::Index>(k)) = w.cwiseProduct(truth.directions.curves()[k].values());
  }
  const Eigen::MatrixXd indices = x * index_dirs;

  Eigen::VectorXd y(n);
  std::vector<double> row(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      row[k] = indices(i, static_cast<Eigen::Index>(k));
    }
    y[i] = link_response(model, row) + spec.noise_scale * noise[i];
  }
  return {FunctionalSample(spec.grid, std::move(x), std::move(y)), std::move(truth)};
}

}  // namespace

GroundTruth ground_truth(ModelId model, GridPtr grid, int kl_terms) {
  auto curves = truth_curves(model, grid, kl_terms);
  const std::size_t d = curves.size();
  std::optional<RateConstants> rate;
  if (model == ModelId::I) {
    rate = RateConstants{1.5, 2.0};
  }
  return {SubspaceBasis(std::move(curves)), d, rate};
}

double link_response(ModelId model, std::span<const double> indices) {
  switch (model) {
    case ModelId::I:
      if (indices.size() != 1) break;
      return indices[0];
    case ModelId::II:
      if (indices.size() != 2) break;
      return indices[0] + 100.0 * indices[1] * indices[1] * indices[1];
    case ModelId::III:
      if (indices.size() != 1) break;
      return std::exp(indices[0]);
  }
  throw InvalidArgument("link_response: wrong number of indices for model " + to_string(model));
}

GeneratedSample gen_model_i(const ModelSpec& spec) { return generate_impl(spec, ModelId::I); }
GeneratedSample gen_model_ii(const ModelSpec& spec) { return generate_impl(spec, ModelId::II); }
GeneratedSample gen_model_iii(const ModelSpec& spec) { return generate_impl(spec, ModelId::III); }

GeneratedSample generate(const ModelSpec& spec) { return generate_impl(spec, spec.model); }

Curve gamma_times(const Curve& beta, ModelId model, int kl_terms) {
  const auto& grid = beta.grid_ptr();
  if (model == ModelId::I) {
    Curve out = Curve::zero(grid);
    for (int j = 1; j <= kl_terms; ++j) {
      const Curve phi = cosine_basis(j, grid);
      out += (model_eigenvalue(ModelId::I, j) * inner_product(beta, phi)) * phi;
    }
    return out;
  }
  const auto& t = grid->nodes();
  const Eigen::VectorXd wb = grid->weights().cwiseProduct(beta.values());
  Eigen::VectorXd out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    out[i] = t.cwiseMin(t[i]).dot(wb);
  }
  return Curve(grid, std::move(out));
}

}  // namespace fsir
