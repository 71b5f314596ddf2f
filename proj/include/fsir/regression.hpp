#pragma once

// Gaussian-process regression with a squared-exponential kernel, used to
// score reduced predictors by out-of-sample error.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace fsir {

struct GpHyperparameters {
  double length_scale;
  double signal_variance;
  double noise_variance;
};

/// Candidate values searched by fit_gp. Empty vectors mean "use the default
/// grid anchored at the data": length scales median_dist * 2^k, k = -3..3;
/// signal variances {0.25, 1, 4} var(y); noise variances
/// {1e-4, 1e-3, 1e-2, 1e-1} var(y).
struct GpGrid {
  std::vector<double> length_scales;
  std::vector<double> signal_variances;
  std::vector<double> noise_variances;
};

class GpModel {
 public:
  GpModel() = default;

  std::size_t input_dimension() const noexcept { return static_cast<std::size_t>(inputs_.cols()); }
  std::size_t training_size() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }
  bool is_constant() const noexcept { return constant_; }
  const GpHyperparameters& hyperparameters() const noexcept { return hp_; }
  double target_mean() const noexcept { return mean_; }
  double log_marginal_likelihood() const noexcept { return lml_; }

  double predict(std::span<const double> x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

 private:
  friend GpModel fit_gp(const Eigen::MatrixXd&, const Eigen::VectorXd&, const std::optional<GpGrid>&);

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd alpha_;
  GpHyperparameters hp_{1.0, 1.0, 1.0};
  double mean_ = 0.0;
  double lml_ = 0.0;
  bool constant_ = false;
};

inline constexpr double kGpJitter = 1e-8;

double squared_exponential(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                           const Eigen::Ref<const Eigen::RowVectorXd>& b, const GpHyperparameters& hp);

/// Fits on centered targets, choosing hyperparameters by maximum log marginal
/// likelihood over the grid.
GpModel fit_gp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::optional<GpGrid>& grid = {});

double mse(std::span<const double> pred, std::span<const double> truth);
double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

}  // namespace fsir
