#pragma once

// Functional sliced inverse regression.
//
// Given (X_i, Y_i), the curves are centered, the sample is sliced by the
// order statistics of Y, and the leading eigenfunctions eta_k of
// Gamma_e = (1/H) sum_h mean_h (x) mean_h estimate the inverse regression
// subspace. The central space is then spanned by Gamma^-1 eta_k, with the
// inverse of the sample covariance Gamma taken either as a truncated
// spectral pseudo-inverse (refined FSIR) or as a ridge inverse (RFSIR).

#include "fsir/func_core.hpp"
#include "fsir/metrics.hpp"
#include "fsir/operators.hpp"
#include "fsir/slicing.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fsir {

inline constexpr std::size_t kDefaultSlices = 10;

struct ExplicitTruncation {
  std::size_t m;
};

/// m = round(c_m * n^(1 / (alpha + 2 beta))).
struct RateTruncation {
  double alpha;
  double beta;
  double c_m = 1.0;
};

struct TruncatedMethod {
  double rel_floor = kDefaultRelFloor;
};

struct RidgeMethod {
  double rho;
};

struct FsirConfig {
  std::size_t slices = kDefaultSlices;
  std::size_t d = 1;
  std::variant<ExplicitTruncation, RateTruncation> truncation = ExplicitTruncation{1};
  std::variant<TruncatedMethod, RidgeMethod> method = TruncatedMethod{};

  void validate() const;
};

/// Truncation level from the rate rule, never below one.
std::size_t rate_truncation_level(std::size_t n, const RateTruncation& rule);

struct EstimateDiagnostics {
  // Covariance eigenpairs actually inverted (truncated method).
  std::size_t retained_rank = 0;
  // lambda_1 / lambda_r over the retained eigenvalues (truncated method).
  double condition_number = 1.0;
  std::size_t gamma_e_rank = 0;
  bool rank_deficient = false;
  std::vector<std::string> warnings;
};

struct CentralSpaceEstimate {
  GridPtr grid;
  std::vector<Curve> directions;
  // Top-d eigenfunctions of the sliced conditional covariance.
  std::vector<Curve> eta_hat;
  Eigen::VectorXd gamma_e_eigenvalues;
  // Truncation level for the truncated method, 0 for ridge.
  std::size_t m_used = 0;
  std::optional<double> rho_used;
  EstimateDiagnostics diagnostics;

  std::size_t dimension() const noexcept { return directions.size(); }
  SubspaceBasis span() const { return SubspaceBasis(directions); }
  SubspaceBasis inverse_regression_span() const { return SubspaceBasis(eta_hat); }
};

/// The shared front half of the estimators: centering, slicing, the two
/// covariance operators and their eigendecompositions. Building it once and
/// asking for several (d, m) or (d, rho) estimates avoids repeating the
/// O(n G^2) work.
class FsirPipeline {
 public:
  FsirPipeline(const FunctionalSample& sample, std::size_t slices);

  std::size_t sample_size() const noexcept { return n_; }
  std::size_t slices() const noexcept { return partition_.slice_count; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const SlicedPartition& partition() const noexcept { return partition_; }
  const SliceMeans& means() const noexcept { return means_; }
  const OperatorMatrix& covariance() const noexcept { return covariance_; }
  // Complete eigendecomposition of the sample covariance.
  const EigenSystem& covariance_eigen() const noexcept { return covariance_eigen_; }
  const OperatorMatrix& gamma_e() const noexcept { return gamma_e_; }
  const EigenSystem& gamma_e_eigen() const noexcept { return gamma_e_eigen_; }
  // Numerical rank of Gamma_e, capped by (distinct responses - 1).
  std::size_t gamma_e_rank() const noexcept { return gamma_e_rank_; }

  std::vector<Curve> inverse_regression_directions(std::size_t d) const;
  CentralSpaceEstimate truncated(std::size_t d, std::size_t m, double rel_floor = kDefaultRelFloor) const;
  CentralSpaceEstimate ridge(std::size_t d, double rho) const;
  CentralSpaceEstimate estimate(const FsirConfig& cfg) const;

 private:
  CentralSpaceEstimate base_estimate(std::size_t d) const;

  std::size_t n_;
  GridPtr grid_;
  SlicedPartition partition_;
  SliceMeans means_;
  OperatorMatrix covariance_;
  EigenSystem covariance_eigen_;
  OperatorMatrix gamma_e_;
  EigenSystem gamma_e_eigen_;
  std::size_t gamma_e_rank_ = 0;
};

CentralSpaceEstimate fit_fsir(const FunctionalSample& sample, const FsirConfig& cfg);
/// Requires cfg.method to be RidgeMethod.
CentralSpaceEstimate fit_rfsir(const FunctionalSample& sample, const FsirConfig& cfg);

/// Top-d eigenfunctions of the sliced conditional covariance only.
std::vector<Curve> inverse_regression_space(const FunctionalSample& sample, std::size_t slices,
                                            std::size_t d);

/// (<beta_1, f>, ..., <beta_d, f>).
std::vector<double> reduce(const CentralSpaceEstimate& est, const Curve& f);
/// n x d matrix of reduced predictors, one row per sample curve.
Eigen::MatrixXd reduce(const CentralSpaceEstimate& est, const FunctionalSample& sample);

}  // namespace fsir
