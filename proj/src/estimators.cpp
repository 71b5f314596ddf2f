#include "fsir/estimators.hpp"

#include "fsir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>

namespace fsir {

namespace {

constexpr double kRankTol = 1e-10;

std::size_t distinct_values(const Eigen::VectorXd& y) {
  std::set<double> seen(y.data(), y.data() + y.size());
  return seen.size();
}

}  // namespace

void FsirConfig::validate() const {
  if (d < 1) throw InvalidArgument("fsir config: d must be >= 1");
  if (slices < d) throw InvalidArgument("fsir config: need H >= d");
  if (const auto* e = std::get_if<ExplicitTruncation>(&truncation)) {
    if (std::holds_alternative<TruncatedMethod>(method) && e->m < d) {
      throw InvalidArgument("fsir config: need m >= d");
    }
  } else {
    const auto& r = std::get<RateTruncation>(truncation);
    if (!(r.alpha > 1.0)) throw InvalidArgument("fsir config: alpha must exceed 1");
    if (!(r.beta > r.alpha / 2.0 + 1.0)) throw InvalidArgument("fsir config: beta must exceed alpha/2 + 1");
    if (!(r.c_m > 0.0)) throw InvalidArgument("fsir config: c_m must be positive");
  }
  if (const auto* r = std::get_if<RidgeMethod>(&method)) {
    if (!(r->rho > 0.0)) throw InvalidArgument("fsir config: rho must be positive");
  } else if (!(std::get<TruncatedMethod>(method).rel_floor >= 0.0)) {
    throw InvalidArgument("fsir config: rel_floor must be non-negative");
  }
}

std::size_t rate_truncation_level(std::size_t n, const RateTruncation& rule) {
  const double exponent = 1.0 / (rule.alpha + 2.0 * rule.beta);
  const double m = std::round(rule.c_m * std::pow(static_cast<double>(n), exponent));
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

// ---------------------------------------------------------------------------
// FsirPipeline

FsirPipeline::FsirPipeline(const FunctionalSample& sample, std::size_t slices)
    : n_(sample.size()),
      grid_(sample.grid_ptr()),
      partition_(slice_sample(sample, slices)),
      means_(),
      covariance_(OperatorMatrix::zero(grid_)),
      gamma_e_(OperatorMatrix::zero(grid_)) {
  std::optional<FunctionalSample> owned;
  if (!sample.centered()) {
    owned.emplace(center_sample(sample));
  }
  const FunctionalSample& centered = owned ? *owned : sample;
  covariance_ = outer_product_average(centered.curves(), grid_, 1.0 / static_cast<double>(n_));
  covariance_eigen_ = eig_top(covariance_, grid_->size());
  means_ = slice_means(centered, partition_);
  gamma_e_ = gamma_e_hat(means_);
  gamma_e_eigen_ = eig_top(gamma_e_, std::min(grid_->size(), slices));

  const auto& ev = gamma_e_eigen_.values;
  if (ev.size() > 0 && ev[0] > 0.0) {
    std::size_t r = 0;
    while (r < gamma_e_eigen_.count() && ev[static_cast<Eigen::Index>(r)] > kRankTol * ev[0]) {
      ++r;
    }
    // With L distinct responses the centered conditional means take L
    // values, so their covariance has rank at most L - 1.
    gamma_e_rank_ = std::min(r, distinct_values(sample.responses()) - 1);
  }
}

std::vector<Curve> FsirPipeline::inverse_regression_directions(std::size_t d) const {
  if (d < 1 || d > gamma_e_eigen_.count()) {
    throw InvalidArgument("requested " + std::to_string(d) + " directions, but only " +
                          std::to_string(gamma_e_eigen_.count()) + " are available with H=" +
                          std::to_string(slices()));
  }
  std::vector<Curve> out;
  out.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    out.push_back(gamma_e_eigen_.function(k));
  }
  return out;
}

CentralSpaceEstimate FsirPipeline::base_estimate(std::size_t d) const {
  CentralSpaceEstimate est;
  est.grid = grid_;
  est.eta_hat = inverse_regression_directions(d);
  est.gamma_e_eigenvalues = gamma_e_eigen_.values.head(static_cast<Eigen::Index>(d));
  est.diagnostics.gamma_e_rank = gamma_e_rank_;
  if (gamma_e_rank_ < d) {
    est.diagnostics.rank_deficient = true;
    est.diagnostics.warnings.push_back("sliced conditional covariance has numerical rank " +
                                       std::to_string(gamma_e_rank_) + " < d = " + std::to_string(d) +
                                       "; trailing directions come from its null eigenfunctions");
  }
  return est;
}

CentralSpaceEstimate FsirPipeline::truncated(std::size_t d, std::size_t m, double rel_floor) const {
  if (m < 1 || m > grid_->size()) {
    throw InvalidArgument("truncation level must be in [1, " + std::to_string(grid_->size()) + "]");
  }
  CentralSpaceEstimate est = base_estimate(d);
  const OperatorMatrix pinv = truncated_pinv(covariance_eigen_, m, rel_floor);
  const std::size_t r = retained_rank(covariance_eigen_, m, rel_floor);
  est.m_used = m;
  est.diagnostics.retained_rank = r;
  est.diagnostics.condition_number =
      covariance_eigen_.values[0] / covariance_eigen_.values[static_cast<Eigen::Index>(r - 1)];
  if (r < m) {
    est.diagnostics.warnings.push_back("only " + std::to_string(r) + " of " + std::to_string(m) +
                                       " covariance eigenvalues are above the floor");
  }
  for (const auto& eta : est.eta_hat) {
    est.directions.push_back(apply(pinv, eta));
  }
  return est;
}

CentralSpaceEstimate FsirPipeline::ridge(std::size_t d, double rho) const {
  CentralSpaceEstimate est = base_estimate(d);
  est.directions = ridge_inverse_apply(covariance_, rho, est.eta_hat);
  est.rho_used = rho;
  return est;
}

CentralSpaceEstimate FsirPipeline::estimate(const FsirConfig& cfg) const {
  cfg.validate();
  if (cfg.slices != slices()) {
    throw InvalidArgument("config slice count differs from the pipeline's");
  }
  if (const auto* ridge_method = std::get_if<RidgeMethod>(&cfg.method)) {
    return ridge(cfg.d, ridge_method->rho);
  }
  std::size_t m = 0;
  if (const auto* e = std::get_if<ExplicitTruncation>(&cfg.truncation)) {
    m = e->m;
  } else {
    m = std::max(cfg.d, rate_truncation_level(n_, std::get<RateTruncation>(cfg.truncation)));
  }
  return truncated(cfg.d, m, std::get<TruncatedMethod>(cfg.method).rel_floor);
}

// ---------------------------------------------------------------------------

CentralSpaceEstimate fit_fsir(const FunctionalSample& sample, const FsirConfig& cfg) {
  cfg.validate();
  if (cfg.slices > sample.size()) {
    throw InvalidArgument("fit_fsir: more slices than observations");
  }
  return FsirPipeline(sample, cfg.slices).estimate(cfg);
}

CentralSpaceEstimate fit_rfsir(const FunctionalSample& sample, const FsirConfig& cfg) {
  if (!std::holds_alternative<RidgeMethod>(cfg.method)) {
    throw InvalidArgument("fit_rfsir: config must use the ridge method");
  }
  return fit_fsir(sample, cfg);
}

std::vector<Curve> inverse_regression_space(const FunctionalSample& sample, std::size_t slices,
                                            std::size_t d) {
  if (d < 1 || slices < d) {
    throw InvalidArgument("inverse_regression_space: need H >= d >= 1");
  }
  return FsirPipeline(sample, slices).inverse_regression_directions(d);
}

std::vector<double> reduce(const CentralSpaceEstimate& est, const Curve& f) {
  std::vector<double> out;
  out.reserve(est.directions.size());
  for (const auto& beta : est.directions) {
    out.push_back(inner_product(beta, f));
  }
  return out;
}

Eigen::MatrixXd reduce(const CentralSpaceEstimate& est, const FunctionalSample& sample) {
  require_same_grid(*est.grid, sample.grid(), "reduce");
  Eigen::MatrixXd dirs(static_cast<Eigen::Index>(sample.grid().size()),
                       static_cast<Eigen::Index>(est.directions.size()));
  for (std::size_t k = 0; k < est.directions.size(); ++k) {
    dirs.col(static_cast<Eigen::Index>(k)) = sample.grid().weights().cwiseProduct(est.directions[k].values());
  }
  return sample.curves() * dirs;
}

}  // namespace fsir
