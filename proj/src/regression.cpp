#include "fsir/regression.hpp"

#include "fsir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fsir {

namespace {

double median_pairwise_distance(const Eigen::MatrixXd& x) {
  std::vector<double> dist;
  const auto n = x.rows();
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dist.push_back((x.row(i) - x.row(j)).norm());
    }
  }
  if (dist.empty()) {
    return 1.0;
  }
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double med = *mid;
  if (dist.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(dist.begin(), mid));
  }
  return med > 0.0 ? med : 1.0;
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& x, const GpHyperparameters& hp) {
  const auto n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = hp.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = squared_exponential(x.row(i), x.row(j), hp);
    }
  }
  return k;
}

}  // namespace

double squared_exponential(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                           const Eigen::Ref<const Eigen::RowVectorXd>& b, const GpHyperparameters& hp) {
  const double r2 = (a - b).squaredNorm();
  return hp.signal_variance * std::exp(-r2 / (2.0 * hp.length_scale * hp.length_scale));
}

GpModel fit_gp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::optional<GpGrid>& grid) {
  const auto n = x.rows();
  if (n < 3) throw InvalidArgument("fit_gp: need at least 3 training points");
  if (y.size() != n) throw InvalidArgument("fit_gp: inputs and targets differ in length");
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("fit_gp: non-finite training data");

  GpModel model;
  model.inputs_ = x;
  model.mean_ = y.mean();
  const Eigen::VectorXd yc = y.array() - model.mean_;
  const double var_y = yc.squaredNorm() / static_cast<double>(n);
  if (!(var_y > 0.0)) {
    model.constant_ = true;
    model.alpha_ = Eigen::VectorXd::Zero(n);
    return model;
  }

  GpGrid g = grid.value_or(GpGrid{});
  if (g.length_scales.empty()) {
    const double med = median_pairwise_distance(x);
    for (int k = -3; k <= 3; ++k) g.length_scales.push_back(med * std::ldexp(1.0, k));
  }
  if (g.signal_variances.empty()) {
    for (double f : {0.25, 1.0, 4.0}) g.signal_variances.push_back(f * var_y);
  }
  if (g.noise_variances.empty()) {
    for (double f : {1e-4, 1e-3, 1e-2, 1e-1}) g.noise_variances.push_back(f * var_y);
  }

  double best = -std::numeric_limits<double>::infinity();
  const double log2pi = std::log(2.0 * std::numbers::pi);
  for (double ell : g.length_scales) {
    for (double sf2 : g.signal_variances) {
      const GpHyperparameters base{ell, sf2, 0.0};
      const Eigen::MatrixXd k = kernel_matrix(x, base);
      for (double sn2 : g.noise_variances) {
        Eigen::MatrixXd a = k;
        a.diagonal().array() += sn2 + kGpJitter * sf2;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success) {
          continue;
        }
        const Eigen::VectorXd alpha = llt.solve(yc);
        const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        const double lml = -0.5 * yc.dot(alpha) - 0.5 * logdet - 0.5 * static_cast<double>(n) * log2pi;
        if (std::isfinite(lml) && lml > best) {
          best = lml;
          model.hp_ = {ell, sf2, sn2};
          model.alpha_ = alpha;
          model.lml_ = lml;
        }
      }
    }
  }
  if (!std::isfinite(best)) {
    throw NumericalError("fit_gp: kernel matrix is not positive definite for any hyperparameters");
  }
  return model;
}

double GpModel::predict(std::span<const double> x) const {
  if (x.size() != input_dimension()) {
    throw InvalidArgument("GpModel::predict: dimension mismatch");
  }
  if (constant_) {
    return mean_;
  }
  const Eigen::Map<const Eigen::RowVectorXd> row(x.data(), static_cast<Eigen::Index>(x.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < inputs_.rows(); ++i) {
    acc += squared_exponential(inputs_.row(i), row, hp_) * alpha_[i];
  }
  return mean_ + acc;
}

Eigen::VectorXd GpModel::predict(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) != input_dimension()) {
    throw InvalidArgument("GpModel::predict: dimension mismatch");
  }
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const Eigen::RowVectorXd row = x.row(r);
    out[r] = predict(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
  }
  return out;
}

double mse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw InvalidArgument("mse: length mismatch");
  }
  if (pred.empty()) {
    throw InvalidArgument("mse: empty input");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - truth[i];
    acc += e * e;
  }
  return acc / static_cast<double>(pred.size());
}

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  return mse(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
             std::span<const double>(truth.data(), static_cast<std::size_t>(truth.size())));
}

}  // namespace fsir
