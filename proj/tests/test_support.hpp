#pragma once
#include "fsir/func_core.hpp"

#include <Eigen/Core>

#include <functional>
#include <random>

namespace fsir::testing {

inline Curve random_curve(const GridPtr& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(static_cast<Eigen::Index>(grid->size()));
  for (auto& x : v) x = nd(rng);
  return Curve(grid, v);
}

inline double max_abs_diff(const Curve& a, const Curve& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

// Random sample whose curves lie in span{phi_1..phi_k} with i.i.d. N(0, 1) coefficients.
inline FunctionalSample cosine_sample(const GridPtr& grid, std::size_t n, int k, std::mt19937_64& rng,
                                      const std::function<double(const Eigen::VectorXd&)>& link) {
  std::normal_distribution<double> nd;
  CurveMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(grid->size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  std::vector<Curve> basis;
  for (int j = 1; j <= k; ++j) basis.push_back(cosine_basis(j, grid));
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd c(k);
    for (auto& v : c) v = nd(rng);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
    for (int j = 0; j < k; ++j) row += c[j] * basis[static_cast<std::size_t>(j)].values();
    x.row(static_cast<Eigen::Index>(i)) = row.transpose();
    y[static_cast<Eigen::Index>(i)] = link(c);
  }
  return FunctionalSample(grid, std::move(x), std::move(y));
}

}  // namespace fsir::testing
