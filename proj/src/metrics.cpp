#include "fsir/metrics.hpp"

#include "fsir/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace fsir {

namespace {

Eigen::MatrixXd to_coordinates(const GridPtr& grid, std::span<const Curve> curves) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(grid->size()), static_cast<Eigen::Index>(curves.size()));
  for (std::size_t c = 0; c < curves.size(); ++c) {
    require_same_grid(*grid, curves[c].grid(), "SubspaceBasis");
    x.col(static_cast<Eigen::Index>(c)) = grid->sqrt_weights().cwiseProduct(curves[c].values());
  }
  return x;
}

// Orthonormal basis of span(x) in Euclidean coordinates, with an explicit
// independence check on the Gram matrix of the normalized columns.
Eigen::MatrixXd gram_schmidt(Eigen::MatrixXd x) {
  const auto k = x.cols();
  for (Eigen::Index c = 0; c < k; ++c) {
    const double norm = x.col(c).norm();
    if (!(norm > 0.0)) {
      throw RankDeficiency("orthonormalize: zero curve in basis");
    }
    x.col(c) /= norm;
  }
  const Eigen::MatrixXd gram = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > kIndependenceTol)) {
    throw RankDeficiency("orthonormalize: curves are linearly dependent");
  }
  // Two passes of MGS.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < k; ++c) {
      for (Eigen::Index p = 0; p < c; ++p) {
        x.col(c) -= x.col(p).dot(x.col(c)) * x.col(p);
      }
      x.col(c).normalize();
    }
  }
  return x;
}

}  // namespace

SubspaceBasis::SubspaceBasis(std::vector<Curve> curves) : curves_(std::move(curves)) {
  if (curves_.empty()) {
    throw InvalidArgument("SubspaceBasis needs at least one curve");
  }
  grid_ = curves_.front().grid_ptr();
  q_ = gram_schmidt(to_coordinates(grid_, curves_));
}

SubspaceBasis::SubspaceBasis(GridPtr grid, const Eigen::MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    curves_.emplace_back(grid, columns.col(c));
  }
  if (curves_.empty()) {
    throw InvalidArgument("SubspaceBasis needs at least one curve");
  }
  grid_ = std::move(grid);
  q_ = gram_schmidt(to_coordinates(grid_, curves_));
}

std::vector<Curve> SubspaceBasis::orthonormal_curves() const {
  std::vector<Curve> out;
  const Eigen::VectorXd inv = grid_->sqrt_weights().cwiseInverse();
  for (Eigen::Index c = 0; c < q_.cols(); ++c) {
    out.emplace_back(grid_, q_.col(c).cwiseProduct(inv));
  }
  return out;
}

SubspaceBasis orthonormalize(const SubspaceBasis& basis) { return SubspaceBasis(basis.orthonormal_curves()); }

std::vector<Curve> orthonormalize(std::span<const Curve> curves) {
  return SubspaceBasis(std::vector<Curve>(curves.begin(), curves.end())).orthonormal_curves();
}

double subspace_error(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_grid(a.grid(), b.grid(), "subspace_error");
  const auto& qa = a.orthonormal_coordinates();
  const auto& qb = b.orthonormal_coordinates();

  // P_a - P_b vanishes off span[qa qb]; restrict it to an orthonormal basis
  // of that joint span and take the spectral norm of the small matrix.
  Eigen::MatrixXd joint(qa.rows(), qa.cols() + qb.cols());
  joint << qa, qb;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(joint, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv[r] > 1e-14 * sv[0]) {
    ++r;
  }
  const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd ua = u.transpose() * qa;
  const Eigen::MatrixXd ub = u.transpose() * qb;
  Eigen::MatrixXd diff = ua * ua.transpose() - ub * ub.transpose();
  diff = 0.5 * (diff + diff.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace fsir
