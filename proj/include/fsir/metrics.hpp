#pragma once

// Distances between finite-dimensional subspaces of L^2[0,1].

#include "fsir/func_core.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fsir {

/// Linearly independent curves spanning a subspace, with an L^2-orthonormal
/// basis of the same span computed at construction.
class SubspaceBasis {
 public:
  explicit SubspaceBasis(std::vector<Curve> curves);
  SubspaceBasis(GridPtr grid, const Eigen::MatrixXd& columns);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  std::size_t dimension() const noexcept { return curves_.size(); }
  const std::vector<Curve>& curves() const noexcept { return curves_; }
  // G x k orthonormal basis in sqrt-weight coordinates.
  const Eigen::MatrixXd& orthonormal_coordinates() const noexcept { return q_; }
  std::vector<Curve> orthonormal_curves() const;

 private:
  GridPtr grid_;
  std::vector<Curve> curves_;
  Eigen::MatrixXd q_;
};

inline constexpr double kIndependenceTol = 1e-10;

/// Modified Gram-Schmidt under the L^2 inner product. Throws RankDeficiency
/// when the curves are linearly dependent.
SubspaceBasis orthonormalize(const SubspaceBasis& basis);
std::vector<Curve> orthonormalize(std::span<const Curve> curves);

/// || P_a - P_b || in operator norm.
double subspace_error(const SubspaceBasis& a, const SubspaceBasis& b);

}  // namespace fsir
