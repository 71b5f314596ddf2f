#pragma once

// Discretized L^2[0,1]: uniform grids with trapezoid weights, curves sampled
// on them, and samples of (curve, response) pairs.

#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fsir {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform grid on [0,1] with trapezoid quadrature weights summing to one.
class Grid {
 public:
  explicit Grid(std::size_t size);

  std::size_t size() const noexcept { return nodes_.size(); }
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  // Componentwise square roots of the weights; maps function values to
  // coordinates in which the L^2 inner product is the Euclidean one.
  const Eigen::VectorXd& sqrt_weights() const noexcept { return sqrt_weights_; }

  // Two uniform grids are interchangeable iff they have the same size.
  bool operator==(const Grid& other) const noexcept { return size() == other.size(); }

 private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd sqrt_weights_;
};

GridPtr make_grid(std::size_t size);

bool same_grid(const Grid& a, const Grid& b) noexcept;
void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// A function on [0,1] stored by its values at the grid nodes.
class Curve {
 public:
  Curve(GridPtr grid, Eigen::VectorXd values);

  static Curve zero(GridPtr grid);
  static Curve constant(GridPtr grid, double value);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  Curve& operator+=(const Curve& other);
  Curve& operator-=(const Curve& other);
  Curve& operator*=(double factor);

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

Curve operator+(Curve a, const Curve& b);
Curve operator-(Curve a, const Curve& b);
Curve operator*(double factor, Curve c);
Curve operator*(Curve c, double factor);

/// Row-major n x G matrix, one curve per row.
using CurveMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n (curve, response) pairs on a shared grid.
class FunctionalSample {
 public:
  FunctionalSample(GridPtr grid, CurveMatrix curves, Eigen::VectorXd responses,
                   bool centered = false);
  FunctionalSample(std::span<const Curve> curves, std::span<const double> responses);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(responses_.size()); }
  const CurveMatrix& curves() const noexcept { return curves_; }
  const Eigen::VectorXd& responses() const noexcept { return responses_; }
  bool centered() const noexcept { return centered_; }

  Curve curve(std::size_t i) const;
  // Rows selected by index, in the given order.
  FunctionalSample subset(std::span<const std::size_t> indices) const;

 private:
  GridPtr grid_;
  CurveMatrix curves_;
  Eigen::VectorXd responses_;
  bool centered_;
};

double inner_product(const Curve& f, const Curve& g);
double l2_norm(const Curve& f);

/// phi_1 = 1, phi_j(t) = sqrt(2) cos((j-1) pi t) for j >= 2.
Curve cosine_basis(int j, GridPtr grid);

struct KlPair {
  Curve function;
  double eigenvalue;
};

/// k-th Karhunen-Loeve pair of standard Brownian motion on [0,1]:
/// sqrt(2) sin((k - 1/2) pi t) with eigenvalue ((k - 1/2) pi)^-2.
KlPair bm_kl_basis(int k, GridPtr grid);
double bm_kl_eigenvalue(int k);

/// Subtracts the pointwise sample mean from every curve.
FunctionalSample center_sample(const FunctionalSample& sample);

/// Pointwise sample mean of the curves.
Curve mean_curve(const FunctionalSample& sample);

}  // namespace fsir
