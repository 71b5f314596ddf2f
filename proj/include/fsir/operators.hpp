#pragma once

// Self-adjoint integral operators on the discretized L^2[0,1].
//
// An operator is stored by its kernel K sampled on the grid and acts as
//
//   (K f)(t_i) = sum_j w_j K(t_i, t_j) f(t_j).
//
// With D = diag(sqrt(w)) the map f -> D f is an isometry onto R^G, and the
// operator becomes the ordinary symmetric matrix D K D. All spectral work is
// done in those coordinates.

#include "fsir/func_core.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fsir {

class OperatorMatrix {
 public:
  OperatorMatrix(GridPtr grid, Eigen::MatrixXd kernel);

  static OperatorMatrix zero(GridPtr grid);
  static OperatorMatrix identity(GridPtr grid);
  // scale * f (x) f
  static OperatorMatrix rank_one(const Curve& f, double scale = 1.0);

  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Grid& grid() const noexcept { return *grid_; }
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }
  std::size_t size() const noexcept { return grid_->size(); }

  // D K D.
  Eigen::MatrixXd symmetric_form() const;
  static OperatorMatrix from_symmetric_form(GridPtr grid, const Eigen::MatrixXd& a);

  // Largest |K_ij - K_ji| relative to max(1, max |K_ij|).
  double asymmetry() const;
  bool is_symmetric(double tol = 1e-10) const { return asymmetry() <= tol; }

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(double factor);

 private:
  GridPtr grid_;
  Eigen::MatrixXd kernel_;
};

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator*(double factor, OperatorMatrix a);

/// (a o b) f = a(b(f)).
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);

/// Top eigenpairs of a self-adjoint operator. Values are non-increasing,
/// functions are L^2-orthonormal and each one has its largest-magnitude
/// entry positive.
struct EigenSystem {
  GridPtr grid;
  Eigen::VectorXd values;
  // G x k, column i holds the values of the i-th eigenfunction.
  Eigen::MatrixXd functions;

  std::size_t count() const noexcept { return static_cast<std::size_t>(values.size()); }
  Curve function(std::size_t i) const;
};

/// scale * sum_m c_m (x) c_m.
OperatorMatrix outer_product_average(std::span<const Curve> curves, double scale);
/// Same, with the curves given as the rows of a matrix on `grid`.
OperatorMatrix outer_product_average(const CurveMatrix& rows, GridPtr grid, double scale);

Curve apply(const OperatorMatrix& op, const Curve& f);

/// Top-k eigenpairs under the weighted inner product.
EigenSystem eig_top(const OperatorMatrix& op, std::size_t k);

inline constexpr double kDefaultRelFloor = 1e-10;

/// sum over i <= m with lambda_i > rel_floor * lambda_1 of lambda_i^-1 phi_i (x) phi_i.
OperatorMatrix truncated_pinv(const OperatorMatrix& op, std::size_t m,
                              double rel_floor = kDefaultRelFloor);
/// Same, reusing a precomputed decomposition with at least m pairs.
OperatorMatrix truncated_pinv(const EigenSystem& eig, std::size_t m,
                              double rel_floor = kDefaultRelFloor);
/// Number of the first m eigenvalues above rel_floor * lambda_1.
std::size_t retained_rank(const EigenSystem& eig, std::size_t m, double rel_floor = kDefaultRelFloor);

/// Solves (op + rho I) g = f.
Curve ridge_inverse_apply(const OperatorMatrix& op, double rho, const Curve& f);
/// Same for several right-hand sides sharing one factorization.
std::vector<Curve> ridge_inverse_apply(const OperatorMatrix& op, double rho, std::span<const Curve> fs);

/// Largest absolute eigenvalue.
double operator_norm(const OperatorMatrix& op);

}  // namespace fsir
