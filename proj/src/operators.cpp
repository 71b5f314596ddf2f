#include "fsir/operators.hpp"

#include "fsir/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace fsir {

namespace {

constexpr double kSymmetryTol = 1e-10;

void require_symmetric(const OperatorMatrix& op, const char* where) {
  const double asym = op.asymmetry();
  if (!(asym <= kSymmetryTol)) {
    throw InvalidArgument(std::string(where) + ": kernel is not symmetric (relative asymmetry " +
                          std::to_string(asym) + ")");
  }
}

Eigen::MatrixXd symmetrized_form(const OperatorMatrix& op) {
  Eigen::MatrixXd a = op.symmetric_form();
  return 0.5 * (a + a.transpose());
}

// Flips each column so that its entry of largest magnitude is positive.
void fix_signs(Eigen::MatrixXd& functions) {
  for (Eigen::Index c = 0; c < functions.cols(); ++c) {
    Eigen::Index arg = 0;
    functions.col(c).cwiseAbs().maxCoeff(&arg);
    if (functions(arg, c) < 0.0) {
      functions.col(c) *= -1.0;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(GridPtr grid, Eigen::MatrixXd kernel)
    : grid_(std::move(grid)), kernel_(std::move(kernel)) {
  if (!grid_) {
    throw InvalidArgument("operator without a grid");
  }
  const auto g = static_cast<Eigen::Index>(grid_->size());
  if (kernel_.rows() != g || kernel_.cols() != g) {
    throw InvalidArgument("operator kernel must be " + std::to_string(g) + "x" + std::to_string(g));
  }
  if (!kernel_.allFinite()) {
    throw InvalidArgument("operator kernel must be finite");
  }
}

OperatorMatrix OperatorMatrix::zero(GridPtr grid) {
  const auto g = static_cast<Eigen::Index>(grid->size());
  return OperatorMatrix(std::move(grid), Eigen::MatrixXd::Zero(g, g));
}

OperatorMatrix OperatorMatrix::identity(GridPtr grid) {
  Eigen::MatrixXd k = grid->weights().cwiseInverse().asDiagonal();
  return OperatorMatrix(std::move(grid), std::move(k));
}

OperatorMatrix OperatorMatrix::rank_one(const Curve& f, double scale) {
  return OperatorMatrix(f.grid_ptr(), scale * f.values() * f.values().transpose());
}

Eigen::MatrixXd OperatorMatrix::symmetric_form() const {
  const auto& s = grid_->sqrt_weights();
  return s.asDiagonal() * kernel_ * s.asDiagonal();
}

OperatorMatrix OperatorMatrix::from_symmetric_form(GridPtr grid, const Eigen::MatrixXd& a) {
  const Eigen::VectorXd inv = grid->sqrt_weights().cwiseInverse();
  Eigen::MatrixXd k = inv.asDiagonal() * a * inv.asDiagonal();
  return OperatorMatrix(std::move(grid), std::move(k));
}

double OperatorMatrix::asymmetry() const {
  const double scale = std::max(1.0, kernel_.cwiseAbs().maxCoeff());
  return (kernel_ - kernel_.transpose()).cwiseAbs().maxCoeff() / scale;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_grid(*grid_, other.grid(), "operator addition");
  kernel_ += other.kernel_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_grid(*grid_, other.grid(), "operator subtraction");
  kernel_ -= other.kernel_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(double factor) {
  kernel_ *= factor;
  return *this;
}

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
OperatorMatrix operator*(double factor, OperatorMatrix a) { return a *= factor; }

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid(), "compose");
  Eigen::MatrixXd k = a.kernel() * a.grid().weights().asDiagonal() * b.kernel();
  return OperatorMatrix(a.grid_ptr(), std::move(k));
}

Curve EigenSystem::function(std::size_t i) const {
  if (i >= count()) {
    throw InvalidArgument("eigenfunction index out of range");
  }
  return Curve(grid, functions.col(static_cast<Eigen::Index>(i)));
}

// ---------------------------------------------------------------------------
// Construction and action

OperatorMatrix outer_product_average(std::span<const Curve> curves, double scale) {
  if (curves.empty()) {
    throw InvalidArgument("outer_product_average: no curves");
  }
  const auto& grid = curves.front().grid_ptr();
  CurveMatrix rows(static_cast<Eigen::Index>(curves.size()), static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    require_same_grid(*grid, curves[i].grid(), "outer_product_average");
    rows.row(static_cast<Eigen::Index>(i)) = curves[i].values().transpose();
  }
  return outer_product_average(rows, grid, scale);
}

OperatorMatrix outer_product_average(const CurveMatrix& rows, GridPtr grid, double scale) {
  if (rows.rows() == 0) {
    throw InvalidArgument("outer_product_average: no curves");
  }
  if (static_cast<std::size_t>(rows.cols()) != grid->size()) {
    throw InvalidArgument("outer_product_average: curves do not match the grid");
  }
  const auto g = rows.cols();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(g, g);
  k.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose(), scale);
  k.triangularView<Eigen::StrictlyUpper>() = k.transpose();
  return OperatorMatrix(std::move(grid), std::move(k));
}

Curve apply(const OperatorMatrix& op, const Curve& f) {
  require_same_grid(op.grid(), f.grid(), "apply");
  Eigen::VectorXd out = op.kernel() * f.grid().weights().cwiseProduct(f.values());
  return Curve(f.grid_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------
// Spectral operations

EigenSystem eig_top(const OperatorMatrix& op, std::size_t k) {
  require_symmetric(op, "eig_top");
  const std::size_t g = op.size();
  if (k == 0 || k > g) {
    throw InvalidArgument("eig_top: k must be in [1, " + std::to_string(g) + "]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_form(op));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_top: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const auto kk = static_cast<Eigen::Index>(k);
  EigenSystem out{op.grid_ptr(), solver.eigenvalues().tail(kk).reverse(),
                  solver.eigenvectors().rightCols(kk).rowwise().reverse()};
  out.functions = op.grid().sqrt_weights().cwiseInverse().asDiagonal() * out.functions;
  const auto& w = op.grid().weights();
  for (Eigen::Index c = 0; c < kk; ++c) {
    const double norm = std::sqrt(w.dot(out.functions.col(c).cwiseAbs2()));
    out.functions.col(c) /= norm;
  }
  fix_signs(out.functions);
  return out;
}

std::size_t retained_rank(const EigenSystem& eig, std::size_t m, double rel_floor) {
  if (m > eig.count()) {
    throw InvalidArgument("truncation level exceeds the available eigenpairs");
  }
  if (eig.count() == 0 || !(eig.values[0] > 0.0)) {
    throw DegenerateOperator("leading eigenvalue is not positive");
  }
  const double floor = rel_floor * eig.values[0];
  std::size_t r = 0;
  while (r < m && eig.values[static_cast<Eigen::Index>(r)] > floor) {
    ++r;
  }
  return r;
}

OperatorMatrix truncated_pinv(const EigenSystem& eig, std::size_t m, double rel_floor) {
  const auto r = static_cast<Eigen::Index>(retained_rank(eig, m, rel_floor));
  const auto phi = eig.functions.leftCols(r);
  Eigen::MatrixXd k = phi * eig.values.head(r).cwiseInverse().asDiagonal() * phi.transpose();
  return OperatorMatrix(eig.grid, std::move(k));
}

OperatorMatrix truncated_pinv(const OperatorMatrix& op, std::size_t m, double rel_floor) {
  if (m == 0 || m > op.size()) {
    throw InvalidArgument("truncated_pinv: m must be in [1, " + std::to_string(op.size()) + "]");
  }
  return truncated_pinv(eig_top(op, m), m, rel_floor);
}

std::vector<Curve> ridge_inverse_apply(const OperatorMatrix& op, double rho, std::span<const Curve> fs) {
  if (!(rho > 0.0)) {
    throw InvalidArgument("ridge_inverse_apply: rho must be positive");
  }
  require_symmetric(op, "ridge_inverse_apply");
  Eigen::MatrixXd a = symmetrized_form(op);
  a.diagonal().array() += rho;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ridge_inverse_apply: op + rho I is not positive definite");
  }
  const auto& s = op.grid().sqrt_weights();
  std::vector<Curve> out;
  out.reserve(fs.size());
  for (const auto& f : fs) {
    require_same_grid(op.grid(), f.grid(), "ridge_inverse_apply");
    Eigen::VectorXd g = llt.solve(s.cwiseProduct(f.values())).cwiseQuotient(s);
    if (!g.allFinite()) {
      throw NumericalError("ridge_inverse_apply: non-finite solution");
    }
    out.emplace_back(f.grid_ptr(), std::move(g));
  }
  return out;
}

Curve ridge_inverse_apply(const OperatorMatrix& op, double rho, const Curve& f) {
  return ridge_inverse_apply(op, rho, std::span<const Curve>(&f, 1)).front();
}

double operator_norm(const OperatorMatrix& op) {
  require_symmetric(op, "operator_norm");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_form(op), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("operator_norm: eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace fsir
