#include "fsir/func_core.hpp"

#include "fsir/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fsir {

Grid::Grid(std::size_t size) {
  if (size < 2) {
    throw InvalidArgument("grid needs at least 2 nodes, got " + std::to_string(size));
  }
  const auto g = static_cast<Eigen::Index>(size);
  const double h = 1.0 / static_cast<double>(size - 1);
  nodes_.resize(g);
  weights_.setConstant(g, h);
  for (Eigen::Index i = 0; i < g; ++i) {
    nodes_[i] = static_cast<double>(i) * h;
  }
  nodes_[g - 1] = 1.0;
  weights_[0] = 0.5 * h;
  weights_[g - 1] = 0.5 * h;
  sqrt_weights_ = weights_.cwiseSqrt();
}

GridPtr make_grid(std::size_t size) { return std::make_shared<const Grid>(size); }

bool same_grid(const Grid& a, const Grid& b) noexcept { return &a == &b || a == b; }

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!same_grid(a, b)) {
    throw InvalidArgument(std::string(where) + ": grid mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + " nodes)");
  }
}

// ---------------------------------------------------------------------------
// Curve

Curve::Curve(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) {
    throw InvalidArgument("curve without a grid");
  }
  if (static_cast<std::size_t>(values_.size()) != grid_->size()) {
    throw InvalidArgument("curve has " + std::to_string(values_.size()) + " values on a grid of " +
                          std::to_string(grid_->size()));
  }
  if (!values_.allFinite()) {
    throw InvalidArgument("curve values must be finite");
  }
}

Curve Curve::zero(GridPtr grid) { return constant(std::move(grid), 0.0); }

Curve Curve::constant(GridPtr grid, double value) {
  const auto g = static_cast<Eigen::Index>(grid->size());
  return Curve(std::move(grid), Eigen::VectorXd::Constant(g, value));
}

Curve& Curve::operator+=(const Curve& other) {
  require_same_grid(*grid_, other.grid(), "curve addition");
  values_ += other.values_;
  return *this;
}

Curve& Curve::operator-=(const Curve& other) {
  require_same_grid(*grid_, other.grid(), "curve subtraction");
  values_ -= other.values_;
  return *this;
}

Curve& Curve::operator*=(double factor) {
  values_ *= factor;
  return *this;
}

Curve operator+(Curve a, const Curve& b) { return a += b; }
Curve operator-(Curve a, const Curve& b) { return a -= b; }
Curve operator*(double factor, Curve c) { return c *= factor; }
Curve operator*(Curve c, double factor) { return c *= factor; }

// ---------------------------------------------------------------------------
// FunctionalSample

FunctionalSample::FunctionalSample(GridPtr grid, CurveMatrix curves, Eigen::VectorXd responses,
                                   bool centered)
    : grid_(std::move(grid)),
      curves_(std::move(curves)),
      responses_(std::move(responses)),
      centered_(centered) {
  if (!grid_) {
    throw InvalidArgument("sample without a grid");
  }
  if (curves_.rows() != responses_.size()) {
    throw InvalidArgument("sample has " + std::to_string(curves_.rows()) + " curves but " +
                          std::to_string(responses_.size()) + " responses");
  }
  if (responses_.size() < 2) {
    throw InvalidArgument("sample needs at least 2 observations");
  }
  if (static_cast<std::size_t>(curves_.cols()) != grid_->size()) {
    throw InvalidArgument("sample curves do not match the grid size");
  }
  if (!responses_.allFinite()) {
    throw InvalidArgument("sample responses must be finite");
  }
  if (!curves_.allFinite()) {
    throw InvalidArgument("sample curves must be finite");
  }
}

namespace {

CurveMatrix stack_curves(std::span<const Curve> curves) {
  if (curves.empty()) {
    throw InvalidArgument("sample needs at least 2 observations");
  }
  const auto& grid = curves.front().grid();
  CurveMatrix out(static_cast<Eigen::Index>(curves.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    require_same_grid(grid, curves[i].grid(), "FunctionalSample");
    out.row(static_cast<Eigen::Index>(i)) = curves[i].values().transpose();
  }
  return out;
}

}  // namespace

FunctionalSample::FunctionalSample(std::span<const Curve> curves, std::span<const double> responses)
    : FunctionalSample(curves.empty() ? nullptr : curves.front().grid_ptr(), stack_curves(curves),
                       Eigen::Map<const Eigen::VectorXd>(responses.data(),
                                                         static_cast<Eigen::Index>(responses.size())),
                       false) {}

Curve FunctionalSample::curve(std::size_t i) const {
  if (i >= size()) {
    throw InvalidArgument("curve index out of range");
  }
  return Curve(grid_, curves_.row(static_cast<Eigen::Index>(i)).transpose());
}

FunctionalSample FunctionalSample::subset(std::span<const std::size_t> indices) const {
  CurveMatrix rows(static_cast<Eigen::Index>(indices.size()), curves_.cols());
  Eigen::VectorXd y(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= size()) {
      throw InvalidArgument("subset index out of range");
    }
    const auto src = static_cast<Eigen::Index>(indices[k]);
    rows.row(static_cast<Eigen::Index>(k)) = curves_.row(src);
    y[static_cast<Eigen::Index>(k)] = responses_[src];
  }
  return FunctionalSample(grid_, std::move(rows), std::move(y), false);
}

// ---------------------------------------------------------------------------
// Inner products and bases

double inner_product(const Curve& f, const Curve& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  return (f.grid().weights().array() * f.values().array() * g.values().array()).sum();
}

double l2_norm(const Curve& f) { return std::sqrt(inner_product(f, f)); }

Curve cosine_basis(int j, GridPtr grid) {
  if (j < 1) {
    throw InvalidArgument("cosine basis index must be >= 1");
  }
  if (j == 1) {
    return Curve::constant(std::move(grid), 1.0);
  }
  const double freq = static_cast<double>(j - 1) * std::numbers::pi;
  Eigen::VectorXd v = (grid->nodes().array() * freq).cos() * std::numbers::sqrt2;
  return Curve(std::move(grid), std::move(v));
}

double bm_kl_eigenvalue(int k) {
  if (k < 1) {
    throw InvalidArgument("Karhunen-Loeve index must be >= 1");
  }
  const double freq = (static_cast<double>(k) - 0.5) * std::numbers::pi;
  return 1.0 / (freq * freq);
}

KlPair bm_kl_basis(int k, GridPtr grid) {
  const double eigenvalue = bm_kl_eigenvalue(k);
  const double freq = (static_cast<double>(k) - 0.5) * std::numbers::pi;
  Eigen::VectorXd v = (grid->nodes().array() * freq).sin() * std::numbers::sqrt2;
  return {Curve(std::move(grid), std::move(v)), eigenvalue};
}

Curve mean_curve(const FunctionalSample& sample) {
  return Curve(sample.grid_ptr(), sample.curves().colwise().mean().transpose());
}

FunctionalSample center_sample(const FunctionalSample& sample) {
  const Eigen::RowVectorXd mean = sample.curves().colwise().mean();
  CurveMatrix centered = sample.curves().rowwise() - mean;
  return FunctionalSample(sample.grid_ptr(), std::move(centered), sample.responses(), true);
}

}  // namespace fsir
