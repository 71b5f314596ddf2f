#include "fsir/slicing.hpp"

#include "fsir/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fsir {

namespace {

std::vector<std::size_t> stable_response_order(const Eigen::VectorXd& y) {
  std::vector<std::size_t> order(static_cast<std::size_t>(y.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&y](std::size_t a, std::size_t b) {
    return y[static_cast<Eigen::Index>(a)] < y[static_cast<Eigen::Index>(b)];
  });
  return order;
}

// Sizes of `parts` contiguous blocks covering `total` items, larger first.
std::vector<std::size_t> block_sizes(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> sizes(parts, total / parts);
  for (std::size_t h = 0; h < total % parts; ++h) {
    ++sizes[h];
  }
  return sizes;
}

// Population variance (divisor = count), so that the within/total ratio is
// bounded by one.
double variance(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return (v.array() - mean).square().mean();
}

}  // namespace

Curve SliceMeans::mean(std::size_t h) const {
  if (h >= slice_count()) {
    throw InvalidArgument("slice index out of range");
  }
  return Curve(grid, means.row(static_cast<Eigen::Index>(h)).transpose());
}

SlicedPartition slice_sample(const FunctionalSample& sample, std::size_t slices) {
  const std::size_t n = sample.size();
  if (slices < 2 || slices > n) {
    throw InvalidArgument("slice_sample: need 2 <= H <= n, got H=" + std::to_string(slices) +
                          ", n=" + std::to_string(n));
  }
  SlicedPartition p;
  p.slice_count = slices;
  p.order = stable_response_order(sample.responses());
  p.slice_sizes = block_sizes(n, slices);
  p.assignment.assign(n, 0);
  std::size_t pos = 0;
  for (std::size_t h = 0; h < slices; ++h) {
    for (std::size_t j = 0; j < p.slice_sizes[h]; ++j, ++pos) {
      p.assignment[p.order[pos]] = h;
    }
    if (h + 1 < slices) {
      p.boundaries.push_back(sample.responses()[static_cast<Eigen::Index>(p.order[pos - 1])]);
    }
  }
  return p;
}

SliceMeans slice_means(const FunctionalSample& sample, const SlicedPartition& partition) {
  const std::size_t n = sample.size();
  if (partition.assignment.size() != n || partition.slice_sizes.size() != partition.slice_count) {
    throw InvalidArgument("slice_means: partition does not belong to this sample");
  }
  const auto g = static_cast<Eigen::Index>(sample.grid().size());
  SliceMeans out{sample.grid_ptr(), CurveMatrix::Zero(static_cast<Eigen::Index>(partition.slice_count), g),
                 partition.slice_sizes};
  std::vector<std::size_t> counts(partition.slice_count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = partition.assignment[i];
    if (h >= partition.slice_count) {
      throw InvalidArgument("slice_means: slice id out of range");
    }
    out.means.row(static_cast<Eigen::Index>(h)) += sample.curves().row(static_cast<Eigen::Index>(i));
    ++counts[h];
  }
  for (std::size_t h = 0; h < partition.slice_count; ++h) {
    if (counts[h] != partition.slice_sizes[h] || counts[h] == 0) {
      throw InvalidArgument("slice_means: partition does not belong to this sample");
    }
    out.means.row(static_cast<Eigen::Index>(h)) /= static_cast<double>(counts[h]);
  }
  return out;
}

OperatorMatrix gamma_e_hat(const SliceMeans& means) {
  return outer_product_average(means.means, means.grid, 1.0 / static_cast<double>(means.slice_count()));
}

double wssc_ratio(const FunctionalSample& sample, std::size_t slices, std::size_t sub_slices,
                  const Curve& u) {
  require_same_grid(sample.grid(), u.grid(), "wssc_ratio");
  const std::size_t n = sample.size();
  if (slices < 1 || sub_slices < 1 || slices * sub_slices > n) {
    throw InvalidArgument("wssc_ratio: need H * H_sub <= n");
  }
  const auto order = stable_response_order(sample.responses());
  const Eigen::VectorXd proj = sample.curves() * u.grid().weights().cwiseProduct(u.values());

  // Projection of each piece mean, pieces laid out slice by slice.
  const auto slice_sizes = block_sizes(n, slices);
  Eigen::VectorXd pieces(static_cast<Eigen::Index>(slices * sub_slices));
  std::vector<Eigen::VectorXd> per_slice;
  std::size_t pos = 0;
  Eigen::Index k = 0;
  for (std::size_t h = 0; h < slices; ++h) {
    const auto piece_sizes = block_sizes(slice_sizes[h], sub_slices);
    Eigen::VectorXd local(static_cast<Eigen::Index>(sub_slices));
    for (std::size_t s = 0; s < sub_slices; ++s) {
      double sum = 0.0;
      for (std::size_t j = 0; j < piece_sizes[s]; ++j, ++pos) {
        sum += proj[static_cast<Eigen::Index>(order[pos])];
      }
      local[static_cast<Eigen::Index>(s)] = sum / static_cast<double>(piece_sizes[s]);
      pieces[k++] = local[static_cast<Eigen::Index>(s)];
    }
    per_slice.push_back(std::move(local));
  }

  const double total = variance(pieces);
  if (!(total > 0.0)) {
    throw DegenerateSignal("wssc_ratio: projected piece means have zero variance");
  }
  double within = 0.0;
  for (const auto& local : per_slice) {
    within += variance(local);
  }
  within /= static_cast<double>(slices);
  return within / total;
}

}  // namespace fsir
