#pragma once

// Slicing of the response by order statistics, per-slice means of the
// predictor curves, and the sliced estimate of var(E[X | Y]).

#include "fsir/func_core.hpp"
#include "fsir/operators.hpp"

#include <cstddef>
#include <vector>

namespace fsir {

/// Equal-count partition of a sample by its sorted responses.
struct SlicedPartition {
  std::size_t slice_count = 0;
  // Slice id of each observation, in original sample order.
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> slice_sizes;
  // Largest response in slices 0..H-2.
  std::vector<double> boundaries;
  // Observation indices in stable response order.
  std::vector<std::size_t> order;
};

struct SliceMeans {
  GridPtr grid;
  // H x G, row h is the mean curve of slice h.
  CurveMatrix means;
  std::vector<std::size_t> slice_sizes;

  std::size_t slice_count() const noexcept { return slice_sizes.size(); }
  Curve mean(std::size_t h) const;
};

/// Stable sort by response, then contiguous blocks whose sizes differ by at
/// most one, larger blocks first.
SlicedPartition slice_sample(const FunctionalSample& sample, std::size_t slices);

SliceMeans slice_means(const FunctionalSample& sample, const SlicedPartition& partition);

/// (1/H) sum_h mean_h (x) mean_h.
OperatorMatrix gamma_e_hat(const SliceMeans& means);

inline constexpr std::size_t kDefaultSubSlices = 10;

/// Empirical weak-sliced-stability ratio along direction u.
///
/// The sorted sample is cut into H slices and each slice into `sub_slices`
/// contiguous pieces. With p the projections <u, piece mean>, the ratio is
/// the average within-slice variance of p divided by the variance of all p,
/// both with divisor equal to the count, so the ratio lies in [0, 1]. Small values mean the slicing resolves the variation
/// of E[<u, X> | Y]; values near one mean it does not.
double wssc_ratio(const FunctionalSample& sample, std::size_t slices, std::size_t sub_slices,
                  const Curve& u);

}  // namespace fsir
