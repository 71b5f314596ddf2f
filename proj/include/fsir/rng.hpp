#pragma once

// Counter-based random streams (Philox4x32-10). A stream is identified by a
// 64-bit key; draw i of a stream depends only on (key, i), so streams can be
// generated in any order and on any thread with identical results.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fsir {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Stream key of replication `index` under `seed`.
constexpr std::uint64_t replication_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return seed ^ index;
}

class CounterStream {
 public:
  explicit CounterStream(std::uint64_t key, std::uint64_t start = 0) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  // Index of the next 64-bit draw.
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal by inverse-CDF of uniform().
  double normal();

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// 64-bit draw at an absolute index, without touching the stream position.
  static std::uint64_t at(std::uint64_t key, std::uint64_t index) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t position_;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  PhiloxCounter cache_{};
};

/// Maps a uniform in (0,1) to the standard normal quantile.
double normal_quantile(double u);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, CounterStream& stream);

}  // namespace fsir
