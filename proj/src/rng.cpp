#include "fsir/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

namespace fsir {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

PhiloxCounter block_for(std::uint64_t key, std::uint64_t block) noexcept {
  return philox4x32_10({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0u, 0u},
                       {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
}

inline std::uint64_t half(const PhiloxCounter& c, std::uint64_t which) noexcept {
  const std::size_t base = which == 0 ? 0 : 2;
  return (static_cast<std::uint64_t>(c[base + 1]) << 32) | c[base];
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

CounterStream::CounterStream(std::uint64_t key, std::uint64_t start) noexcept : key_(key), position_(start) {}

std::uint64_t CounterStream::next_u64() noexcept {
  const std::uint64_t block = position_ >> 1;
  if (block != cached_block_) {
    cache_ = block_for(key_, block);
    cached_block_ = block;
  }
  return half(cache_, position_++ & 1u);
}

std::uint64_t CounterStream::at(std::uint64_t key, std::uint64_t index) noexcept {
  return half(block_for(key, index >> 1), index & 1u);
}

double CounterStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal() { return normal_quantile(uniform()); }

std::uint64_t CounterStream::below(std::uint64_t bound) noexcept {
  // Rejecting draws below 2^64 mod bound keeps the result unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) {
      return x % bound;
    }
  }
}

double normal_quantile(double u) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); }

std::vector<std::size_t> permutation(std::size_t n, CounterStream& stream) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

}  // namespace fsir
