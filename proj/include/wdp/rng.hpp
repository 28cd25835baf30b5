#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace wdp {

/// Counter-based 64-bit generator: output i is a SplitMix64 finalizer applied to
/// (key + i * golden). Distributions below are implemented here rather than taken
/// from <random> so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, hi].
  double uniform_open_closed(double hi) { return hi * (1.0 - uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer on [lo, hi], unbiased (Lemire's multiply-shift with rejection).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
    unsigned __int128 prod = static_cast<unsigned __int128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next_u64()) * range;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return lo + static_cast<std::int64_t>(prod >> 64);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) std::swap(values[i - 1], values[index(i)]);
  }

  /// Independent child stream; does not advance this generator.
  Rng derive(std::uint64_t stream) const { return Rng(mix(key_ ^ mix(stream + kGolden))); }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace wdp
