#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ytlab {

/// Philox4x32-10 counter-based block function (Salmon et al. 2011).
/// Output depends only on (counter, key), so any (seed, stream, position)
/// triple maps to the same bits on every platform and thread layout.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Mixes a base seed with a role tag so that independent sample families
/// of one experiment never share streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept;

/// Sequential view onto one Philox stream.  Key = seed, counter high word =
/// stream index, counter low word = block position.  Cheap to construct;
/// callers make one per sample index.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform integer in [0, bound), unbiased (Lemire rejection).
  std::uint32_t below(std::uint32_t bound) noexcept;

  /// Standard normal via Box-Muller; both variates of a pair are used.
  double normal() noexcept;

  /// Gamma(shape, 1) by Marsaglia-Tsang.
  double gamma(double shape) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ytlab
