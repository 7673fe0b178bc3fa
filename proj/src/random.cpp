#include "ytlab/random.hpp"

#include <cmath>
#include <numbers>

namespace ytlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c,
                                 const Philox4x32::Key& k) noexcept {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  ctr = round(ctr, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    ctr = round(ctr, key);
  }
  return ctr;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept {
  // FNV-1a over the tag, then mixed with the seed.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : tag) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return splitmix64(seed ^ splitmix64(h));
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream) {}

void RandomStream::refill() noexcept {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_index_),
                                static_cast<std::uint32_t>(block_index_ >> 32),
                                static_cast<std::uint32_t>(stream_),
                                static_cast<std::uint32_t>(stream_ >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  buffer_ = Philox4x32::block(ctr, key);
  ++block_index_;
  used_ = 0;
}

std::uint32_t RandomStream::next_u32() noexcept {
  if (used_ == 4) refill();
  return buffer_[used_++];
}

std::uint64_t RandomStream::next_u64() noexcept {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RandomStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint32_t RandomStream::below(std::uint32_t bound) noexcept {
  std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
  auto low = static_cast<std::uint32_t>(m);
  if (low < bound) {
    const std::uint32_t threshold = (0u - bound) % bound;
    while (low < threshold) {
      m = static_cast<std::uint64_t>(next_u32()) * bound;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double RandomStream::gamma(double shape) noexcept {
  if (shape < 1.0) {
    // Boost to shape + 1 and rescale.
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace ytlab
