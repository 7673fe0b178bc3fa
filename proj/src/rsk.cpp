#include "ytlab/rsk.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include "ytlab/error.hpp"

namespace ytlab::rsk {

std::int64_t YoungShape::size() const noexcept {
  return std::accumulate(rows.begin(), rows.end(), std::int64_t{0});
}

namespace {

/// One tableau row over an alphabet of size m: letter multiplicities plus a
/// bitset of letters present.
class CountRow {
 public:
  explicit CountRow(std::size_t m) : counts_(m, 0), bits_((m + 63) / 64, 0) {}

  /// Smallest letter present that is strictly greater than x, or -1.
  std::int64_t next_greater(std::uint32_t x) const noexcept {
    std::size_t word = (static_cast<std::size_t>(x) + 1) / 64;
    const unsigned offset = (x + 1) % 64;
    if (word >= bits_.size()) return -1;
    std::uint64_t w = bits_[word] & (~std::uint64_t{0} << offset);
    while (true) {
      if (w != 0) return static_cast<std::int64_t>(word * 64 + std::countr_zero(w));
      if (++word == bits_.size()) return -1;
      w = bits_[word];
    }
  }

  void add(std::uint32_t x) noexcept {
    if (counts_[x]++ == 0) bits_[x / 64] |= std::uint64_t{1} << (x % 64);
  }

  void remove(std::uint32_t x) noexcept {
    if (--counts_[x] == 0) bits_[x / 64] &= ~(std::uint64_t{1} << (x % 64));
  }

 private:
  std::vector<std::int64_t> counts_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

YoungShape rsk_shape(const model::Word& word) {
  std::size_t m = word.m;
  for (auto x : word.letters) m = std::max<std::size_t>(m, x + 1);

  std::vector<CountRow> rows;
  YoungShape shape;
  for (std::uint32_t letter : word.letters) {
    std::uint32_t x = letter;
    for (std::size_t r = 0;; ++r) {
      if (r == rows.size()) {
        rows.emplace_back(m);
        shape.rows.push_back(0);
      }
      const std::int64_t y = rows[r].next_greater(x);
      rows[r].add(x);
      if (y < 0) {
        ++shape.rows[r];
        break;
      }
      rows[r].remove(static_cast<std::uint32_t>(y));
      x = static_cast<std::uint32_t>(y);
    }
  }
  return shape;
}

std::int64_t lis(std::span<const std::uint32_t> letters) {
  std::vector<std::uint32_t> tails;
  for (std::uint32_t x : letters) {
    auto it = std::upper_bound(tails.begin(), tails.end(), x);
    if (it == tails.end()) {
      tails.push_back(x);
    } else {
      *it = x;
    }
  }
  return static_cast<std::int64_t>(tails.size());
}

std::vector<double> theta(std::span<const double> x) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (acc += x[i]);
  return out;
}

std::vector<double> theta_inv(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = i == 0 ? v[0] : v[i] - v[i - 1];
  return out;
}

std::int64_t vk_from_shape(const YoungShape& shape, std::size_t k) {
  if (k == 0) throw InvalidParameter("vk_from_shape needs k >= 1");
  std::int64_t v = 0;
  for (std::size_t i = 0; i < k && i < shape.rows.size(); ++i) v += shape.rows[i];
  return v;
}

std::int64_t greene_oracle(const model::Word& word, std::size_t m, std::size_t k) {
  if (k == 0 || k > m) throw InvalidParameter("greene_oracle needs 1 <= k <= m");
  const std::size_t n = word.n();
  const std::size_t free_per_path = m - k;
  const double tuples = std::pow(static_cast<double>(n + 1), static_cast<double>(k * free_per_path));
  if (tuples > 1e7) throw SizeGuard("greene_oracle: (n+1)^{k(m-k)} exceeds 10^7 candidate tuples");

  const auto occ = model::occupancy(word, m);

  // cut[j][l] for path j (0-based) and level index l in 0..m-k+1 relative to
  // the path's first level: cut[j][0] = 0, cut[j][m-k+1] = n.  Path j collects
  // level j+t over (cut[j][t], cut[j][t+1]].
  const std::size_t span = free_per_path + 2;
  std::vector<std::size_t> cut(k * span, 0);
  for (std::size_t j = 0; j < k; ++j) cut[j * span + span - 1] = n;

  // Absolute cut c_{j,l}: position where path j leaves absolute level l
  // (levels 1-based as in the index family); below the path's range it is 0,
  // above it is n.
  auto abs_cut = [&](std::size_t j, std::size_t level) -> std::size_t {
    const std::size_t first = j + 1;  // path j (0-based) starts at level j+1
    if (level + 1 < first) return 0;  // level < first - 1
    const std::size_t t = level + 1 - first;  // t = 0 for c_{j,j-1}
    if (t >= span) return n;
    return cut[j * span + t];
  };

  std::int64_t best = -1;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t t) {
    if (j == k) {
      std::int64_t total = 0;
      for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t u = 0; u + 1 < span; ++u) {
          const std::size_t level = p + u;  // 0-based column
          total += occ.s(cut[p * span + u + 1], level) - occ.s(cut[p * span + u], level);
        }
      }
      best = std::max(best, total);
      return;
    }
    if (t == span - 1) {
      // Disjointness with the previous path: c_{j,l} <= c_{j-1,l-1}.
      if (j > 0) {
        for (std::size_t level = 1; level < m; ++level) {
          if (abs_cut(j, level) > abs_cut(j - 1, level - 1)) return;
        }
      }
      rec(j + 1, 1);
      return;
    }
    const std::size_t lo = cut[j * span + t - 1];
    for (std::size_t c = lo; c <= n; ++c) {
      cut[j * span + t] = c;
      rec(j, t + 1);
    }
  };
  rec(0, 1);
  return best;
}

}  // namespace ytlab::rsk
