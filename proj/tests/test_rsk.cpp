#include <doctest.h>

#include <algorithm>
#include <vector>

#include "ytlab/error.hpp"
#include "ytlab/model.hpp"
#include "ytlab/rsk.hpp"

using namespace ytlab;

namespace {

// Plain tableau insertion, kept deliberately naive.
std::vector<std::int64_t> naive_shape(const std::vector<std::uint32_t>& w) {
  std::vector<std::vector<std::uint32_t>> rows;
  for (auto x : w) {
    std::size_t r = 0;
    for (;; ++r) {
      if (r == rows.size()) {
        rows.push_back({x});
        break;
      }
      auto& row = rows[r];
      auto it = std::upper_bound(row.begin(), row.end(), x);
      if (it == row.end()) {
        row.push_back(x);
        break;
      }
      std::swap(*it, x);
    }
  }
  std::vector<std::int64_t> shape;
  for (const auto& row : rows) shape.push_back(static_cast<std::int64_t>(row.size()));
  return shape;
}

// O(n^2) longest weakly increasing subsequence.
std::int64_t quadratic_lis(const std::vector<std::uint32_t>& w) {
  std::vector<std::int64_t> best(w.size(), 1);
  std::int64_t out = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (w[j] <= w[i]) best[i] = std::max(best[i], best[j] + 1);
    }
    out = std::max(out, best[i]);
  }
  return out;
}

model::Word word(std::vector<std::uint32_t> letters, std::size_t m) { return {std::move(letters), m}; }

void for_each_word(std::size_t n, std::size_t m, auto&& fn) {
  std::vector<std::uint32_t> w(n, 0);
  for (;;) {
    fn(w);
    std::size_t i = 0;
    while (i < n && ++w[i] == m) w[i++] = 0;
    if (i == n) break;
  }
}

}  // namespace

TEST_SUITE("rsk") {

TEST_CASE("shape examples") {
  CHECK(rsk::rsk_shape(word({0, 0, 1}, 2)).rows == std::vector<std::int64_t>{3});
  CHECK(rsk::rsk_shape(word({1, 0}, 2)).rows == std::vector<std::int64_t>{1, 1});
  CHECK(rsk::rsk_shape(word({1, 0, 1, 0}, 2)).rows == std::vector<std::int64_t>{2, 2});
  CHECK(rsk::rsk_shape(word({}, 3)).rows.empty());
}

TEST_CASE("lis examples") {
  CHECK(rsk::lis(word({0, 2, 1}, 3)) == 2);
  CHECK(rsk::lis(word({}, 3)) == 0);
  CHECK(rsk::lis(word(std::vector<std::uint32_t>(9, 4), 5)) == 9);
}

TEST_CASE("theta and vk") {
  const std::vector<double> ones{1, 1, 1};
  CHECK(rsk::theta(ones) == std::vector<double>{1, 2, 3});
  RandomStream rng(4, 4);
  std::vector<double> x(7);
  for (auto& v : x) v = rng.normal();
  const auto back = rsk::theta_inv(rsk::theta(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-14));

  CHECK(rsk::vk_from_shape({{2, 2}}, 1) == 2);
  CHECK(rsk::vk_from_shape({{3, 1}}, 2) == 4);
  CHECK(rsk::vk_from_shape({{3, 1}}, 5) == 4);
  CHECK_THROWS_AS(rsk::vk_from_shape({{3, 1}}, 0), InvalidParameter);

  // theta_inv of (V_1, ..., V_m) recovers the rows.
  const auto shape = rsk::rsk_shape(word({2, 0, 1, 1, 0, 2, 2, 1}, 3));
  std::vector<double> v;
  for (std::size_t k = 1; k <= 3; ++k) v.push_back(static_cast<double>(rsk::vk_from_shape(shape, k)));
  const auto rows = rsk::theta_inv(v);
  for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i] == static_cast<double>(shape.row(i)));
}

TEST_CASE("greene oracle examples") {
  const auto w = word({1, 0, 1}, 2);
  CHECK(rsk::greene_oracle(w, 2, 1) == 2);
  CHECK(rsk::greene_oracle(w, 2, 2) == 3);
  for (std::size_t k = 1; k <= 3; ++k) CHECK(rsk::greene_oracle(word({}, 3), 3, k) == 0);
  CHECK(rsk::greene_oracle(word({0, 0, 1, 2, 2}, 3), 3, 1) == 5);
  CHECK_THROWS_AS(rsk::greene_oracle(word(std::vector<std::uint32_t>(40, 0), 8), 8, 4), SizeGuard);
}

TEST_CASE("bitset insertion agrees with naive insertion") {
  RandomStream rng(8, 0);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t m = 1 + rng.below(150);
    const auto w = model::sample_word(model::uniform_distribution(m), rng.below(120), rng);
    CHECK(rsk::rsk_shape(w).rows == naive_shape(w.letters));
  }
}

TEST_CASE("exhaustive: V_k from RSK equals the nested-path maximum, n <= 6, m <= 3") {
  for (std::size_t m = 1; m <= 3; ++m) {
    for (std::size_t n = 0; n <= 6; ++n) {
      for_each_word(n, m, [&](const std::vector<std::uint32_t>& letters) {
        const auto w = word(letters, m);
        const auto shape = rsk::rsk_shape(w);
        for (std::size_t k = 1; k <= m; ++k) {
          REQUIRE(rsk::vk_from_shape(shape, k) == rsk::greene_oracle(w, m, k));
        }
      });
    }
  }
}

TEST_CASE("lis equals the first row and the quadratic oracle") {
  RandomStream rng(12, 1);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t m = 1 + rng.below(26);
    const auto w = model::sample_word(model::uniform_distribution(m), rng.below(201), rng);
    const auto l = rsk::lis(w);
    REQUIRE(l == rsk::rsk_shape(w).row(0));
    if (t % 10 == 0) REQUIRE(l == quadratic_lis(w.letters));
  }
}

TEST_CASE("shape invariants and concavity of V_k") {
  RandomStream rng(13, 1);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 1 + rng.below(12);
    const auto w = model::sample_word(model::uniform_distribution(m), rng.below(300), rng);
    const auto s = rsk::rsk_shape(w);
    CHECK(s.size() == static_cast<std::int64_t>(w.n()));
    CHECK(s.height() <= m);
    for (std::size_t i = 1; i < s.height(); ++i) CHECK(s.rows[i] <= s.rows[i - 1]);
    std::int64_t prev_diff = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 1; k <= m; ++k) {
      const auto diff = rsk::vk_from_shape(s, k) - (k > 1 ? rsk::vk_from_shape(s, k - 1) : 0);
      CHECK(diff <= prev_diff);
      prev_diff = diff;
    }
  }
}

}  // TEST_SUITE
