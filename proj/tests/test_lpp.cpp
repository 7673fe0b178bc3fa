#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ytlab/error.hpp"
#include "ytlab/lpp.hpp"
#include "ytlab/model.hpp"
#include "ytlab/rsk.hpp"

using namespace ytlab;
using lpp::WeightMatrix;

namespace {

// Direct enumeration of the nested family: path j (1-based) visits levels
// j..m-k+j with cut points c[j][l]; paths are disjoint when
// c[j][l] <= c[j-1][l-1].
double brute_force_paths(const WeightMatrix& w, std::size_t k) {
  const std::size_t n = w.rows(), m = w.cols();
  const std::size_t cuts = m - k;
  std::vector<std::vector<std::size_t>> c(k + 1, std::vector<std::size_t>(cuts));
  auto column_sum = [&](std::size_t col, std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t i = from; i < to; ++i) s += w(i, col);
    return s;
  };
  auto path_value = [&](std::size_t j) {
    double s = 0.0;
    std::size_t prev = 0;
    for (std::size_t t = 0; t <= cuts; ++t) {
      const std::size_t next = t < cuts ? c[j][t] : n;
      s += column_sum(j - 1 + t, prev, next);
      prev = next;
    }
    return s;
  };
  double best = -1e300;
  std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t j, std::size_t t, double acc) {
    if (j > k) {
      best = std::max(best, acc);
      return;
    }
    if (t == cuts) {
      rec(j + 1, 0, acc + path_value(j));
      return;
    }
    const std::size_t lo = t > 0 ? c[j][t - 1] : 0;
    // c[j][t] is the cut after level j+t; the previous path left level j+t
    // at its cut index t.
    const std::size_t hi = j > 1 ? c[j - 1][t] : n;
    for (std::size_t v = lo; v <= hi; ++v) {
      c[j][t] = v;
      rec(j, t + 1, acc);
    }
  };
  rec(1, 0, 0.0);
  return best;
}

WeightMatrix random_matrix(std::size_t n, std::size_t m, RandomStream& rng) {
  WeightMatrix w(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) w(i, j) = rng.normal();
  return w;
}

// E[(max_{1<=k<=l} S_k)^+] by enumerating all 2^l sign paths.
double walk_enumeration(double p, std::size_t ell) {
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << ell); ++mask) {
    double prob = 1.0;
    int s = 0, best = 0;
    for (std::size_t i = 0; i < ell; ++i) {
      const bool up = (mask >> i) & 1u;
      prob *= up ? p : 1.0 - p;
      s += up ? 1 : -1;
      best = std::max(best, s);
    }
    total += prob * best;
  }
  return total;
}

}  // namespace

TEST_SUITE("lpp") {

TEST_CASE("lpp1 examples") {
  CHECK(lpp::lpp1(WeightMatrix::from_word({{1, 0, 1}, 2}, 2)) == 2.0);
  CHECK(lpp::lpp1(WeightMatrix(5, 3, 0.0)) == 0.0);
  RandomStream rng(1, 1);
  const auto w = random_matrix(9, 1, rng);
  double total = 0.0;
  for (std::size_t i = 0; i < 9; ++i) total += w(i, 0);
  CHECK(lpp::lpp1(w) == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("lppk examples") {
  RandomStream rng(2, 1);
  for (int t = 0; t < 100; ++t) {
    const auto w = random_matrix(1 + rng.below(20), 1 + rng.below(6), rng);
    CHECK(lpp::lppk(w, 1) == lpp::lpp1(w));
    double total = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (double x : w.row(i)) total += x;
    CHECK(lpp::lppk(w, w.cols()) == doctest::Approx(total).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lpp::lppk(WeightMatrix(3, 2), 3), InvalidParameter);
  CHECK_THROWS_AS(lpp::lppk(WeightMatrix(2000, 40), 8), SizeGuard);
}

TEST_CASE("lppk equals brute-force enumeration of the nested family") {
  RandomStream rng(3, 1);
  // The 4 x 3, k = 2 instance of the specification first.
  for (int t = 0; t < 200; ++t) {
    const auto w = random_matrix(4, 3, rng);
    CHECK(lpp::lppk(w, 2) == doctest::Approx(brute_force_paths(w, 2)).epsilon(1e-12));
  }
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 2 + rng.below(3);
    const std::size_t n = 1 + rng.below(5);
    const std::size_t k = 1 + rng.below(static_cast<std::uint32_t>(m));
    const auto w = random_matrix(n, m, rng);
    CHECK(lpp::lppk(w, k) == doctest::Approx(brute_force_paths(w, k)).epsilon(1e-12));
  }
}

TEST_CASE("lppk on occupancy equals V_k from RSK") {
  RandomStream rng(4, 1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 1 + rng.below(5);
    const auto word = model::sample_word(model::uniform_distribution(m), rng.below(30), rng);
    const auto shape = rsk::rsk_shape(word);
    const auto w = WeightMatrix::from_word(word, m);
    for (std::size_t k = 1; k <= m; ++k) {
      CHECK(lpp::lppk(w, k) == static_cast<double>(rsk::vk_from_shape(shape, k)));
    }
  }
}

TEST_CASE("lppk is monotone in k for non-negative weights") {
  RandomStream rng(5, 1);
  for (int t = 0; t < 100; ++t) {
    WeightMatrix w(1 + rng.below(15), 2 + rng.below(4));
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (auto& x : w.row(i)) x = rng.uniform();
    for (std::size_t k = 2; k <= w.cols(); ++k) CHECK(lpp::lppk(w, k) >= lpp::lppk(w, k - 1));
  }
}

TEST_CASE("v1_prime") {
  // Letters 0, 1 carry p_max; letter 2 is the tail.
  const std::vector<double> tail{0.2};
  const auto d = model::nonuniform_distribution(2, 0.4, tail);
  CHECK(lpp::v1_prime({{2, 2, 2}, 3}, d) == 0);
  CHECK(lpp::v1_prime({{0, 2, 0}, 3}, d) == 2);
  CHECK(rsk::lis(model::Word{{0, 2, 0}, 3}) == 2);
  CHECK(lpp::v1_prime({{0, 2, 1}, 3}, d) == 2);
  CHECK(rsk::lis(model::Word{{0, 2, 2}, 3}) == 3);
  CHECK(lpp::v1_prime({{0, 2, 2}, 3}, d) == 1);

  const auto u = model::uniform_distribution(4);
  RandomStream rng(6, 1);
  for (int t = 0; t < 200; ++t) {
    const auto w = model::sample_word(u, rng.below(50), rng);
    CHECK(lpp::v1_prime(w, u) == rsk::lis(w));
  }

  // 0 <= V_1 - V_1' on every word of length <= 8 over three letters.
  for (std::size_t n = 0; n <= 8; ++n) {
    std::vector<std::uint32_t> letters(n, 0);
    for (;;) {
      const model::Word w{letters, 3};
      REQUIRE(rsk::lis(w) >= lpp::v1_prime(w, d));
      std::size_t i = 0;
      while (i < n && ++letters[i] == 3) letters[i++] = 0;
      if (i == n) break;
    }
  }
}

TEST_CASE("walk recursion") {
  for (double p : {0.3, 0.5, 0.7}) {
    const auto U = lpp::walk_u_sums(p, 12);
    const auto V = lpp::walk_u_sums_identity(p, 12);
    CHECK(U[1] == doctest::Approx(1.0 - p).epsilon(1e-15));
    for (std::size_t ell = 1; ell <= 12; ++ell) {
      CHECK(std::fabs(U[ell] - V[ell]) < 1e-12);
      CHECK(std::fabs(lpp::walk_plus_expectation_fixed(p, ell) - walk_enumeration(p, ell)) < 1e-12);
    }
  }
  CHECK(std::fabs(lpp::walk_plus_expectation_fixed(0.5, 2) - 0.75) < 1e-15);
}

TEST_CASE("gamma_n bound and small-rate ratio stability") {
  const lpp::ErrorControlParams grid[] = {
      {0.01, 1e-4, 500}, {0.3, 0.1, 1000}, {0.05, 0.049, 20000}, {0.6, 0.3, 300}};
  for (const auto& params : grid) {
    CHECK(lpp::walk_plus_expectation(params) <= static_cast<double>(params.n) * params.p_2nd);
  }
  // When n (p_max + p_2nd) << 1 the walk rarely makes more than one step and
  // gamma_n / (n p_2nd) stays close to 1 across the doubling grid.
  std::vector<double> ratios;
  for (std::size_t n : {500, 1000, 2000, 4000}) {
    const lpp::ErrorControlParams p{1e-6, 1e-7, n};
    ratios.push_back(lpp::walk_plus_expectation(p) / (static_cast<double>(n) * p.p_2nd));
  }
  for (double r : ratios) {
    CHECK(r > 0.0);
    CHECK(std::fabs(r / ratios.front() - 1.0) < 0.10);
  }
  CHECK_THROWS_AS(lpp::walk_plus_expectation({0.1, 0.2, 10}), InvalidParameter);
}

TEST_CASE("gap_mc agrees with an independent per-word recomputation") {
  const auto d = model::equal_tail_distribution(50, 0.01, 1e-4);
  const std::uint64_t seed = 77;
  const std::size_t n = 2000;
  const auto est = lpp::gap_mc(d, n, 24, seed, Exec::serial);
  for (std::size_t i = 0; i < 24; ++i) {
    RandomStream rng(seed, i);
    const auto w = model::sample_word(d, n, rng);
    // V_1' = longest weakly increasing run through max letters only.
    std::vector<std::uint32_t> kept;
    for (auto x : w.letters)
      if (d.prob(x) == d.p_max()) kept.push_back(x);
    const double gap = static_cast<double>(rsk::rsk_shape(w).row(0) - rsk::lis(kept));
    CHECK(est.gaps[i] == gap);
    CHECK(gap >= 0.0);
  }
  CHECK_THROWS_AS(lpp::gap_mc(model::uniform_distribution(5), 100, 10, 1), DegenerateInput);

  // A tail of zero mass is never drawn.
  const std::vector<double> empty_tail{0.0};
  const auto no_tail = model::nonuniform_distribution(2, 0.5, empty_tail);
  CHECK(lpp::gap_mc(no_tail, 200, 20, 3).mean == 0.0);
}

}  // TEST_SUITE
