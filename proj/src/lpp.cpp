#include "ytlab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ytlab/error.hpp"
#include "ytlab/rsk.hpp"

namespace ytlab::lpp {

WeightMatrix WeightMatrix::from_word(const model::Word& word, std::size_t m) {
  WeightMatrix w(word.n(), m);
  for (std::size_t i = 0; i < word.n(); ++i) {
    const auto x = word.letters[i];
    if (x >= m) throw InvalidInput("letter outside alphabet");
    w(i, x) = 1.0;
  }
  return w;
}

double lpp1(const WeightMatrix& w, std::size_t row_limit) {
  const std::size_t m = w.cols();
  if (m == 0) throw InvalidParameter("lpp1 needs at least one column");
  row_limit = std::min(row_limit, w.rows());
  // best[l]: best total with the path currently on level l.
  std::vector<double> best(m, 0.0);
  for (std::size_t i = 0; i < row_limit; ++i) {
    const auto r = w.row(i);
    double climb = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < m; ++l) {
      climb = std::max(climb, best[l]);
      best[l] = climb + r[l];
    }
  }
  // The path may still climb to the top level at the end.
  return *std::max_element(best.begin(), best.end());
}

namespace {

/// Strictly increasing k-tuples from {0..m-1}, in lexicographic order, with
/// for each coordinate the index of the tuple with that coordinate lowered
/// by one (or -1 when that tuple is not strictly increasing).
struct TupleSpace {
  std::vector<std::vector<std::uint32_t>> tuples;
  std::vector<std::vector<std::int64_t>> down;  // [coordinate][tuple]
};

TupleSpace build_tuples(std::size_t m, std::size_t k) {
  TupleSpace space;
  std::vector<std::uint32_t> cur(k);
  auto rec = [&](auto&& self, std::size_t pos, std::uint32_t from) -> void {
    if (pos == k) {
      space.tuples.push_back(cur);
      return;
    }
    for (std::uint32_t v = from; v + (k - pos) <= m; ++v) {
      cur[pos] = v;
      self(self, pos + 1, v + 1);
    }
  };
  rec(rec, 0, 0);

  std::map<std::vector<std::uint32_t>, std::int64_t> index;
  for (std::size_t s = 0; s < space.tuples.size(); ++s) index.emplace(space.tuples[s], static_cast<std::int64_t>(s));
  space.down.assign(k, std::vector<std::int64_t>(space.tuples.size(), -1));
  for (std::size_t s = 0; s < space.tuples.size(); ++s) {
    for (std::size_t j = 0; j < k; ++j) {
      auto t = space.tuples[s];
      if (t[j] == 0) continue;
      --t[j];
      if (j > 0 && t[j] <= t[j - 1]) continue;
      space.down[j][s] = index.at(t);
    }
  }
  return space;
}

double binomial(std::size_t m, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

double lppk(const WeightMatrix& w, std::size_t k, std::size_t row_limit) {
  const std::size_t m = w.cols();
  if (k == 0 || k > m) throw InvalidParameter("lppk needs 1 <= k <= m");
  row_limit = std::min(row_limit, w.rows());
  if (k == 1) return lpp1(w, row_limit);
  if (static_cast<double>(row_limit + 1) * binomial(m, k) > 1e8) {
    throw SizeGuard("lppk: rows * C(m, k) exceeds 10^8 DP states");
  }
  if (k == m) {
    double total = 0.0;
    for (std::size_t i = 0; i < row_limit; ++i) {
      for (double x : w.row(i)) total += x;
    }
    return total;
  }

  const TupleSpace space = build_tuples(m, k);
  const std::size_t states = space.tuples.size();
  std::vector<double> best(states, 0.0);
  for (std::size_t i = 0; i < row_limit; ++i) {
    // Paths may climb before collecting row i.  Value flows from a tuple to
    // every dominating tuple; sweeping the last coordinate first keeps each
    // intermediate tuple strictly increasing.
    for (std::size_t j = k; j-- > 0;) {
      const auto& down = space.down[j];
      for (std::size_t s = 0; s < states; ++s) {
        if (down[s] >= 0) best[s] = std::max(best[s], best[static_cast<std::size_t>(down[s])]);
      }
    }
    const auto r = w.row(i);
    for (std::size_t s = 0; s < states; ++s) {
      double add = 0.0;
      for (std::uint32_t level : space.tuples[s]) add += r[level];
      best[s] += add;
    }
  }
  return *std::max_element(best.begin(), best.end());
}

std::int64_t v1_prime(const model::Word& word, const model::LetterDistribution& dist) {
  const auto& J = dist.max_set();
  std::vector<std::int64_t> column(dist.m(), -1);
  for (std::size_t c = 0; c < J.size(); ++c) column[J[c]] = static_cast<std::int64_t>(c);
  WeightMatrix w(word.n(), J.size());
  for (std::size_t i = 0; i < word.n(); ++i) {
    const auto x = word.letters[i];
    if (x >= dist.m()) throw InvalidInput("letter outside alphabet");
    if (column[x] >= 0) w(i, static_cast<std::size_t>(column[x])) = 1.0;
  }
  return static_cast<std::int64_t>(std::llround(lpp1(w)));
}

std::vector<double> walk_u_sums(double p_star, std::size_t ell_max) {
  if (!(p_star >= 0.0 && p_star <= 1.0)) throw InvalidParameter("p_star must lie in [0, 1]");
  const double p = p_star;
  const double q = 1.0 - p_star;
  std::vector<double> U(ell_max + 1, 0.0);
  // prev[k] = u_{l-1,k} for k < l-1; u_{l-1,k} = 1 beyond.
  std::vector<double> prev;
  std::vector<double> cur;
  auto at = [](const std::vector<double>& row, std::size_t k) { return k < row.size() ? row[k] : 1.0; };
  for (std::size_t ell = 1; ell <= ell_max; ++ell) {
    cur.assign(ell, 0.0);
    cur[0] = q * at(prev, 1);
    for (std::size_t k = 1; k < ell; ++k) cur[k] = q * at(prev, k + 1) + p * at(prev, k - 1);
    double s = 0.0;
    for (double u : cur) s += u;
    U[ell] = s;
    prev.swap(cur);
  }
  return U;
}

std::vector<double> walk_u_sums_identity(double p_star, std::size_t ell_max) {
  if (!(p_star >= 0.0 && p_star <= 1.0)) throw InvalidParameter("p_star must lie in [0, 1]");
  const double p = p_star;
  const double q = 1.0 - p_star;
  std::vector<double> U(ell_max + 1, 0.0);
  std::vector<double> prev, cur;
  auto at = [](const std::vector<double>& row, std::size_t k) { return k < row.size() ? row[k] : 1.0; };
  double sum_u0 = 0.0;  // sum_{k=1}^{l-1} u_{k,0}
  for (std::size_t ell = 1; ell <= ell_max; ++ell) {
    U[ell] = (2.0 * static_cast<double>(ell) - 1.0) * q - q * sum_u0;
    cur.assign(ell, 0.0);
    cur[0] = q * at(prev, 1);
    for (std::size_t k = 1; k < ell; ++k) cur[k] = q * at(prev, k + 1) + p * at(prev, k - 1);
    sum_u0 += cur[0];
    prev.swap(cur);
  }
  return U;
}

double walk_plus_expectation_fixed(double p_star, std::size_t ell) {
  const auto U = walk_u_sums(p_star, ell);
  return static_cast<double>(ell) - U[ell];
}

double walk_plus_expectation(const ErrorControlParams& params) {
  if (params.n < 1) throw InvalidParameter("walk_plus_expectation needs n >= 1");
  if (!(params.p_2nd > 0.0 && params.p_2nd < params.p_max)) {
    throw InvalidParameter("walk_plus_expectation needs 0 < p_2nd < p_max");
  }
  const double rate = params.p_max + params.p_2nd;
  if (rate > 1.0) throw InvalidParameter("p_max + p_2nd must not exceed 1");
  const std::size_t n = params.n;
  const auto nd = static_cast<double>(n);

  std::size_t lo = 0, hi = n;
  if (n > 10000) {
    const double mean = nd * rate;
    const double sd = std::sqrt(nd * rate * (1.0 - rate));
    lo = static_cast<std::size_t>(std::max(0.0, std::floor(mean - 12.0 * sd)));
    hi = static_cast<std::size_t>(std::min(nd, std::ceil(mean + 12.0 * sd)));
  }

  auto log_pmf = [&](std::size_t ell) {
    const auto l = static_cast<double>(ell);
    const double log_choose = std::lgamma(nd + 1.0) - std::lgamma(l + 1.0) - std::lgamma(nd - l + 1.0);
    const double a = ell == 0 ? 0.0 : l * std::log(rate);
    const double b = ell == n ? 0.0 : (nd - l) * std::log1p(-rate);
    return log_choose + a + b;
  };
  // Terms whose probability underflows contribute exactly zero; stop the
  // walk table there.
  while (hi > lo && std::exp(log_pmf(hi)) == 0.0) --hi;
  if (hi > 200000) throw SizeGuard("walk_plus_expectation: binomial window too wide");

  const auto U = walk_u_sums(params.p_star(), hi);
  double gamma = 0.0;
  for (std::size_t ell = lo; ell <= hi; ++ell) {
    const double w = std::exp(log_pmf(ell));
    gamma += w * (static_cast<double>(ell) - U[ell]);
  }
  return gamma;
}

GapEstimate gap_mc(const model::LetterDistribution& dist, std::size_t n, std::size_t samples,
                   std::uint64_t seed, Exec exec) {
  if (dist.is_uniform()) throw DegenerateInput("gap_mc: V_1 - V_1' is identically 0 for a uniform law");
  if (samples == 0) throw InvalidParameter("gap_mc needs at least one sample");
  GapEstimate est;
  est.samples = samples;
  est.gaps = parallel::generate<double>(samples, exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const auto word = model::sample_word(dist, n, rng);
    return static_cast<double>(rsk::lis(word) - v1_prime(word, dist));
  });
  const double N = static_cast<double>(samples);
  est.mean = parallel::ordered_sum(est.gaps) / N;
  double ss = 0.0;
  for (double g : est.gaps) ss += (g - est.mean) * (g - est.mean);
  est.std_error = samples > 1 ? std::sqrt(ss / (N - 1.0) / N) : 0.0;
  return est;
}

}  // namespace ytlab::lpp
