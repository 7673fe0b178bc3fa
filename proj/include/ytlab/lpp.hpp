#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ytlab/model.hpp"
#include "ytlab/parallel.hpp"

namespace ytlab::lpp {

/// Real weights indexed by (time row i, channel column j), row-major.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  /// Occupancy indicators of a word as weights.
  static WeightMatrix from_word(const model::Word& word, std::size_t m);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// Single monotone path: max over 0 = l_0 <= ... <= l_m = n of the summed
/// column increments.  O(n m); the first `row_limit` rows are used.
double lpp1(const WeightMatrix& w, std::size_t row_limit);
inline double lpp1(const WeightMatrix& w) { return lpp1(w, w.rows()); }

/// k disjoint nested paths (exact DP over strictly increasing level
/// tuples).  Throws SizeGuard when rows * C(m, k) exceeds 10^8.
double lppk(const WeightMatrix& w, std::size_t k, std::size_t row_limit);
inline double lppk(const WeightMatrix& w, std::size_t k) { return lppk(w, k, w.rows()); }

/// Longest increasing subsequence restricted to the maximal-probability
/// letters, computed as lpp1 on their occupancy columns.
std::int64_t v1_prime(const model::Word& word, const model::LetterDistribution& dist);

struct ErrorControlParams {
  double p_max = 0.0;
  double p_2nd = 0.0;
  std::size_t n = 0;

  double p_star() const noexcept { return p_2nd / (p_2nd + p_max); }
  double q_star() const noexcept { return 1.0 - p_star(); }
};

/// U_l = sum_{k<l} u_{l,k}, with u_{l,k} = P(max_{j<=l} S_j <= k) for the
/// +-1 walk stepping up with probability p_star.  Index l = 0..ell_max.
std::vector<double> walk_u_sums(double p_star, std::size_t ell_max);

/// Same sums from the closed identity U_l = (2l-1) q - q sum_{k=1}^{l-1} u_{k,0}.
std::vector<double> walk_u_sums_identity(double p_star, std::size_t ell_max);

/// E[(max_{1<=k<=l} S_k)^+] = l - U_l for a fixed walk length l.
double walk_plus_expectation_fixed(double p_star, std::size_t ell);

/// gamma_n = E[l - U_l] with l ~ Binomial(n, p_max + p_2nd).
/// Exact binomial mixture for n <= 10^4, mean +- 12 sd window beyond.
double walk_plus_expectation(const ErrorControlParams& params);

struct GapEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::vector<double> gaps;  ///< per-sample V_1 - V_1', in sample order
};

/// Monte Carlo E[V_1 - V_1'] over `samples` words of length n.  Sample i
/// uses stream i of `seed`; the mean is summed in index order.
GapEstimate gap_mc(const model::LetterDistribution& dist, std::size_t n, std::size_t samples,
                   std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace ytlab::lpp
