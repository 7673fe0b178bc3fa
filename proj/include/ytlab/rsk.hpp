#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ytlab/model.hpp"

namespace ytlab::rsk {

/// Row lengths of an RSK tableau, weakly decreasing; rows past the height
/// are zero.
struct YoungShape {
  std::vector<std::int64_t> rows;

  std::size_t height() const noexcept { return rows.size(); }
  std::int64_t size() const noexcept;
  /// Length of row i (0-based), zero beyond the height.
  std::int64_t row(std::size_t i) const noexcept { return i < rows.size() ? rows[i] : 0; }
};

/// Shape of the RSK insertion tableau of a word.  Row insertion bumps the
/// leftmost entry strictly greater than the inserted letter, so rows are
/// weakly increasing and columns strictly increasing.
///
/// Rows are stored as per-letter counts with an occupancy bitset, which
/// makes each row step O(m/64) regardless of row length.
YoungShape rsk_shape(const model::Word& word);

/// Longest weakly increasing subsequence (patience sorting).
std::int64_t lis(std::span<const std::uint32_t> letters);
inline std::int64_t lis(const model::Word& word) { return lis(word.letters); }

/// Partial sums: theta(x)_j = x_1 + ... + x_j.
std::vector<double> theta(std::span<const double> x);
/// First differences, inverse of theta.
std::vector<double> theta_inv(std::span<const double> v);

/// V_k = sum of the first k rows.
std::int64_t vk_from_shape(const YoungShape& shape, std::size_t k);

/// Brute-force maximum over the nested index family J_{k,m}(n) of the
/// occupancy increments: path j runs through levels j..m-k+j with cut
/// points 0 = c_{j,j-1} <= c_{j,j} <= ... <= c_{j,m-k+j} = n, and paths are
/// disjoint: c_{j,l} <= c_{j-1,l-1}.
///
/// Throws SizeGuard when (n+1)^{k(m-k)} exceeds 10^7.
std::int64_t greene_oracle(const model::Word& word, std::size_t m, std::size_t k);

}  // namespace ytlab::rsk
