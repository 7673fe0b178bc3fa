#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ytlab/parallel.hpp"
#include "ytlab/random.hpp"

namespace ytlab::randmat {

/// GUE spectrum with density proportional to
/// prod_{i<j} (x_i - x_j)^2 prod_j exp(-x_j^2 / 2), sorted non-increasing.
struct SpectrumSample {
  std::vector<double> eigenvalues;
  bool traceless = false;

  std::size_t m() const noexcept { return eigenvalues.size(); }
  double trace() const noexcept;
};

/// Hermite beta = 2 tridiagonal model: diagonal N(0, 1), off-diagonal
/// b_i = sqrt(Gamma(m - i, 1)) for i = 1..m-1, i.e. chi_{2(m-i)} / sqrt 2.
struct TridiagonalModel {
  std::vector<double> diag;
  std::vector<double> off;
};
TridiagonalModel sample_gue_tridiagonal(std::size_t m, RandomStream& rng);

/// Full spectrum (implicit QL).
SpectrumSample sample_gue_spectrum(std::size_t m, RandomStream& rng);

/// Top `count` eigenvalues only (Sturm bisection, relative tolerance 1e-10).
std::vector<double> sample_gue_top(std::size_t m, std::size_t count, RandomStream& rng);

/// Shifts every eigenvalue by -trace/m.
SpectrumSample make_traceless(const SpectrumSample& spectrum);

/// Empirical reference law.  For r = 1 `values` is sorted ascending; for
/// r > 1 it holds N vectors of length r in sample order (row-major) so that
/// per-sample relations between coordinates stay available.
struct ReferenceDistribution {
  std::string statistic;
  std::size_t m_ref = 0;
  std::size_t r = 1;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  double at(std::size_t sample, std::size_t k) const { return values[sample * r + k]; }
  /// Sorted marginal of coordinate k (0-based).
  std::vector<double> marginal(std::size_t k) const;
};

/// N samples of m_ref^{1/6} (lambda_max - 2 sqrt(m_ref)).
/// Requires m_ref >= 50 and N >= 100.
ReferenceDistribution tw_reference(std::size_t m_ref, std::size_t samples, std::uint64_t seed,
                                   Exec exec = Exec::parallel);

/// N vectors (m_ref^{1/6} (lambda_1 + ... + lambda_k - 2 k sqrt(m_ref)))_{k<=r}.
/// Sample i uses the same stream as tw_reference sample i, so coordinate 1
/// reproduces tw_reference exactly.
ReferenceDistribution fr_reference(std::size_t m_ref, std::size_t r, std::size_t samples,
                                   std::uint64_t seed, Exec exec = Exec::parallel);

/// CSV (sample_id,k,value) plus a JSON sidecar (<csv>.json).
void save_reference(const ReferenceDistribution& ref, const std::filesystem::path& csv_path);
ReferenceDistribution load_reference(const std::filesystem::path& csv_path);

}  // namespace ytlab::randmat
