#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ytlab/lpp.hpp"
#include "ytlab/parallel.hpp"
#include "ytlab/random.hpp"

namespace ytlab::brownian {

enum class BundleMode { independent, exchangeable };

/// m Brownian paths sampled on a uniform grid.  increments(i, j) is the
/// increment of path j over [i*step, (i+1)*step]; path values are prefix sums.
struct BrownianBundle {
  std::size_t m = 0;
  double step = 0.0;
  double horizon = 0.0;
  BundleMode mode = BundleMode::independent;
  lpp::WeightMatrix increments;

  std::size_t steps() const noexcept { return increments.rows(); }
  /// B^j(t) at grid index i (t = i*step).
  double value(std::size_t j, std::size_t i) const;
};

/// Independent: i.i.d. N(0, step) increments.  Exchangeable: from i.i.d.
/// W^j, B^j = sqrt(m/(m-1)) (W^j - mean_l W^l), so each B^j is standard and
/// corr(B^i, B^j) = -1/(m-1).  The grid has round(steps_per_unit * horizon)
/// steps.
BrownianBundle sample_bundle(std::size_t m, std::size_t steps_per_unit, double horizon, BundleMode mode,
                             RandomStream& rng);

/// Sums consecutive blocks of `factor` increments (same paths, coarser grid).
BrownianBundle coarsen(const BrownianBundle& bundle, std::size_t factor);

/// Grid suprema sit below the continuous ones by about beta sigma sqrt(step)
/// per free breakpoint, beta = -zeta(1/2)/sqrt(2 pi), where sigma^2 is the
/// variance rate of the difference of two neighbouring paths.
enum class GridCorrection { none, continuity };

inline constexpr double kOvershootBeta = 0.5825971579390106;

/// beta * sigma_diff * sqrt(step) * k (m - k).
double continuity_shift(std::size_t m, std::size_t k, double step, BundleMode mode);

/// Discretized L_k(s, m): supremum over k disjoint nested chains of grid
/// breakpoints in [0, s] of the summed increments.
double l_k(const BrownianBundle& bundle, double s, std::size_t k,
           GridCorrection correction = GridCorrection::none);

/// Discretized D_k: single chain over k independent standard paths on [0, 1]
/// with `steps` grid steps.
double d_k(std::size_t k, std::size_t steps, RandomStream& rng, GridCorrection correction = GridCorrection::none);

struct NonUniformLimitParams {
  std::size_t k = 1;
  double p_max = 0.0;

  /// (sqrt(1 - k p_max) - 1) / k.
  double gaussian_coefficient() const;
};

/// ((sqrt(1 - k p_max) - 1)/k) sum_j B^j(1) + D_k on the same k paths.
double v1_limit_nonuniform(const NonUniformLimitParams& params, std::size_t steps, RandomStream& rng,
                           GridCorrection correction = GridCorrection::none);

/// Batch samplers: sample i uses stream i of `seed`.
std::vector<double> d_k_batch(std::size_t k, std::size_t steps, std::size_t samples, std::uint64_t seed,
                              Exec exec = Exec::parallel, GridCorrection correction = GridCorrection::none);

std::vector<double> v1_limit_batch(const NonUniformLimitParams& params, std::size_t steps, std::size_t samples,
                                   std::uint64_t seed, Exec exec = Exec::parallel,
                                   GridCorrection correction = GridCorrection::none);

/// (L_1(s), ..., L_r(s)) per sample, one fresh bundle per sample.
std::vector<std::vector<double>> l_k_batch(std::size_t m, std::size_t r, double s, std::size_t steps_per_unit,
                                           BundleMode mode, std::size_t samples, std::uint64_t seed,
                                           Exec exec = Exec::parallel,
                                           GridCorrection correction = GridCorrection::none);

}  // namespace ytlab::brownian
