#include "ytlab/brownian.hpp"

#include <cmath>

#include "ytlab/error.hpp"

namespace ytlab::brownian {

double BrownianBundle::value(std::size_t j, std::size_t i) const {
  if (j >= m || i > steps()) throw InvalidParameter("bundle index out of range");
  double v = 0.0;
  for (std::size_t t = 0; t < i; ++t) v += increments(t, j);
  return v;
}

BrownianBundle sample_bundle(std::size_t m, std::size_t steps_per_unit, double horizon, BundleMode mode,
                             RandomStream& rng) {
  if (m == 0) throw InvalidParameter("bundle needs m >= 1");
  if (steps_per_unit < 1) throw InvalidParameter("steps_per_unit must be >= 1");
  if (!(horizon > 0.0)) throw InvalidParameter("horizon must be positive");
  if (mode == BundleMode::exchangeable && m == 1) {
    throw InvalidParameter("exchangeable bundle needs m >= 2 (correlation -1/(m-1) undefined)");
  }
  const auto T = static_cast<std::size_t>(std::llround(static_cast<double>(steps_per_unit) * horizon));
  if (T == 0) throw InvalidParameter("horizon shorter than one grid step");

  BrownianBundle b;
  b.m = m;
  b.step = 1.0 / static_cast<double>(steps_per_unit);
  b.horizon = static_cast<double>(T) * b.step;
  b.mode = mode;
  b.increments = lpp::WeightMatrix(T, m);
  const double sd = std::sqrt(b.step);
  for (std::size_t i = 0; i < T; ++i) {
    auto row = b.increments.row(i);
    for (auto& x : row) x = sd * rng.normal();
    if (mode == BundleMode::exchangeable) {
      double mean = 0.0;
      for (double x : row) mean += x;
      mean /= static_cast<double>(m);
      const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(m - 1));
      for (auto& x : row) x = scale * (x - mean);
    }
  }
  return b;
}

BrownianBundle coarsen(const BrownianBundle& bundle, std::size_t factor) {
  if (factor == 0 || bundle.steps() % factor != 0) {
    throw InvalidParameter("coarsening factor must divide the step count");
  }
  BrownianBundle c = bundle;
  c.step = bundle.step * static_cast<double>(factor);
  c.increments = lpp::WeightMatrix(bundle.steps() / factor, bundle.m);
  for (std::size_t i = 0; i < bundle.steps(); ++i) {
    const auto src = bundle.increments.row(i);
    auto dst = c.increments.row(i / factor);
    for (std::size_t j = 0; j < bundle.m; ++j) dst[j] += src[j];
  }
  return c;
}

double continuity_shift(std::size_t m, std::size_t k, double step, BundleMode mode) {
  if (k > m) throw InvalidParameter("k must not exceed m");
  const double var_diff = mode == BundleMode::exchangeable && m > 1
                              ? 2.0 * static_cast<double>(m) / static_cast<double>(m - 1)
                              : 2.0;
  const double breakpoints = static_cast<double>(k) * static_cast<double>(m - k);
  return kOvershootBeta * std::sqrt(var_diff * step) * breakpoints;
}

double l_k(const BrownianBundle& bundle, double s, std::size_t k, GridCorrection correction) {
  if (k == 0 || k > bundle.m) throw InvalidParameter("l_k needs 1 <= k <= m");
  if (!(s >= 0.0) || s > bundle.horizon * (1.0 + 1e-12)) throw InvalidParameter("l_k needs 0 <= s <= horizon");
  const auto rows = std::min(bundle.steps(), static_cast<std::size_t>(std::llround(s / bundle.step)));
  double v = lpp::lppk(bundle.increments, k, rows);
  if (correction == GridCorrection::continuity && rows > 0) {
    v += continuity_shift(bundle.m, k, bundle.step, bundle.mode);
  }
  return v;
}

double d_k(std::size_t k, std::size_t steps, RandomStream& rng, GridCorrection correction) {
  if (k == 0) throw InvalidParameter("d_k needs k >= 1");
  const auto b = sample_bundle(k, steps, 1.0, BundleMode::independent, rng);
  double v = lpp::lpp1(b.increments);
  if (correction == GridCorrection::continuity) v += continuity_shift(k, 1, b.step, BundleMode::independent);
  return v;
}

double NonUniformLimitParams::gaussian_coefficient() const {
  if (k == 0) throw InvalidParameter("k must be >= 1");
  const double kp = static_cast<double>(k) * p_max;
  if (!(p_max >= 0.0) || kp > 1.0 + 1e-12) throw InvalidParameter("need 0 <= k p_max <= 1");
  return (std::sqrt(std::max(0.0, 1.0 - kp)) - 1.0) / static_cast<double>(k);
}

double v1_limit_nonuniform(const NonUniformLimitParams& params, std::size_t steps, RandomStream& rng,
                           GridCorrection correction) {
  const double coef = params.gaussian_coefficient();
  const auto b = sample_bundle(params.k, steps, 1.0, BundleMode::independent, rng);
  double total = 0.0;
  for (std::size_t i = 0; i < b.steps(); ++i) {
    for (double x : b.increments.row(i)) total += x;
  }
  double dk = lpp::lpp1(b.increments);
  if (correction == GridCorrection::continuity) dk += continuity_shift(params.k, 1, b.step, BundleMode::independent);
  return coef * total + dk;
}

std::vector<double> d_k_batch(std::size_t k, std::size_t steps, std::size_t samples, std::uint64_t seed, Exec exec,
                              GridCorrection correction) {
  return parallel::generate<double>(samples, exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    return d_k(k, steps, rng, correction);
  });
}

std::vector<double> v1_limit_batch(const NonUniformLimitParams& params, std::size_t steps, std::size_t samples,
                                   std::uint64_t seed, Exec exec, GridCorrection correction) {
  params.gaussian_coefficient();  // validate once before the parallel loop
  return parallel::generate<double>(samples, exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    return v1_limit_nonuniform(params, steps, rng, correction);
  });
}

std::vector<std::vector<double>> l_k_batch(std::size_t m, std::size_t r, double s, std::size_t steps_per_unit,
                                           BundleMode mode, std::size_t samples, std::uint64_t seed, Exec exec,
                                           GridCorrection correction) {
  if (r == 0 || r > m) throw InvalidParameter("l_k_batch needs 1 <= r <= m");
  if (mode == BundleMode::exchangeable && m == 1) {
    throw InvalidParameter("exchangeable bundle needs m >= 2 (correlation -1/(m-1) undefined)");
  }
  return parallel::generate<std::vector<double>>(samples, exec, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const auto b = sample_bundle(m, steps_per_unit, s, mode, rng);
    std::vector<double> out(r);
    for (std::size_t k = 1; k <= r; ++k) out[k - 1] = l_k(b, b.horizon, k, correction);
    return out;
  });
}

}  // namespace ytlab::brownian
