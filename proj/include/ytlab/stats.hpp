#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ytlab::stats {

/// Sorted sample.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  /// Sorts `values`; NaN is rejected.
  explicit EmpiricalDistribution(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Fraction of values <= x.
  double cdf(double x) const noexcept;

 private:
  std::vector<double> values_;
};

struct KSResult {
  double D = 0.0;
  double p_approx = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// sup_x |F_a(x) - F_b(x)| by a sorted merge (ties advance both sides), and
/// the asymptotic Kolmogorov p-value at effective size n1 n2 / (n1 + n2).
KSResult ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// P(K > lambda) for the Kolmogorov distribution, series truncated at 100 terms.
double kolmogorov_survival(double lambda);

/// Linear interpolation between order statistics at h = (N - 1) q.
std::vector<double> quantiles(const EmpiricalDistribution& sample, std::span<const double> qs);

double mean(std::span<const double> x);
/// Unbiased sample variance (0 for fewer than two values).
double variance(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);

/// lambda(F) = sup{l > 0 : l E[|Y|^3 e^{l |Y|}] <= E[Y^2]} for a finitely
/// supported centered Y given as (value, probability) atoms.  Bisection on
/// (0, 64] to absolute tolerance `tol`.
double lambda_atoms(std::span<const std::pair<double, double>> atoms, double tol = 1e-9);

/// lambda of X - p for X ~ Bernoulli(p), 0 < p < 1.
double lambda_bernoulli(double p, double tol = 1e-9);

/// lambda of (X - p) / sigma, sigma = sqrt(p (1 - p)), from its own atoms.
double lambda_bernoulli_standardized(double p, double tol = 1e-9);

struct KmtConstants {
  double lambda_centered = 0.0;
  double lambda_standardized = 0.0;
  /// lambda_standardized * Var(standardized)^{1/2} = lambda_standardized.
  double c2 = 0.0;
  /// c1 = c3 * lambda_standardized; c3 is an unspecified absolute constant.
  double c1_over_c3 = 0.0;
};

/// Constants for the letter indicator at p = 1/m, m >= 2.
KmtConstants kmt_constants(std::size_t m);

}  // namespace ytlab::stats
