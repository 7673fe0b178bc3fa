#include "ytlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ytlab/error.hpp"

namespace ytlab::stats {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (std::isnan(v)) throw InvalidInput("empirical distribution contains NaN");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  if (values_.empty()) return 0.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KSResult ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.size() == 0 || b.size() == 0) throw InvalidParameter("KS test needs non-empty samples");
  const auto& x = a.values();
  const auto& y = b.values();
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KSResult r;
  r.D = d;
  r.n1 = x.size();
  r.n2 = y.size();
  r.p_approx = kolmogorov_survival(d * std::sqrt(n1 * n2 / (n1 + n2)));
  return r;
}

std::vector<double> quantiles(const EmpiricalDistribution& sample, std::span<const double> qs) {
  if (sample.size() == 0) throw InvalidParameter("quantiles of an empty sample");
  const auto& v = sample.values();
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidParameter("quantile level outside [0, 1]");
    const double h = static_cast<double>(v.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    out.push_back(v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]));
  }
  return out;
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  return covariance(x, x);
}

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidParameter("covariance needs equal lengths");
  if (x.size() < 2) return 0.0;
  const double mx = mean(x);
  const double my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double lambda_atoms(std::span<const std::pair<double, double>> atoms, double tol) {
  double second = 0.0;
  for (const auto& [y, w] : atoms) second += w * y * y;
  if (!(second > 0.0)) throw InvalidParameter("lambda needs a non-degenerate law");
  // g(l) = l E[|Y|^3 e^{l|Y|}] - E[Y^2] is continuous and increasing, g(0) < 0.
  auto g = [&](double l) {
    double third = 0.0;
    for (const auto& [y, w] : atoms) {
      const double a = std::fabs(y);
      third += w * a * a * a * std::exp(l * a);
    }
    return l * third - second;
  };
  double lo = 0.0, hi = 64.0;
  if (g(hi) <= 0.0) throw Error("lambda: no sign change on (0, 64]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double lambda_bernoulli(double p, double tol) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("lambda_bernoulli needs 0 < p < 1");
  const std::pair<double, double> atoms[] = {{1.0 - p, p}, {-p, 1.0 - p}};
  return lambda_atoms(atoms, tol);
}

double lambda_bernoulli_standardized(double p, double tol) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("lambda_bernoulli needs 0 < p < 1");
  const double sigma = std::sqrt(p * (1.0 - p));
  const std::pair<double, double> atoms[] = {{(1.0 - p) / sigma, p}, {-p / sigma, 1.0 - p}};
  return lambda_atoms(atoms, tol);
}

KmtConstants kmt_constants(std::size_t m) {
  if (m < 2) throw InvalidParameter("kmt_constants needs m >= 2");
  const double p = 1.0 / static_cast<double>(m);
  const double sigma = std::sqrt(p * (1.0 - p));
  KmtConstants c;
  c.lambda_centered = lambda_bernoulli(p, 1e-13);
  c.lambda_standardized = sigma * c.lambda_centered;
  c.c2 = c.lambda_standardized;
  c.c1_over_c3 = c.lambda_standardized;
  return c;
}

}  // namespace ytlab::stats
