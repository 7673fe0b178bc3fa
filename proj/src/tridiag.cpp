#include "ytlab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ytlab/error.hpp"

namespace ytlab::tridiag {

namespace {

void check_sizes(std::span<const double> d, std::span<const double> e) {
  if (d.empty()) throw InvalidParameter("tridiagonal matrix must be non-empty");
  if (e.size() + 1 != d.size()) throw InvalidParameter("off-diagonal must have size n-1");
}

double pivot_floor(std::span<const double> e) {
  double emax = 0.0;
  for (double v : e) emax = std::max(emax, v * v);
  return std::numeric_limits<double>::min() * std::max(1.0, emax);
}

}  // namespace

std::size_t sturm_count(std::span<const double> d, std::span<const double> e, double x) {
  check_sizes(d, e);
  const double pivmin = pivot_floor(e);
  std::size_t count = 0;
  double q = d[0] - x;
  if (std::fabs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> largest_eigenvalues(std::span<const double> d, std::span<const double> e,
                                        std::size_t count, double rel_tol) {
  check_sizes(d, e);
  const std::size_t n = d.size();
  if (count > n) throw InvalidParameter("more eigenvalues requested than the dimension");

  // Gershgorin interval.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double norm = std::max(std::fabs(lo), std::fabs(hi));
  const double abs_floor = std::max(norm * 1e-3, std::numeric_limits<double>::min());
  lo -= 1e-12 * norm + std::numeric_limits<double>::min();
  hi += 1e-12 * norm + std::numeric_limits<double>::min();

  std::vector<double> out(count);
  for (std::size_t r = 0; r < count; ++r) {
    // Eigenvalue with index n-1-r in ascending order: the smallest x with
    // sturm_count(x) >= n - r.
    const std::size_t target = n - r;
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(d, e, mid) >= target) {
        b = mid;
      } else {
        a = mid;
      }
      if (b - a <= rel_tol * std::max({std::fabs(a), std::fabs(b), abs_floor})) break;
    }
    out[r] = 0.5 * (a + b);
  }
  return out;
}

std::vector<double> eigenvalues_ql(std::vector<double> d, std::vector<double> e) {
  check_sizes(d, e);
  const std::size_t n = d.size();
  e.push_back(0.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw Error("eigenvalues_ql: no convergence");
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

}  // namespace ytlab::tridiag
