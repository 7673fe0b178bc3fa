#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <omp.h>

namespace ytlab {

/// Execution policy for batch kernels.  `serial` is the reference path kept
/// for testing; `parallel` must produce bitwise-identical results.
enum class Exec { serial, parallel };

namespace parallel {

/// Fills out[i] = fn(i) for i in [0, count).  Each index owns its output
/// slot and derives its own random stream, so the result does not depend on
/// the schedule or the thread count.
template <typename T, typename Fn>
std::vector<T> generate(std::size_t count, Exec exec, Fn&& fn) {
  std::vector<T> out(count);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return out;
}

/// Sum in index order; used after `generate` so reductions are reproducible.
inline double ordered_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace parallel
}  // namespace ytlab
