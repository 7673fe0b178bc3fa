#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ytlab::tridiag {

/// Number of eigenvalues strictly below x of the symmetric tridiagonal
/// matrix with diagonal `d` and off-diagonal `e` (size d.size()-1).
std::size_t sturm_count(std::span<const double> d, std::span<const double> e, double x);

/// The `count` largest eigenvalues, non-increasing, each located by
/// independent Sturm bisection until the bracket is below
/// rel_tol * max(|lo|, |hi|, norm * 1e-3).  The i-th value does not depend on
/// `count`.
std::vector<double> largest_eigenvalues(std::span<const double> d, std::span<const double> e,
                                        std::size_t count, double rel_tol = 1e-10);

/// All eigenvalues by implicit QL with Wilkinson shifts (values only),
/// returned non-increasing.
std::vector<double> eigenvalues_ql(std::vector<double> d, std::vector<double> e);

}  // namespace ytlab::tridiag
