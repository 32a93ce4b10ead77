#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace proxlab::detail {

/// Indices of the lower convex hull of (x[i], v[i]); x strictly increasing,
/// v finite. Collinear interior points are dropped.
std::vector<std::size_t> lower_hull(std::span<const double> x, std::span<const double> v);

/// out[m] = max_i s[m] * x[i] - v[i] for ascending s, in O(n + m).
/// x strictly increasing, v finite, n >= 1.
void conjugate_sorted(std::span<const double> x, std::span<const double> v,
                      std::span<const double> s, std::span<double> out);

}  // namespace proxlab::detail
