#include "hull_util.hpp"

#include <stdexcept>

namespace proxlab::detail {

std::vector<std::size_t> lower_hull(std::span<const double> x, std::span<const double> v) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      // drop b when it is on or above the chord a-i
      const double cross = (x[b] - x[a]) * (v[i] - v[a]) - (v[b] - v[a]) * (x[i] - x[a]);
      if (cross <= 0.0) h.pop_back();
      else break;
    }
    h.push_back(i);
  }
  return h;
}

void conjugate_sorted(std::span<const double> x, std::span<const double> v,
                      std::span<const double> s, std::span<double> out) {
  if (x.empty()) throw std::invalid_argument("conjugate_sorted: no finite points");
  const std::vector<std::size_t> h = lower_hull(x, v);
  std::size_t k = 0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    // advance while the next hull vertex is at least as good for slope s[m]
    while (k + 1 < h.size() &&
           s[m] * x[h[k + 1]] - v[h[k + 1]] >= s[m] * x[h[k]] - v[h[k]])
      ++k;
    out[m] = s[m] * x[h[k]] - v[h[k]];
  }
}

}  // namespace proxlab::detail
