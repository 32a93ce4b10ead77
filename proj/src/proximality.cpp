#include <cmath>
#include <vector>

#include "hull_util.hpp"
#include "proxlab/transforms.hpp"

namespace proxlab {

namespace {

// Grid lines as lists of flat indices: rows, columns and, in 2-D, both
// diagonal families.
std::vector<std::vector<std::size_t>> grid_lines(const GridSpec& s) {
  std::vector<std::vector<std::size_t>> lines;
  const std::size_t nx = s.axis(0).points;
  if (s.dim() == 1) {
    std::vector<std::size_t> all(nx);
    for (std::size_t i = 0; i < nx; ++i) all[i] = i;
    lines.push_back(std::move(all));
    return lines;
  }
  const std::size_t ny = s.axis(1).points;
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<std::size_t> l;
    for (std::size_t j = 0; j < ny; ++j) l.push_back(s.flatten(i, j));
    lines.push_back(std::move(l));
  }
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<std::size_t> l;
    for (std::size_t i = 0; i < nx; ++i) l.push_back(s.flatten(i, j));
    lines.push_back(std::move(l));
  }
  const long lx = static_cast<long>(nx), ly = static_cast<long>(ny);
  for (long d = -(ly - 1); d <= lx - 1; ++d) {
    std::vector<std::size_t> up, down;
    for (long i = 0; i < lx; ++i) {
      const long j = i - d;
      if (j >= 0 && j < ly) up.push_back(s.flatten(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
    for (long i = 0; i < lx; ++i) {
      const long j = d + ly - 1 - i;
      if (j >= 0 && j < ly) down.push_back(s.flatten(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
    if (up.size() >= 3) lines.push_back(std::move(up));
    if (down.size() >= 3) lines.push_back(std::move(down));
  }
  return lines;
}

}  // namespace

ConvexityReport convexity_check(const GridFunction& f, double coefficient) {
  const GridFunction g = add_quadratic(f, coefficient);
  const GridSpec& s = g.spec();
  ConvexityReport rep;
  rep.tolerance = 1e-9 * (1.0 + g.sup_norm());

  const std::vector<std::vector<std::size_t>> lines = grid_lines(s);
  const std::vector<std::size_t>* worst_line = nullptr;
  for (const auto& line : lines) {
    // finite nodes must be contiguous along every line
    std::size_t first = line.size(), last = 0;
    for (std::size_t t = 0; t < line.size(); ++t) {
      if (g[line[t]].is_finite()) {
        first = std::min(first, t);
        last = t;
      }
    }
    if (first == line.size()) continue;
    for (std::size_t t = first; t <= last; ++t) {
      if (g[line[t]].is_infinite()) {
        rep.convex = false;
        rep.worst_second_difference = -kInf;
        rep.witness = {s.node(line[first]), s.node(line[t]), s.node(line[last])};
        rep.witness_gap = kInf;
        return rep;
      }
    }
    for (std::size_t t = first + 1; t + 1 <= last; ++t) {
      const double d2 = g[line[t - 1]].value() - 2.0 * g[line[t]].value() + g[line[t + 1]].value();
      if (d2 < rep.worst_second_difference) {
        rep.worst_second_difference = d2;
        worst_line = &line;
      }
    }
  }
  rep.convex = rep.worst_second_difference >= -rep.tolerance;
  if (rep.convex || worst_line == nullptr) return rep;

  // Witness: the node furthest above the lower hull of the worst line,
  // with the hull vertices on either side of it.
  std::vector<double> pos, val;
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < worst_line->size(); ++t) {
    const std::size_t u = (*worst_line)[t];
    if (g[u].is_infinite()) continue;
    pos.push_back(static_cast<double>(t));
    val.push_back(g[u].value());
    idx.push_back(u);
  }
  const std::vector<std::size_t> h = detail::lower_hull(pos, val);
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const std::size_t a = h[k], b = h[k + 1];
    for (std::size_t m = a + 1; m < b; ++m) {
      const double t = (pos[m] - pos[a]) / (pos[b] - pos[a]);
      const double gap = val[m] - ((1.0 - t) * val[a] + t * val[b]);
      if (gap > rep.witness_gap) {
        rep.witness_gap = gap;
        rep.witness = {s.node(idx[a]), s.node(idx[m]), s.node(idx[b])};
      }
    }
  }
  return rep;
}

ConvexityReport is_lambda_proximal(const GridFunction& f, double lam) {
  return convexity_check(f, 1.0 / (2.0 * lam));
}

}  // namespace proxlab
