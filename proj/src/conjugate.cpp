#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hull_util.hpp"
#include "proxlab/errors.hpp"
#include "proxlab/parallel.hpp"
#include "proxlab/transforms.hpp"

namespace proxlab {

namespace {

std::vector<double> axis_nodes(const Axis& a) {
  std::vector<double> x(a.points);
  for (std::size_t i = 0; i < a.points; ++i) x[i] = a.node(i);
  return x;
}

GridFunction conjugate_naive(const GridFunction& f, const GridSpec& dual) {
  const GridSpec& s = f.spec();
  std::vector<double> out(dual.size());
  parallel_for(dual.size(), [&](std::size_t m) {
    double best = -kInf;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (f[j].is_infinite()) continue;
      double ip = 0.0;
      for (std::size_t k = 0; k < s.dim(); ++k) ip += dual.coord(m, k) * s.coord(j, k);
      best = std::max(best, ip - f[j].value());
    }
    out[m] = best;
  });
  return make_grid_function(dual, out, f.label() + "*");
}

// 1-D conjugate of the finite part of (x, v) at ascending slopes; -inf when
// nothing is finite.
std::vector<double> conjugate_line(const std::vector<double>& x, const std::vector<double>& v,
                                   const std::vector<double>& s) {
  std::vector<double> fx, fv;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (v[i] != kInf) fx.push_back(x[i]), fv.push_back(v[i]);
  std::vector<double> out(s.size(), -kInf);
  if (!fx.empty()) detail::conjugate_sorted(fx, fv, s, out);
  return out;
}

GridFunction conjugate_linear(const GridFunction& f, const GridSpec& dual) {
  const GridSpec& s = f.spec();
  const std::vector<double> v = f.raw();
  if (s.dim() == 1) {
    return make_grid_function(
        dual, conjugate_line(axis_nodes(s.axis(0)), v, axis_nodes(dual.axis(0))), f.label() + "*");
  }
  // f*(s1, s2) = max_i [s1 x1_i - r_i(s2)],  r_i(s2) = -max_j [s2 x2_j - f(i, j)].
  const std::vector<double> x1 = axis_nodes(s.axis(0)), x2 = axis_nodes(s.axis(1));
  const std::vector<double> s1 = axis_nodes(dual.axis(0)), s2 = axis_nodes(dual.axis(1));
  const std::size_t n1 = x1.size(), n2 = x2.size();
  std::vector<std::vector<double>> r(n1);
  parallel_for(n1, [&](std::size_t i) {
    const std::vector<double> row(v.begin() + static_cast<long>(i * n2),
                                  v.begin() + static_cast<long>((i + 1) * n2));
    r[i] = conjugate_line(x2, row, s2);
    for (double& t : r[i]) t = -t;  // -(-inf) = +inf marks empty rows
  });
  std::vector<double> out(dual.size());
  parallel_for(s2.size(), [&](std::size_t b) {
    std::vector<double> col(n1);
    for (std::size_t i = 0; i < n1; ++i) col[i] = r[i][b];
    const std::vector<double> c = conjugate_line(x1, col, s1);
    for (std::size_t a = 0; a < s1.size(); ++a) out[dual.flatten(a, b)] = c[a];
  });
  return make_grid_function(dual, out, f.label() + "*");
}

// Andrew's monotone chain on 2-D points; returns the hull counter-clockwise.
std::vector<std::array<double, 2>> planar_hull(std::vector<std::array<double, 2>> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

bool in_planar_hull(const std::vector<std::array<double, 2>>& h, double x, double y, double eps) {
  if (h.size() == 1) return std::abs(x - h[0][0]) <= eps && std::abs(y - h[0][1]) <= eps;
  if (h.size() == 2) {
    const double dx = h[1][0] - h[0][0], dy = h[1][1] - h[0][1];
    const double len2 = dx * dx + dy * dy;
    const double t = ((x - h[0][0]) * dx + (y - h[0][1]) * dy) / len2;
    const double px = h[0][0] + t * dx - x, py = h[0][1] + t * dy - y;
    return t >= -eps && t <= 1 + eps && std::hypot(px, py) <= eps;
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    const double c = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
    if (c < -eps * std::hypot(b[0] - a[0], b[1] - a[1])) return false;
  }
  return true;
}

}  // namespace

GridFunction discrete_conjugate(const GridFunction& f, const GridSpec& dual,
                                ConjugateMethod method) {
  if (dual.dim() != f.spec().dim()) throw GridMismatch("discrete_conjugate: dual dimension differs");
  return method == ConjugateMethod::naive ? conjugate_naive(f, dual) : conjugate_linear(f, dual);
}

GridSpec default_dual_grid(const GridFunction& f, std::size_t points) {
  const GridSpec& s = f.spec();
  std::vector<Axis> axes;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    double lo = kInf, hi = -kInf;
    const double h = s.axis(k).spacing();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto idx = s.unflatten(i);
      if (idx[k] + 1 >= s.axis(k).points) continue;
      const std::size_t j = k == 0 ? s.flatten(idx[0] + 1, idx[1]) : s.flatten(idx[0], idx[1] + 1);
      if (f[i].is_infinite() || f[j].is_infinite()) continue;
      const double q = (f[j].value() - f[i].value()) / h;
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    if (lo > hi) lo = -1.0, hi = 1.0;
    const double pad = hi > lo ? 0.1 * (hi - lo) : std::max(1.0, 0.1 * std::abs(hi));
    axes.push_back({lo - pad, hi + pad, points ? points : s.axis(k).points});
  }
  return GridSpec(std::move(axes));
}

GridFunction convex_hull_grid(const GridFunction& f) {
  const GridSpec& s = f.spec();
  std::vector<double> out(s.size(), kInf);
  if (s.dim() == 1) {
    std::vector<double> x, v;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (f[i].is_finite()) x.push_back(s.coord(i, 0)), v.push_back(f[i].value());
    const std::vector<std::size_t> h = detail::lower_hull(x, v);
    if (h.size() == 1) {
      for (std::size_t i = 0; i < s.size(); ++i) out[i] = f[i].value();
    } else {
      // The conjugate is piecewise linear with breakpoints at the hull's
      // edge slopes; evaluate it there, then conjugate back onto the grid.
      std::vector<double> slopes(h.size() - 1);
      for (std::size_t k = 0; k + 1 < h.size(); ++k)
        slopes[k] = (v[h[k + 1]] - v[h[k]]) / (x[h[k + 1]] - x[h[k]]);
      std::vector<double> fstar(slopes.size());
      detail::conjugate_sorted(x, v, slopes, fstar);
      std::vector<double> qs;
      std::vector<std::size_t> where;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double xi = s.coord(i, 0);
        if (xi >= x.front() && xi <= x.back()) qs.push_back(xi), where.push_back(i);
      }
      std::vector<double> fss(qs.size());
      detail::conjugate_sorted(slopes, fstar, qs, fss);
      for (std::size_t m = 0; m < qs.size(); ++m) out[where[m]] = fss[m];
    }
  } else {
    std::size_t finite = 0;
    std::vector<std::array<double, 2>> dom;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (f[i].is_finite()) dom.push_back({s.coord(i, 0), s.coord(i, 1)}), ++finite;
    const GridSpec dual =
        default_dual_grid(f, 2 * std::max(s.axis(0).points, s.axis(1).points) - 1);
    const GridFunction fs = discrete_conjugate(f, dual, ConjugateMethod::linear_time);
    const GridFunction fss = discrete_conjugate(fs, s, ConjugateMethod::linear_time);
    const bool all_finite = finite == s.size();
    const auto hull = all_finite ? std::vector<std::array<double, 2>>{} : planar_hull(dom);
    const double eps = 1e-9 * s.max_spacing();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!all_finite && !in_planar_hull(hull, s.coord(i, 0), s.coord(i, 1), eps)) continue;
      out[i] = fss[i].value();
    }
  }
  // The biconjugate never exceeds f; clamp rounding noise at the vertices.
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::min(out[i], f[i].value());
  return make_grid_function(s, out, "conv(" + f.label() + ")")
      .with_flags({f.flags().begin(), f.flags().end()});
}

}  // namespace proxlab
