#include <cmath>
#include <limits>

#include "proxlab/errors.hpp"
#include "proxlab/parallel.hpp"
#include "proxlab/transforms.hpp"

namespace proxlab {

namespace {

// Index offset of the origin on each axis; the grid must contain 0.
std::array<long, 2> origin_index(const GridSpec& s) {
  std::array<long, 2> o{0, 0};
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Axis& a = s.axis(k);
    const double t = -a.lower / a.spacing();
    const double r = std::round(t);
    if (a.lower > 0.0 || a.upper < 0.0 || std::abs(t - r) > 1e-9 * std::max(1.0, std::abs(t)))
      throw GridMismatch("inf_convolution: the origin must be a grid node");
    o[k] = static_cast<long>(r);
  }
  return o;
}

}  // namespace

InfConvolution inf_convolution(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const GridSpec& s = f.spec();
  const std::array<long, 2> o = origin_index(s);
  const long n0 = static_cast<long>(s.axis(0).points);
  const long n1 = s.dim() == 2 ? static_cast<long>(s.axis(1).points) : 1;

  std::vector<double> out(s.size(), kInf);
  std::vector<std::uint8_t> attained(s.size(), 0), flags(s.size(), 0);
  std::vector<std::size_t> witness(s.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> partner = witness;

  parallel_for(s.size(), [&](std::size_t x) {
    const auto xi = s.unflatten(x);
    double best = kInf;
    std::size_t arg = witness[x], other = 0;
    for (std::size_t w = 0; w < s.size(); ++w) {
      if (g[w].is_infinite()) continue;
      const auto wi = s.unflatten(w);
      // x - w in coordinates maps to index x_i - w_i + o.
      const long d0 = static_cast<long>(xi[0]) - static_cast<long>(wi[0]) + o[0];
      const long d1 = static_cast<long>(xi[1]) - static_cast<long>(wi[1]) + o[1];
      if (d0 < 0 || d0 >= n0 || d1 < 0 || d1 >= n1) continue;
      const std::size_t d = s.flatten(static_cast<std::size_t>(d0), static_cast<std::size_t>(d1));
      if (f[d].is_infinite()) continue;
      const double v = f[d].value() + g[w].value();
      if (v < best) best = v, arg = w, other = d;
    }
    if (best < kInf) {
      out[x] = best;
      attained[x] = 1;
      witness[x] = arg;
      partner[x] = other;
      flags[x] = s.on_edge(arg) || s.on_edge(other) || f.flagged(other) || g.flagged(arg);
    }
  });
  return {make_grid_function(s, out, f.label() + " box " + g.label()).with_flags(std::move(flags)),
          std::move(attained), std::move(witness), std::move(partner)};
}

}  // namespace proxlab
