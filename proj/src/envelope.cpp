#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "proxlab/errors.hpp"
#include "proxlab/parallel.hpp"
#include "proxlab/transforms.hpp"

namespace proxlab {

// ------------------------------------------------------------- set helpers

Interval minkowski(double a, const Interval& i, double b, const Interval& j) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("minkowski: weights must be >= 0");
  return {a * i.lo + b * j.lo, a * i.hi + b * j.hi};
}

double hausdorff(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

namespace {

double distance(const Point& p, const Point& q) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
  return std::sqrt(s);
}

}  // namespace

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const Point& p : from) {
      double best = kInf;
      for (const Point& q : to) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::vector<Point> MinimizerSet::points() const {
  std::vector<Point> out;
  out.reserve(clusters.size());
  for (const Cluster& c : clusters) out.push_back(c.representative);
  return out;
}

bool MinimizerSet::single_valued() const noexcept {
  return clusters.size() == 1 && clusters.front().lo == clusters.front().hi;
}

bool MinimizerSet::touches_edge() const noexcept {
  return std::any_of(clusters.begin(), clusters.end(),
                     [](const Cluster& c) { return c.touches_edge; });
}

Interval MinimizerSet::hull() const {
  if (clusters.empty()) throw std::logic_error("MinimizerSet::hull: empty set");
  if (clusters.front().representative.size() != 1)
    throw std::invalid_argument("MinimizerSet::hull: 1-D only");
  Interval r{kInf, -kInf};
  for (const Cluster& c : clusters) {
    r.lo = std::min(r.lo, c.lo[0]);
    r.hi = std::max(r.hi, c.hi[0]);
  }
  return r;
}

double cluster_tolerance(const GridSpec& spec, double lam) {
  const double h = spec.max_spacing();
  return std::max(1e-9, h * h / lam);
}

// ----------------------------------------------------------- envelope scans

namespace {

struct Coords {
  std::vector<double> x;  // per node, axis 0
  std::vector<double> y;  // per node, axis 1 (zeros in 1-D)
};

Coords node_coords(const GridSpec& s) {
  Coords c;
  c.x.resize(s.size());
  c.y.assign(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    c.x[i] = s.coord(i, 0);
    if (s.dim() == 2) c.y[i] = s.coord(i, 1);
  }
  return c;
}

// min_j v_j + d_ij/(2 lam)   (sup == false)
// max_j v_j - d_ij/(2 lam)   (sup == true)
GridFunction scan(const GridFunction& f, double lam, bool sup) {
  const GridSpec& s = f.spec();
  const Coords c = node_coords(s);
  const std::vector<double> v = f.raw();
  if (sup && std::any_of(v.begin(), v.end(), [](double t) { return t == kInf; }))
    throw std::domain_error("sup envelope of a function taking +inf");
  const double w = 1.0 / (2.0 * lam);
  const std::size_t n = s.size();
  std::vector<double> out(n);
  std::vector<std::uint8_t> flags(n);
  parallel_for(n, [&](std::size_t i) {
    const double xi = c.x[i], yi = c.y[i];
    double best = sup ? -kInf : kInf;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double vj = v[j];
      if (vj == kInf) continue;
      const double dx = xi - c.x[j], dy = yi - c.y[j];
      const double d = (dx * dx + dy * dy) * w;
      if (sup) {
        const double t = vj - d;
        if (t > best) best = t, arg = j;
      } else {
        const double t = vj + d;
        if (t < best) best = t, arg = j;
      }
    }
    out[i] = best;
    flags[i] = s.on_edge(arg) || f.flagged(arg);
  });
  return make_grid_function(s, out, f.label()).with_flags(std::move(flags));
}

void require_lambda(const GridFunction& f, double lam, const char* what) {
  if (!(lam > 0.0)) throw LambdaAboveThreshold(std::string(what) + ": parameter must be positive");
  if (!(lam < f.threshold()))
    throw LambdaAboveThreshold(std::string(what) + ": parameter " + format_double(lam) +
                               " is not below the prox-threshold " +
                               format_double(f.threshold()) + " of '" + f.label() + "'");
}

}  // namespace

namespace kernels {
GridFunction inf_envelope(const GridFunction& f, double lam) { return scan(f, lam, false); }
GridFunction sup_envelope(const GridFunction& g, double lam) { return scan(g, lam, true); }

std::size_t default_refinement(const GridSpec& spec) { return spec.dim() == 1 ? 4 : 2; }

GridFunction sup_of_envelopes(std::span<const Term> terms, double lam, double mu,
                              std::size_t refine) {
  if (terms.empty()) throw std::invalid_argument("sup_of_envelopes: no terms");
  const GridSpec& s = terms.front().f->spec();
  for (const Term& t : terms) require_same_grid(*terms.front().f, *t.f);
  refine = std::max<std::size_t>(refine, 1);
  std::vector<Axis> fine_axes;
  for (const Axis& a : s.axes()) fine_axes.push_back({a.lower, a.upper, (a.points - 1) * refine + 1});
  const GridSpec fine(std::move(fine_axes));
  const Coords c = node_coords(s);
  const Coords y = node_coords(fine);

  // weighted envelope at every refined point
  const double wl = 1.0 / (2.0 * lam);
  std::vector<double> gy(fine.size(), 0.0);
  std::vector<std::uint8_t> gflag(fine.size(), 0);
  std::vector<std::vector<double>> vals;
  for (const Term& t : terms) vals.push_back(t.f->raw());
  parallel_for(fine.size(), [&](std::size_t m) {
    double total = 0.0;
    bool flag = fine.on_edge(m);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (terms[k].weight == 0.0) continue;
      const std::vector<double>& v = vals[k];
      double best = kInf;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == kInf) continue;
        const double dx = y.x[m] - c.x[j], dy = y.y[m] - c.y[j];
        const double t = v[j] + (dx * dx + dy * dy) * wl;
        if (t < best) best = t, arg = j;
      }
      total += terms[k].weight * best;
      flag = flag || s.on_edge(arg) || terms[k].f->flagged(arg);
    }
    gy[m] = total;
    gflag[m] = flag;
  });

  const double wm = 1.0 / (2.0 * mu);
  std::vector<double> out(s.size());
  std::vector<std::uint8_t> flags(s.size());
  parallel_for(s.size(), [&](std::size_t i) {
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t m = 0; m < fine.size(); ++m) {
      const double dx = c.x[i] - y.x[m], dy = c.y[i] - y.y[m];
      const double t = gy[m] - (dx * dx + dy * dy) * wm;
      if (t > best) best = t, arg = m;
    }
    out[i] = best;
    flags[i] = gflag[arg];
  });
  return make_grid_function(s, out, terms.front().f->label()).with_flags(std::move(flags));
}
}  // namespace kernels

GridFunction moreau_envelope(const GridFunction& f, double lam) {
  require_lambda(f, lam, "moreau_envelope");
  return kernels::inf_envelope(f, lam)
      .with_threshold(f.threshold() - lam)
      .with_label("e_" + format_double(lam) + "(" + f.label() + ")");
}

GridFunction proximal_hull(const GridFunction& f, double lam) {
  require_lambda(f, lam, "proximal_hull");
  const kernels::Term t{&f, 1.0};
  return kernels::sup_of_envelopes({&t, 1}, lam, lam, kernels::default_refinement(f.spec()))
      .with_threshold(f.threshold())
      .with_label("h_" + format_double(lam) + "(" + f.label() + ")");
}

GridFunction lasry_lions(const GridFunction& f, double lam, double mu) {
  if (!(mu > 0.0) || !(mu < lam))
    throw ParameterOrder("lasry_lions: need 0 < mu < lam, got mu = " + format_double(mu) +
                         ", lam = " + format_double(lam));
  require_lambda(f, lam, "lasry_lions");
  const kernels::Term t{&f, 1.0};
  return kernels::sup_of_envelopes({&t, 1}, lam, mu, kernels::default_refinement(f.spec()))
      .with_threshold(f.threshold() - (lam - mu))
      .with_label("e_{" + format_double(lam) + "," + format_double(mu) + "}(" + f.label() + ")");
}

// ----------------------------------------------------------------- prox map

namespace {

constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// Vertex of the parabola through the best node and its axis neighbours, as
// an offset in [-h/2, h/2]; zero at edges or when a kink is detected from
// the spread of neighbouring second differences.
double vertex_offset(const std::vector<double>& obj, const GridSpec& s, std::size_t node,
                     std::size_t axis) {
  const auto idx = s.unflatten(node);
  const std::size_t n = s.axis(axis).points;
  const std::size_t i = idx[axis];
  if (i < 2 || i + 2 >= n) return 0.0;
  auto o = [&](std::size_t k) {
    return axis == 0 ? obj[s.flatten(k, idx[1])] : obj[s.flatten(idx[0], k)];
  };
  const double a2 = o(i - 2), a = o(i - 1), b = o(i), c = o(i + 1), c2 = o(i + 2);
  for (double t : {a2, a, b, c, c2})
    if (t == kInf) return 0.0;
  const double den = a - 2.0 * b + c;
  if (!(den > 0.0)) return 0.0;
  const double dl = a2 - 2.0 * a + b;
  const double dr = b - 2.0 * c + c2;
  const double mx = std::max({std::abs(dl), den, std::abs(dr)});
  const double mn = std::min({std::abs(dl), den, std::abs(dr)});
  if (mx > 4.0 * mn + 1e-14 * (1.0 + std::abs(b))) return 0.0;
  const double h = s.axis(axis).spacing();
  return std::clamp(0.5 * h * (a - c) / den, -0.5 * h, 0.5 * h);
}

MinimizerSet cluster_minimizers(const GridSpec& s, const std::vector<double>& obj, double tol) {
  MinimizerSet ms;
  ms.tolerance = tol;
  const double m = *std::min_element(obj.begin(), obj.end());
  if (m == kInf) return ms;
  ms.attained_value = ExtReal(m);

  const std::size_t n = s.size();
  std::vector<std::uint8_t> good(n), seen(n);
  for (std::size_t i = 0; i < n; ++i) good[i] = obj[i] <= m + tol;

  const std::size_t nx = s.axis(0).points;
  const std::size_t ny = s.dim() == 2 ? s.axis(1).points : 1;
  for (std::size_t start = 0; start < n; ++start) {
    if (!good[start] || seen[start]) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      comp.push_back(u);
      const auto iu = s.unflatten(u);
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (s.dim() == 1 && dj != 0) continue;
          const long ii = static_cast<long>(iu[0]) + di;
          const long jj = static_cast<long>(iu[1]) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(nx) || jj >= static_cast<long>(ny)) continue;
          const std::size_t v = s.flatten(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
          if (good[v] && !seen[v]) {
            seen[v] = 1;
            q.push(v);
          }
        }
      }
    }

    Cluster c;
    c.nodes = comp.size();
    std::size_t best = comp.front();
    for (std::size_t u : comp) {
      if (obj[u] < obj[best]) best = u;
      c.touches_edge = c.touches_edge || s.on_edge(u);
    }
    // A plateau is a run of nodes tied with the best one up to rounding; a
    // wide cluster of strictly rising values is a flat-bottomed parabola.
    const double tie = 1e-9 * (1.0 + std::abs(obj[best]));
    std::array<std::size_t, 2> lo{kNoIndex, kNoIndex}, hi{0, 0};
    for (std::size_t u : comp) {
      if (obj[u] > obj[best] + tie) continue;
      const auto iu = s.unflatten(u);
      for (std::size_t k = 0; k < 2; ++k) {
        lo[k] = std::min(lo[k], iu[k]);
        hi[k] = std::max(hi[k], iu[k]);
      }
    }
    bool plateau = false;
    for (std::size_t k = 0; k < s.dim(); ++k) plateau = plateau || hi[k] - lo[k] > 2;
    c.representative = s.node(best);
    if (plateau) {
      c.lo.resize(s.dim());
      c.hi.resize(s.dim());
      for (std::size_t k = 0; k < s.dim(); ++k) {
        c.lo[k] = s.axis(k).node(lo[k]);
        c.hi[k] = s.axis(k).node(hi[k]);
      }
    } else {
      for (std::size_t k = 0; k < s.dim(); ++k)
        c.representative[k] += vertex_offset(obj, s, best, k);
      c.lo = c.hi = c.representative;
    }
    ms.clusters.push_back(std::move(c));
  }
  std::sort(ms.clusters.begin(), ms.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.representative < b.representative; });
  return ms;
}

std::vector<double> prox_objective(const GridFunction& f, double lam, const Point& x) {
  const GridSpec& s = f.spec();
  const double w = 1.0 / (2.0 * lam);
  std::vector<double> obj(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const ExtReal v = f[j];
    if (v.is_infinite()) {
      obj[j] = kInf;
      continue;
    }
    double d = 0.0;
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const double t = s.coord(j, k) - x[k];
      d += t * t;
    }
    obj[j] = v.value() + d * w;
  }
  return obj;
}

}  // namespace

MinimizerSet prox_map(const GridFunction& f, double lam, const Point& x) {
  require_lambda(f, lam, "prox_map");
  if (x.size() != f.spec().dim()) throw std::invalid_argument("prox_map: dimension mismatch");
  return cluster_minimizers(f.spec(), prox_objective(f, lam, x), cluster_tolerance(f.spec(), lam));
}

MinimizerSet grid_argmin(const GridFunction& f, double tol) {
  std::vector<double> obj(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) obj[j] = f[j].is_infinite() ? kInf : f[j].value();
  return cluster_minimizers(f.spec(), obj, tol);
}

MinimizerSet prox_map_at(const GridFunction& f, double lam, std::size_t node) {
  return prox_map(f, lam, f.spec().node(node));
}

// ------------------------------------------------- subdifferential & probe

Interval clarke_subdiff_envelope(const GridFunction& f, double mu, const Point& x) {
  if (f.spec().dim() != 1) throw std::invalid_argument("clarke_subdiff_envelope: 1-D only");
  const Interval p = prox_map(f, mu, x).hull();
  return {(x[0] - p.hi) / mu, (x[0] - p.lo) / mu};
}

std::vector<Point> clarke_subdiff_envelope_points(const GridFunction& f, double mu, const Point& x) {
  const MinimizerSet ms = prox_map(f, mu, x);
  std::vector<Point> out;
  for (const Cluster& c : ms.clusters) {
    // corners of the cluster box
    const std::size_t d = x.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Point p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = (mask >> k & 1) ? c.hi[k] : c.lo[k];
      Point g(d);
      for (std::size_t k = 0; k < d; ++k) g[k] = (x[k] - p[k]) / mu;
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LipschitzProbe prox_lipschitz_probe(const GridFunction& f, double mu) {
  require_lambda(f, mu, "prox_lipschitz_probe");
  const GridSpec& s = f.spec();
  const std::size_t n = s.size();
  std::vector<MinimizerSet> sets(n);
  parallel_for(n, [&](std::size_t i) { sets[i] = prox_map_at(f, mu, i); });

  LipschitzProbe probe;
  std::vector<std::uint8_t> usable(n);
  for (std::size_t i = 0; i < n; ++i) {
    usable[i] = !sets[i].touches_edge() && !f.flagged(i) && f[i].is_finite();
    if (usable[i] && !sets[i].single_valued()) {
      probe.reason = "prox is set-valued at x = " + format_double(s.coord(i, 0));
      return probe;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable[i]) continue;
    const auto idx = s.unflatten(i);
    for (std::size_t k = 0; k < s.dim(); ++k) {
      if (idx[k] + 1 >= s.axis(k).points) continue;
      const std::size_t j = k == 0 ? s.flatten(idx[0] + 1, idx[1]) : s.flatten(idx[0], idx[1] + 1);
      if (!usable[j]) continue;
      double d = 0.0;
      const Point& p = sets[i].clusters.front().representative;
      const Point& q = sets[j].clusters.front().representative;
      for (std::size_t a = 0; a < s.dim(); ++a) d += (p[a] - q[a]) * (p[a] - q[a]);
      probe.kappa = std::max(probe.kappa, std::sqrt(d) / s.axis(k).spacing());
    }
  }
  const double kappa = std::max(probe.kappa, 1e-12) * (1.0 + 1e-6);
  const double coefficient = (kappa - 1.0) / (2.0 * mu * kappa);
  const ConvexityReport rep = convexity_check(f, coefficient);
  probe.consistent = rep.convex;
  if (!rep.convex) probe.reason = "f + (kappa-1)/(2 mu kappa)|x|^2 is not convex on the grid";
  return probe;
}

}  // namespace proxlab
