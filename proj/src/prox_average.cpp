#include "proxlab/prox_average.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"

namespace proxlab {

AverageParams AverageParams::for_inputs(const GridFunction& f, const GridFunction& g,
                                        double alpha, double mu) {
  return {alpha, mu, std::min(f.threshold(), g.threshold())};
}

void AverageParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha = " + format_double(alpha) + " is outside [0, 1]");
  if (!(mu > 0.0)) throw MuAboveThreshold("mu must be positive");
  if (!(mu < threshold_bar))
    throw MuAboveThreshold("mu = " + format_double(mu) + " is not below min(thresholds) = " +
                           format_double(threshold_bar));
}

namespace {

void prepare(const GridFunction& f, const GridFunction& g, const AverageParams& p) {
  require_same_grid(f, g);
  p.validate();
  if (p.mu >= std::min(f.threshold(), g.threshold()))
    throw MuAboveThreshold("mu = " + format_double(p.mu) + " is not below the inputs' thresholds");
}

std::string average_label(const GridFunction& f, const GridFunction& g, const AverageParams& p) {
  return "pa_" + format_double(p.alpha) + "," + format_double(p.mu) + "(" + f.label() + ", " +
         g.label() + ")";
}

// beta * F(y / beta) at every node y, by multilinear interpolation of F.
// suspect[y] marks values that used a node on the box edge or a flagged node.
GridFunction epi_scale(const GridFunction& conv, double beta, std::vector<std::uint8_t>& suspect) {
  const GridSpec& s = conv.spec();
  const SampledFunction sf{conv};
  std::vector<double> out(s.size(), kInf);
  suspect.assign(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    Point y = s.node(i);
    bool near_edge = false;
    for (std::size_t k = 0; k < y.size(); ++k) {
      y[k] /= beta;
      const Axis& a = s.axis(k);
      const double h = a.spacing();
      near_edge = near_edge || y[k] < a.lower + h * (1.0 - 1e-9) || y[k] > a.upper - h * (1.0 - 1e-9);
    }
    const ExtReal v = sf(y);
    if (v.is_infinite()) continue;
    out[i] = beta * v.value();
    // a flagged node among the interpolation taps taints the value
    bool tainted = false;
    for (std::size_t j = 0; j < s.size() && !tainted && conv.flagged_count() > 0; ++j) {
      if (!conv.flagged(j)) continue;
      bool close = true;
      for (std::size_t k = 0; k < y.size(); ++k)
        close = close && std::abs(s.coord(j, k) - y[k]) < s.axis(k).spacing();
      tainted = close;
    }
    suspect[i] = near_edge || tainted;
  }
  return make_grid_function(s, out, conv.label());
}

}  // namespace

AverageResult proximal_average(const GridFunction& f, const GridFunction& g,
                               const AverageParams& p) {
  prepare(f, g, p);
  const kernels::Term terms[] = {{&f, p.alpha}, {&g, 1.0 - p.alpha}};
  GridFunction phi = kernels::sup_of_envelopes(terms, p.mu, p.mu, kernels::default_refinement(f.spec()))
                         .with_threshold(p.threshold_bar)
                         .with_label(average_label(f, g, p));
  const ConvexityReport rep = is_lambda_proximal(phi, p.mu);
  if (!rep.convex)
    throw std::logic_error("proximal_average: result is not mu-proximal on the grid (second difference " +
                           format_double(rep.worst_second_difference) + ")");
  return {std::move(phi), AverageRoute::definition, p.alpha, p.mu};
}

AverageResult proximal_average_infconv(const GridFunction& f, const GridFunction& g,
                                       const AverageParams& p) {
  prepare(f, g, p);
  if (p.alpha <= 0.0 || p.alpha >= 1.0)
    throw AlphaEndpoint("the inf-convolution route needs 0 < alpha < 1; use the definition route");
  const double c = 1.0 / (2.0 * p.mu);
  std::vector<std::uint8_t> sus_f, sus_g;
  const GridFunction sf = epi_scale(convex_hull_grid(add_quadratic(f, c)), p.alpha, sus_f);
  const GridFunction sg = epi_scale(convex_hull_grid(add_quadratic(g, c)), 1.0 - p.alpha, sus_g);
  // (sf box sg)(x) = min_w sf(x - w) + sg(w)
  const InfConvolution ic = inf_convolution(sf, sg);
  const GridSpec& s = f.spec();
  std::vector<std::uint8_t> flags(s.size(), 0);
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (!ic.attained[x]) continue;
    flags[x] = ic.value.flagged(x) || sus_g[ic.witness[x]] || sus_f[ic.partner[x]];
  }
  GridFunction phi = add_quadratic(ic.value, -c)
                         .with_flags(std::move(flags))
                         .with_threshold(p.threshold_bar)
                         .with_label(average_label(f, g, p));
  return {std::move(phi), AverageRoute::infconv, p.alpha, p.mu};
}

AverageProx prox_of_average(const GridFunction& f, const GridFunction& g, const AverageParams& p,
                            const Point& x) {
  const AverageResult avg = proximal_average(f, g, p);
  AverageProx r;
  r.prox = prox_map(avg.phi, p.mu, x);
  const MinimizerSet pf = prox_map(f, p.mu, x);
  const MinimizerSet pg = prox_map(g, p.mu, x);
  r.touches_edge = r.prox.touches_edge() || pf.touches_edge() || pg.touches_edge();
  auto corners = [](const MinimizerSet& m) {
    std::vector<Point> out;
    for (const Cluster& c : m.clusters) {
      const std::size_t d = c.lo.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Point q(d);
        for (std::size_t k = 0; k < d; ++k) q[k] = (mask >> k & 1) ? c.hi[k] : c.lo[k];
        out.push_back(std::move(q));
      }
    }
    return out;
  };
  for (const Point& a : corners(pf)) {
    for (const Point& b : corners(pg)) {
      Point q(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) q[k] = p.alpha * a[k] + (1.0 - p.alpha) * b[k];
      r.combination.push_back(std::move(q));
    }
  }
  std::sort(r.combination.begin(), r.combination.end());
  r.combination.erase(std::unique(r.combination.begin(), r.combination.end()), r.combination.end());
  if (f.spec().dim() == 1) r.combination_hull = minkowski(p.alpha, pf.hull(), 1.0 - p.alpha, pg.hull());
  return r;
}

std::vector<AverageResult> alpha_sweep(const GridFunction& f, const GridFunction& g, double mu,
                                       const std::vector<double>& alphas) {
  if (!std::is_sorted(alphas.begin(), alphas.end()))
    throw std::invalid_argument("alpha_sweep: alphas must be sorted");
  std::vector<AverageResult> out;
  for (double a : alphas) out.push_back(proximal_average(f, g, AverageParams::for_inputs(f, g, a, mu)));
  return out;
}

std::vector<AverageResult> mu_sweep(const GridFunction& f, const GridFunction& g, double alpha,
                                    const std::vector<double>& mus) {
  if (!std::is_sorted(mus.begin(), mus.end()))
    throw std::invalid_argument("mu_sweep: mus must be ascending");
  std::vector<AverageResult> out;
  for (double m : mus) out.push_back(proximal_average(f, g, AverageParams::for_inputs(f, g, alpha, m)));
  return out;
}

}  // namespace proxlab
