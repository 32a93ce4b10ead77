#include "proxlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "proxlab/errors.hpp"

namespace proxlab {

GridSpec::GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2)
    throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
  size_ = 1;
  for (const Axis& a : axes_) {
    if (!(std::isfinite(a.lower) && std::isfinite(a.upper)) || !(a.lower < a.upper))
      throw std::invalid_argument("GridSpec: need finite lower < upper on every axis");
    if (a.points < 3) throw std::invalid_argument("GridSpec: need at least 3 points per axis");
    size_ *= a.points;
  }
}

double GridSpec::max_spacing() const noexcept {
  double h = 0.0;
  for (const Axis& a : axes_) h = std::max(h, a.spacing());
  return h;
}

Point GridSpec::node(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) p[k] = axes_[k].node(idx[k]);
  return p;
}

bool GridSpec::on_edge(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  for (std::size_t k = 0; k < axes_.size(); ++k)
    if (idx[k] == 0 || idx[k] + 1 == axes_[k].points) return true;
  return false;
}

GridFunction::GridFunction(GridSpec spec, std::vector<ExtReal> values, std::string label)
    : spec_(std::move(spec)), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() != spec_.size())
    throw GridMismatch("GridFunction: " + std::to_string(values_.size()) +
                       " values for a grid of " + std::to_string(spec_.size()) + " nodes");
  if (std::none_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_finite(); }))
    throw AllInfinite();
  flags_.assign(values_.size(), 0);
}

std::size_t GridFunction::flagged_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(flags_.begin(), flags_.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

GridFunction GridFunction::with_label(std::string label) const {
  GridFunction r = *this;
  r.label_ = std::move(label);
  return r;
}

GridFunction GridFunction::with_threshold(double threshold, bool heuristic) const {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  GridFunction r = *this;
  r.threshold_ = threshold;
  r.threshold_heuristic_ = heuristic;
  return r;
}

GridFunction GridFunction::with_flags(std::vector<std::uint8_t> flags) const {
  if (flags.size() != values_.size()) throw GridMismatch("flag vector size mismatch");
  GridFunction r = *this;
  r.flags_ = std::move(flags);
  return r;
}

double GridFunction::sup_norm() const noexcept {
  double m = 0.0;
  for (ExtReal v : values_)
    if (v.is_finite()) m = std::max(m, std::abs(v.value()));
  return m;
}

std::vector<double> GridFunction::raw() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [](ExtReal v) { return v.value(); });
  return out;
}

GridFunction make_grid_function(const GridSpec& spec, std::span<const double> values,
                                std::string label) {
  std::vector<ExtReal> v(values.begin(), values.end());
  return GridFunction(spec, std::move(v), std::move(label));
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.spec() == g.spec())) throw GridMismatch("functions live on different grids");
}

namespace {

std::vector<std::uint8_t> or_flags(const GridFunction& f, const GridFunction& g) {
  std::vector<std::uint8_t> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.flagged(i) || g.flagged(i);
  return out;
}

}  // namespace

GridFunction negate(const GridFunction& f) {
  std::vector<ExtReal> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (f[i].is_infinite()) throw std::domain_error("negate: -inf is not representable");
    v[i] = ExtReal(-f[i].value());
  }
  return GridFunction(f.spec(), std::move(v), "-(" + f.label() + ")")
      .with_flags({f.flags().begin(), f.flags().end()});
}

GridFunction add_quadratic(const GridFunction& f, double coefficient) {
  const GridSpec& s = f.spec();
  std::vector<ExtReal> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const double x = s.coord(i, k);
      r2 += x * x;
    }
    v[i] = f[i] + coefficient * r2;
  }
  return GridFunction(s, std::move(v), f.label()).with_flags({f.flags().begin(), f.flags().end()});
}

GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g) {
  require_same_grid(f, g);
  std::vector<ExtReal> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f[i] + b * g[i];
  return GridFunction(f.spec(), std::move(v)).with_flags(or_flags(f, g));
}

}  // namespace proxlab
