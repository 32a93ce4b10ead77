#include "proxlab/function_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "proxlab/errors.hpp"
#include "proxlab/quadratic.hpp"

namespace proxlab {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  if (c_.empty()) c_.push_back(0.0);
  if (degree() > kMaxDegree) throw DegreeTooHigh(degree());
  for (double c : c_)
    if (!std::isfinite(c)) throw std::invalid_argument("Polynomial: non-finite coefficient");
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

std::size_t Polynomial::degree() const noexcept {
  std::size_t d = c_.size() - 1;
  while (d > 0 && c_[d] == 0.0) --d;
  return d;
}

// --------------------------------------------------------------- Piecewise1D

namespace {

bool near_breakpoint(double x, double b) {
  return std::abs(x - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

ExtReal piece_value(const Piecewise1D::Piece& p, double x) {
  return p ? ExtReal((*p)(x)) : ExtReal::infinity();
}

}  // namespace

Piecewise1D::Piecewise1D(std::vector<double> breakpoints, std::vector<Piece> pieces,
                         std::vector<std::optional<double>> point_values)
    : breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      point_values_(std::move(point_values)) {
  for (std::size_t k = 1; k < breakpoints_.size(); ++k)
    if (!(breakpoints_[k - 1] < breakpoints_[k]))
      throw std::invalid_argument("Piecewise1D: breakpoints must be strictly increasing");
  if (pieces_.size() != breakpoints_.size() + 1)
    throw std::invalid_argument("Piecewise1D: need exactly one more piece than breakpoints");
  if (point_values_.empty()) point_values_.resize(breakpoints_.size());
  if (point_values_.size() != breakpoints_.size())
    throw std::invalid_argument("Piecewise1D: one optional point value per breakpoint");
  bool proper = std::any_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.has_value(); }) ||
                std::any_of(point_values_.begin(), point_values_.end(),
                            [](const std::optional<double>& v) { return v.has_value(); });
  if (!proper) throw std::invalid_argument("Piecewise1D: function is +inf everywhere");
}

ExtReal Piecewise1D::left_limit(std::size_t k) const { return piece_value(pieces_[k], breakpoints_[k]); }
ExtReal Piecewise1D::right_limit(std::size_t k) const {
  return piece_value(pieces_[k + 1], breakpoints_[k]);
}

ExtReal Piecewise1D::operator()(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
  // idx = number of breakpoints <= x; check the nearest breakpoints for a snap.
  for (std::size_t k : {idx, idx == 0 ? idx : idx - 1}) {
    if (k < breakpoints_.size() && near_breakpoint(x, breakpoints_[k])) {
      ExtReal v = min(left_limit(k), right_limit(k));
      if (point_values_[k]) v = min(v, ExtReal(*point_values_[k]));
      return v;
    }
  }
  return piece_value(pieces_[idx], x);
}

// ----------------------------------------------------------------- Quadratic

QuadraticFunction::QuadraticFunction(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("QuadraticFunction: matrix must be square and nonempty");
  if (!a.allFinite()) throw std::invalid_argument("QuadraticFunction: non-finite entry");
  a_ = 0.5 * (a + a.transpose());
}

double QuadraticFunction::operator()(const Point& x) const {
  if (x.size() != dim()) throw std::invalid_argument("QuadraticFunction: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return 0.5 * v.dot(a_ * v);
}

// ------------------------------------------------------------------- Samples

ExtReal SampledFunction::operator()(const Point& x) const {
  const GridSpec& s = samples.spec();
  if (x.size() != s.dim()) throw std::invalid_argument("SampledFunction: dimension mismatch");
  struct Tap {
    std::size_t index;
    double weight;
  };
  // Per axis: one tap on a node, two taps between nodes.
  std::array<std::vector<Tap>, 2> taps{std::vector<Tap>{{0, 1.0}}, std::vector<Tap>{{0, 1.0}}};
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Axis& a = s.axis(k);
    const double u = (x[k] - a.lower) / a.spacing();
    const double n = static_cast<double>(a.points - 1);
    if (u < -1e-9 || u > n + 1e-9) return ExtReal::infinity();
    const double r = std::round(u);
    if (std::abs(u - r) <= 1e-9) {
      taps[k] = {{static_cast<std::size_t>(std::clamp(r, 0.0, n)), 1.0}};
    } else {
      const double fl = std::floor(u);
      const double t = u - fl;
      const auto i = static_cast<std::size_t>(fl);
      taps[k] = {{i, 1.0 - t}, {i + 1, t}};
    }
  }
  double acc = 0.0;
  for (const Tap& ti : taps[0]) {
    for (const Tap& tj : taps[1]) {
      const ExtReal v = samples[s.flatten(ti.index, tj.index)];
      if (v.is_infinite()) return ExtReal::infinity();
      acc += ti.weight * tj.weight * v.value();
    }
  }
  return ExtReal(acc);
}

// ------------------------------------------------------------------ Builtins

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"fk", "section10_g", "neg_half_sq",
                                              "indicator_point", "double_well"};
  return names;
}

Piecewise1D resolve_builtin(const Builtin& b) {
  using P = Polynomial;
  if (b.name == "fk") {
    if (!(b.eps > 0.0)) throw std::invalid_argument("fk: eps must be positive");
    const double c = 1.0 + b.eps;
    // max{0, (1+eps)(1-x^2)}
    return Piecewise1D({-1.0, 1.0}, {P({0.0}), P({c, 0.0, -c}), P({0.0})});
  }
  if (b.name == "section10_g") {
    // 0 | -x(x+1)-x^2+1 | -x(x-1)-x^2+1 | 0
    return Piecewise1D({-1.0, 0.0, 1.0},
                       {P({0.0}), P({1.0, -1.0, -2.0}), P({1.0, 1.0, -2.0}), P({0.0})});
  }
  if (b.name == "neg_half_sq") return Piecewise1D({}, {P({0.0, 0.0, -0.5})});
  if (b.name == "indicator_point")
    return Piecewise1D({b.point}, {std::nullopt, std::nullopt}, {0.0});
  if (b.name == "double_well") {
    // min{(x-1)^2, (x+1)^2}
    return Piecewise1D({0.0}, {P({1.0, 2.0, 1.0}), P({1.0, -2.0, 1.0})});
  }
  throw UnknownBuiltin(b.name);
}

namespace fixtures {
FunctionDescriptor fk(double eps) { return {Builtin{"fk", eps, 0.0}, std::nullopt}; }
FunctionDescriptor section10_g() { return {Builtin{"section10_g"}, std::nullopt}; }
FunctionDescriptor neg_half_sq() { return {Builtin{"neg_half_sq"}, std::nullopt}; }
FunctionDescriptor indicator_point(double a) {
  return {Builtin{"indicator_point", 0.5, a}, std::nullopt};
}
FunctionDescriptor double_well() { return {Builtin{"double_well"}, std::nullopt}; }
FunctionDescriptor quadratic(const Eigen::MatrixXd& a) {
  return {QuadraticFunction(a), std::nullopt};
}
FunctionDescriptor scalar_quadratic(double a) {
  return quadratic(Eigen::MatrixXd::Constant(1, 1, a));
}
FunctionDescriptor zero() { return scalar_quadratic(0.0); }
FunctionDescriptor indicator_interval(double lo, double hi) {
  return {Piecewise1D({lo, hi}, {std::nullopt, Polynomial({0.0}), std::nullopt}), std::nullopt};
}
}  // namespace fixtures

// ---------------------------------------------------------------- Descriptor

std::string FunctionDescriptor::kind() const {
  switch (payload.index()) {
    case 0: return "quadratic";
    case 1: return "piecewise1d";
    case 2: return "samples";
    default: return "builtin";
  }
}

std::size_t FunctionDescriptor::dim() const {
  if (const auto* q = std::get_if<QuadraticFunction>(&payload)) return q->dim();
  if (const auto* s = std::get_if<SampledFunction>(&payload)) return s->samples.spec().dim();
  return 1;
}

ExtReal evaluate(const FunctionDescriptor& f, const Point& x) {
  if (x.size() != f.dim())
    throw std::invalid_argument("evaluate: point has " + std::to_string(x.size()) +
                                " coordinates, function expects " + std::to_string(f.dim()));
  return std::visit(
      [&](const auto& p) -> ExtReal {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticFunction>) return ExtReal(p(x));
        else if constexpr (std::is_same_v<T, Piecewise1D>) return p(x[0]);
        else if constexpr (std::is_same_v<T, SampledFunction>) return p(x);
        else return resolve_builtin(p)(x[0]);
      },
      f.payload);
}

GridFunction sample_to_grid(const FunctionDescriptor& f, const GridSpec& spec, std::string label) {
  if (spec.dim() != f.dim())
    throw GridMismatch("sample_to_grid: grid dimension " + std::to_string(spec.dim()) +
                       " does not match function dimension " + std::to_string(f.dim()));
  std::vector<ExtReal> values(spec.size());
  if (const auto* b = std::get_if<Builtin>(&f.payload)) {
    const Piecewise1D pw = resolve_builtin(*b);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = pw(spec.coord(i, 0));
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = evaluate(f, spec.node(i));
  }
  const Threshold t = prox_threshold(f);
  return GridFunction(spec, std::move(values), label.empty() ? f.kind() : std::move(label))
      .with_threshold(t.value, t.heuristic);
}

// ---------------------------------------------------------------- Thresholds

namespace {

// Threshold implied by one unbounded polynomial tail (direction +1 or -1).
double tail_threshold(const Polynomial& p, int direction) {
  const std::size_t d = p.degree();
  const double lead = p.coefficients()[d];
  if (d <= 1) return kInf;
  if (d == 2) return lead < 0.0 ? 1.0 / (-2.0 * lead) : kInf;
  // Degree 3 or 4: sign of the tail at infinity.
  const double sign = (d % 2 == 1 && direction < 0) ? -lead : lead;
  if (sign < 0.0)
    throw NotProxBounded("polynomial tail of degree " + std::to_string(d) +
                         " decreases faster than every quadratic");
  return kInf;
}

double piecewise_threshold(const Piecewise1D& pw) {
  double t = kInf;
  const auto& pieces = pw.pieces();
  if (pieces.front()) t = std::min(t, tail_threshold(*pieces.front(), -1));
  if (pieces.back()) t = std::min(t, tail_threshold(*pieces.back(), +1));
  return t;
}

// Most negative second difference on the outer tenth of each grid line,
// halved for a margin. Heuristic by nature.
double sampled_threshold_estimate(const GridFunction& g) {
  const GridSpec& s = g.spec();
  double worst = 0.0;  // most negative f'' estimate
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Axis& a = s.axis(k);
    const std::size_t n = a.points;
    const std::size_t band = std::max<std::size_t>(3, n / 10);
    const std::size_t other = s.dim() == 2 ? s.axis(1 - k).points : 1;
    const double h2 = a.spacing() * a.spacing();
    for (std::size_t line = 0; line < other; ++line) {
      auto at = [&](std::size_t i) {
        return g[s.dim() == 1 ? i : (k == 0 ? s.flatten(i, line) : s.flatten(line, i))];
      };
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i >= band && i + band < n) continue;
        const ExtReal l = at(i - 1), m = at(i), r = at(i + 1);
        if (l.is_infinite() || m.is_infinite() || r.is_infinite()) continue;
        worst = std::min(worst, (l.value() - 2.0 * m.value() + r.value()) / h2);
      }
    }
  }
  return worst < 0.0 ? 0.5 / (-worst) : kInf;
}

}  // namespace

Threshold prox_threshold(const FunctionDescriptor& f) {
  Threshold t;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticFunction>) {
          t.value = quad::threshold(p.matrix());
        } else if constexpr (std::is_same_v<T, Piecewise1D>) {
          t.value = piecewise_threshold(p);
        } else if constexpr (std::is_same_v<T, Builtin>) {
          t.value = piecewise_threshold(resolve_builtin(p));
        } else {
          if (f.declared_threshold) {
            t.value = *f.declared_threshold;
          } else {
            t.value = sampled_threshold_estimate(p.samples);
            t.heuristic = true;
          }
        }
      },
      f.payload);
  if (f.declared_threshold && !std::holds_alternative<SampledFunction>(f.payload))
    t.value = std::min(t.value, *f.declared_threshold);
  return t;
}

// ------------------------------------------------------------- Formatting

std::string format_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace proxlab
