#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "proxlab/ext_real.hpp"
#include "proxlab/grid.hpp"

namespace proxlab {

/// Polynomial with ascending coefficients c0 + c1 x + ... (degree <= 4).
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double x) const noexcept;
  Polynomial derivative() const;
  /// Degree after dropping exact trailing zeros; the zero polynomial has degree 0.
  std::size_t degree() const noexcept;
  const std::vector<double>& coefficients() const noexcept { return c_; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  static constexpr std::size_t kMaxDegree = 4;

 private:
  std::vector<double> c_{0.0};
};

/// Piecewise polynomial on the real line.
///
/// pieces[0] lives on (-inf, b0), pieces[i] on (b_{i-1}, b_i) and the last
/// piece on (b_last, +inf); a missing piece means +inf. At a breakpoint the
/// value is the minimum of the two adjacent pieces and of the optional point
/// value, so the function is lower semicontinuous there.
class Piecewise1D {
 public:
  using Piece = std::optional<Polynomial>;

  Piecewise1D(std::vector<double> breakpoints, std::vector<Piece> pieces,
              std::vector<std::optional<double>> point_values = {});

  ExtReal operator()(double x) const;

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const std::vector<std::optional<double>>& point_values() const noexcept { return point_values_; }

  /// Limits from the left/right at breakpoint k (+inf for a missing piece).
  ExtReal left_limit(std::size_t k) const;
  ExtReal right_limit(std::size_t k) const;

  friend bool operator==(const Piecewise1D&, const Piecewise1D&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<Piece> pieces_;
  std::vector<std::optional<double>> point_values_;
};

/// q_A(x) = 1/2 <x, A x>; A is symmetrized on construction.
class QuadraticFunction {
 public:
  explicit QuadraticFunction(const Eigen::MatrixXd& a);

  double operator()(const Point& x) const;
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }

  friend bool operator==(const QuadraticFunction& l, const QuadraticFunction& r) {
    return l.a_.rows() == r.a_.rows() && l.a_ == r.a_;
  }

 private:
  Eigen::MatrixXd a_;
};

/// Grid samples used as a function; off-node evaluation interpolates
/// multilinearly and is +inf outside the box or next to +inf nodes.
struct SampledFunction {
  GridFunction samples;

  ExtReal operator()(const Point& x) const;
  friend bool operator==(const SampledFunction& l, const SampledFunction& r) {
    return l.samples.spec() == r.samples.spec() &&
           std::equal(l.samples.values().begin(), l.samples.values().end(),
                      r.samples.values().begin());
  }
};

/// Named fixture from the registry; resolved to a Piecewise1D.
struct Builtin {
  std::string name;                 // fk | section10_g | neg_half_sq | indicator_point | double_well
  double eps = 0.5;                 // fk
  double point = 0.0;               // indicator_point

  friend bool operator==(const Builtin&, const Builtin&) = default;
};

Piecewise1D resolve_builtin(const Builtin& b);
const std::vector<std::string>& builtin_names();

/// Declarative function description. declared_threshold == nullopt means "auto".
struct FunctionDescriptor {
  std::variant<QuadraticFunction, Piecewise1D, SampledFunction, Builtin> payload;
  std::optional<double> declared_threshold;

  std::string kind() const;
  /// Dimension of the points the function accepts.
  std::size_t dim() const;

  friend bool operator==(const FunctionDescriptor&, const FunctionDescriptor&) = default;
};

namespace fixtures {
FunctionDescriptor fk(double eps);
FunctionDescriptor section10_g();
FunctionDescriptor neg_half_sq();
FunctionDescriptor indicator_point(double a);
FunctionDescriptor double_well();
FunctionDescriptor quadratic(const Eigen::MatrixXd& a);
FunctionDescriptor scalar_quadratic(double a);  // q_a(x) = a x^2 / 2
FunctionDescriptor zero();
/// Indicator of [lo, hi].
FunctionDescriptor indicator_interval(double lo, double hi);
}  // namespace fixtures

/// f(x); x must have dim() coordinates.
ExtReal evaluate(const FunctionDescriptor& f, const Point& x);

/// Samples f at every node. Records the prox-threshold on the result.
/// Throws AllInfinite when no node is finite.
GridFunction sample_to_grid(const FunctionDescriptor& f, const GridSpec& spec,
                            std::string label = {});

struct Threshold {
  double value = kInf;      // +inf when bounded below by an affine function
  bool heuristic = false;   // true for estimates on sampled data
};

/// Prox-threshold. Exact for quadratics and piecewise polynomials; a
/// conservative estimate for samples without a declared value.
/// Throws NotProxBounded when a tail decreases faster than any quadratic.
Threshold prox_threshold(const FunctionDescriptor& f);

/// Reads the structured-text (YAML) descriptor format. Throws ParseError,
/// UnknownBuiltin or DegreeTooHigh.
FunctionDescriptor parse_descriptor(std::string_view text);
std::string serialize_descriptor(const FunctionDescriptor& f);

/// Shortest decimal that round-trips, "inf" for +inf.
std::string format_double(double v);

}  // namespace proxlab
