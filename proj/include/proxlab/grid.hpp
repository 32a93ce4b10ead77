#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "proxlab/ext_real.hpp"

namespace proxlab {

using Point = std::vector<double>;

/// One axis of a uniform grid: `points` nodes from `lower` to `upper`.
struct Axis {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t points = 3;

  double spacing() const noexcept { return (upper - lower) / static_cast<double>(points - 1); }

  // Computed from integer weights so that nodes hitting representable
  // values (breakpoints such as 0 or +-1) are exact.
  double node(std::size_t i) const noexcept {
    const double n = static_cast<double>(points - 1);
    const double k = static_cast<double>(i);
    return ((n - k) * lower + k * upper) / n;
  }

  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Uniform tensor grid of dimension 1 or 2, row-major (last axis fastest).
class GridSpec {
 public:
  explicit GridSpec(std::vector<Axis> axes);

  static GridSpec line(double lower, double upper, std::size_t points) {
    return GridSpec({Axis{lower, upper, points}});
  }
  static GridSpec plane(Axis x, Axis y) { return GridSpec({x, y}); }

  std::size_t dim() const noexcept { return axes_.size(); }
  const Axis& axis(std::size_t k) const { return axes_.at(k); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  std::size_t size() const noexcept { return size_; }
  double max_spacing() const noexcept;

  /// Multi-index of a flat index; unused trailing entries are zero.
  std::array<std::size_t, 2> unflatten(std::size_t flat) const noexcept {
    if (axes_.size() == 1) return {flat, 0};
    return {flat / axes_[1].points, flat % axes_[1].points};
  }
  std::size_t flatten(std::size_t i, std::size_t j = 0) const noexcept {
    return axes_.size() == 1 ? i : i * axes_[1].points + j;
  }

  Point node(std::size_t flat) const;
  double coord(std::size_t flat, std::size_t k) const noexcept {
    return axes_[k].node(unflatten(flat)[k]);
  }

  /// True when the node lies on the outer edge of the box.
  bool on_edge(std::size_t flat) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<Axis> axes_;
  std::size_t size_ = 0;
};

/// Extended-real function sampled on a GridSpec.
///
/// Besides the values, a grid function carries the prox-threshold recorded
/// for the function it represents (used to validate envelope parameters) and
/// per-node boundary flags: a flagged node's value was produced by an
/// optimization whose optimizer sat on the edge of the box, so it may differ
/// from the unrestricted transform.
class GridFunction {
 public:
  /// Throws AllInfinite when no value is finite.
  GridFunction(GridSpec spec, std::vector<ExtReal> values, std::string label = {});

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const ExtReal> values() const noexcept { return values_; }
  ExtReal operator[](std::size_t flat) const { return values_[flat]; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::string& label() const noexcept { return label_; }

  double threshold() const noexcept { return threshold_; }
  bool threshold_is_heuristic() const noexcept { return threshold_heuristic_; }
  std::span<const std::uint8_t> flags() const noexcept { return flags_; }
  bool flagged(std::size_t flat) const noexcept { return flags_[flat] != 0; }
  std::size_t flagged_count() const noexcept;

  GridFunction with_label(std::string label) const;
  GridFunction with_threshold(double threshold, bool heuristic = false) const;
  GridFunction with_flags(std::vector<std::uint8_t> flags) const;

  /// Max |value| over finite nodes.
  double sup_norm() const noexcept;
  std::vector<double> raw() const;

 private:
  GridSpec spec_;
  std::vector<ExtReal> values_;
  std::string label_;
  double threshold_ = kInf;
  bool threshold_heuristic_ = false;
  std::vector<std::uint8_t> flags_;
};

/// Builds a grid function from raw doubles (+inf allowed).
GridFunction make_grid_function(const GridSpec& spec, std::span<const double> values,
                                std::string label = {});

/// Pointwise helpers used throughout. Flags are OR-ed.
GridFunction negate(const GridFunction& f);
GridFunction add_quadratic(const GridFunction& f, double coefficient);  // f + c*|x|^2
GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g);
void require_same_grid(const GridFunction& f, const GridFunction& g);

}  // namespace proxlab
