#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace proxlab {

/// A value in ]-inf, +inf]. +inf is the IEEE infinity; -inf and NaN are
/// rejected on construction so they never reach a stored function value.
class ExtReal {
 public:
  constexpr ExtReal() noexcept = default;

  ExtReal(double v) : v_(v) {  // NOLINT: implicit by design of the arithmetic
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw std::domain_error("ExtReal: value must be real or +inf");
  }

  static constexpr ExtReal infinity() noexcept {
    ExtReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_finite() const noexcept {
    return v_ != std::numeric_limits<double>::infinity();
  }
  constexpr bool is_infinite() const noexcept { return !is_finite(); }

  /// Raw double, +inf included.
  constexpr double value() const noexcept { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) noexcept {
    ExtReal r;
    r.v_ = a.v_ + b.v_;
    return r;
  }
  /// Adding a real never produces NaN: +inf + r = +inf.
  friend ExtReal operator+(ExtReal a, double r) { return ExtReal(a.v_ + r); }

  friend ExtReal operator*(double s, ExtReal a) {
    if (s < 0.0) throw std::domain_error("ExtReal: negative scaling");
    if (a.is_infinite()) return s == 0.0 ? ExtReal(0.0) : a;
    return ExtReal(s * a.v_);
  }

  friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(ExtReal a, ExtReal b) noexcept {
    // NaN is unrepresentable, so the order is total.
    return a.v_ < b.v_ ? std::strong_ordering::less
                       : (a.v_ > b.v_ ? std::strong_ordering::greater
                                      : std::strong_ordering::equal);
  }

 private:
  double v_ = 0.0;
};

inline ExtReal min(ExtReal a, ExtReal b) noexcept { return b < a ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace proxlab
