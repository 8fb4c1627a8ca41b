#pragma once

#include <limits>
#include <ostream>

namespace negdimcd {

/// A real number or +infinity.
///
/// The distortion coefficients sigma and tau are set to +infinity outside
/// their natural domain. A coefficient of +infinity in front of a positive
/// quantity makes an upper-bound inequality hold trivially, and the checkers
/// treat it that way instead of propagating IEEE infinities through sums.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; +inf as a double when infinite.
  [[nodiscard]] constexpr double value() const { return value_; }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) {
    if (b.infinite_) return true;
    if (a.infinite_) return false;
    return a.value_ <= b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    if (x.infinite_) return os << "+inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace negdimcd
