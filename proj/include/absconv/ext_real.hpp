#pragma once

#include <compare>
#include <limits>
#include <string>

namespace absconv {

/// A value in [-inf, +inf] with total arithmetic rules.
///
/// Stored as an IEEE double whose infinities encode the two infinite tags;
/// NaN is never representable. The rules follow the sup-convention used by
/// conjugate formulas:
///   r - (+inf) = -inf,  r - (-inf) = +inf,  (+inf) + r = +inf,
///   r * (+inf) = +inf for r > 0, -inf for r < 0, 0 for r = 0.
/// (+inf) + (-inf) raises Errc::kUndefinedArithmetic.
class ExtReal {
 public:
  enum class Kind { kMinusInf, kFinite, kPlusInf };

  constexpr ExtReal() noexcept = default;

  /// Finite value; throws on NaN or an infinite argument.
  static ExtReal finite(double v);
  /// Maps IEEE infinities onto the infinite tags; throws on NaN.
  static ExtReal from_double(double v);
  static constexpr ExtReal plus_inf() noexcept {
    return ExtReal(std::numeric_limits<double>::infinity());
  }
  static constexpr ExtReal minus_inf() noexcept {
    return ExtReal(-std::numeric_limits<double>::infinity());
  }

  constexpr Kind kind() const noexcept {
    if (v_ == std::numeric_limits<double>::infinity()) return Kind::kPlusInf;
    if (v_ == -std::numeric_limits<double>::infinity()) return Kind::kMinusInf;
    return Kind::kFinite;
  }
  constexpr bool is_finite() const noexcept { return kind() == Kind::kFinite; }
  constexpr bool is_plus_inf() const noexcept { return kind() == Kind::kPlusInf; }
  constexpr bool is_minus_inf() const noexcept { return kind() == Kind::kMinusInf; }

  /// The finite value; throws Errc::kInfiniteAtPoint on an infinite tag.
  double value() const;
  /// IEEE view (infinite tags become +-infinity). Never NaN.
  constexpr double raw() const noexcept { return v_; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend constexpr std::weak_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
    if (a.v_ < b.v_) return std::weak_ordering::less;
    if (b.v_ < a.v_) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b);
  friend ExtReal operator-(ExtReal a, ExtReal b);
  friend constexpr ExtReal operator-(ExtReal a) noexcept { return ExtReal(-a.v_); }
  friend ExtReal operator*(double r, ExtReal a);

 private:
  explicit constexpr ExtReal(double v) noexcept : v_(v) {}

  double v_ = 0.0;
};

/// lhs - rhs for a real lhs; total on this signature.
ExtReal ext_sub_real(double lhs, ExtReal rhs);

/// "+inf", "-inf" or the shortest round-trip decimal.
std::string to_string(ExtReal x);

}  // namespace absconv
