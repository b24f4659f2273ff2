#include "absconv/ext_real.hpp"

#include <charconv>
#include <cmath>

#include "absconv/error.hpp"

namespace absconv {

ExtReal ExtReal::finite(double v) {
  if (!std::isfinite(v)) {
    throw Error(Errc::kInvalidArgument, "ExtReal::finite needs a finite, non-NaN value");
  }
  return ExtReal(v);
}

ExtReal ExtReal::from_double(double v) {
  if (std::isnan(v)) throw Error(Errc::kInvalidArgument, "NaN is not an extended real");
  return ExtReal(v);
}

double ExtReal::value() const {
  if (!is_finite()) throw Error(Errc::kInfiniteAtPoint, "value() on " + to_string(*this));
  return v_;
}

ExtReal operator+(ExtReal a, ExtReal b) {
  if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf())) {
    throw Error(Errc::kUndefinedArithmetic, "+inf + -inf");
  }
  return ExtReal(a.v_ + b.v_);
}

ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

ExtReal operator*(double r, ExtReal a) {
  if (std::isnan(r)) throw Error(Errc::kInvalidArgument, "NaN scalar");
  if (r == 0.0) return ExtReal(0.0);
  return ExtReal(r * a.v_);
}

ExtReal ext_sub_real(double lhs, ExtReal rhs) {
  return ExtReal::finite(lhs) - rhs;
}

std::string to_string(ExtReal x) {
  if (x.is_plus_inf()) return "+inf";
  if (x.is_minus_inf()) return "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x.raw());
  return std::string(buf, res.ptr);
}

}  // namespace absconv
