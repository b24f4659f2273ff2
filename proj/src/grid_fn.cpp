#include "absconv/grid_fn.hpp"

#include <algorithm>

namespace absconv {

GridFn GridFn::from_reals(std::span<const double> values) {
  std::vector<ExtReal> v;
  v.reserve(values.size());
  for (double x : values) v.push_back(ExtReal::from_double(x));
  return GridFn(std::move(v));
}

bool GridFn::takes_minus_inf() const noexcept {
  return std::any_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_minus_inf(); });
}

bool GridFn::proper() const noexcept {
  return !takes_minus_inf() &&
         std::any_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_finite(); });
}

bool GridFn::real_valued() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](ExtReal v) { return v.is_finite(); });
}

std::vector<double> GridFn::raw() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](ExtReal v) { return v.raw(); });
  return out;
}

}  // namespace absconv
