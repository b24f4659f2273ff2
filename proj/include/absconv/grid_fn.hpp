#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "absconv/ext_real.hpp"

namespace absconv {

/// Extended-real function sampled on a finite domain (one value per point).
class GridFn {
 public:
  GridFn() = default;
  explicit GridFn(std::vector<ExtReal> values) : values_(std::move(values)) {}
  static GridFn from_reals(std::span<const double> values);
  static GridFn constant(std::size_t n, ExtReal v) { return GridFn(std::vector<ExtReal>(n, v)); }

  std::size_t size() const noexcept { return values_.size(); }
  ExtReal operator[](std::size_t i) const { return values_[i]; }
  ExtReal& operator[](std::size_t i) { return values_[i]; }
  const std::vector<ExtReal>& values() const noexcept { return values_; }

  /// No value is -inf and at least one value is finite.
  bool proper() const noexcept;
  bool takes_minus_inf() const noexcept;
  bool real_valued() const noexcept;

  /// IEEE view of the values (infinite tags become +-infinity).
  std::vector<double> raw() const;

  friend bool operator==(const GridFn&, const GridFn&) = default;

 private:
  std::vector<ExtReal> values_;
};

}  // namespace absconv
