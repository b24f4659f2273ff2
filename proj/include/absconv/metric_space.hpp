#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace absconv {

using Point = std::vector<double>;

enum class Validate { kFull, kFast };

struct Euclidean {};
struct CustomMetric {
  std::vector<std::vector<double>> matrix;
};
using MetricKind = std::variant<Euclidean, CustomMetric>;

/// Finite metric space: n points (optionally with coordinates) and a
/// validated n x n distance matrix.
///
/// Invariants: symmetric, zero diagonal, strictly positive off-diagonal and,
/// under Validate::kFull, the triangle inequality within 1e-12.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return n_; }
  double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {dist_.data() + i * n_, n_};
  }

  bool has_coordinates() const noexcept { return !points_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  const Point& point(std::size_t i) const { return points_.at(i); }
  const std::vector<Point>& points() const noexcept { return points_; }
  double diameter() const noexcept;

 private:
  friend FiniteMetricSpace build_metric_space(std::vector<Point>, const MetricKind&, Validate);

  std::vector<Point> points_;
  std::vector<double> dist_;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
};

/// Builds and validates a metric space. With CustomMetric the points may be
/// empty (plain finite index set) or must match the matrix size.
/// Throws Errc::kEmptyDomain, Errc::kDimensionMismatch or Errc::kNonMetric.
FiniteMetricSpace build_metric_space(std::vector<Point> points, const MetricKind& kind,
                                     Validate validate = Validate::kFull);

/// n equally spaced points on [lo, hi] with the euclidean metric.
FiniteMetricSpace uniform_line(double lo, double hi, std::size_t n);

double squared_norm(std::span<const double> x) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace absconv
