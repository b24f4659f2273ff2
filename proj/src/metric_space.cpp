#include "absconv/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "absconv/error.hpp"

namespace absconv {

namespace {

constexpr double kTriangleTol = 1e-12;

void check_finite_coords(const std::vector<Point>& points) {
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(Errc::kDimensionMismatch, "points of mixed dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw Error(Errc::kInvalidArgument, "non-finite coordinate");
    }
  }
}

void validate_matrix(const std::vector<double>& d, std::size_t n, Validate validate) {
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i * n + i] != 0.0) {
      throw Error(Errc::kNonMetric, "nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = d[i * n + j];
      if (!std::isfinite(dij) || !std::isfinite(d[j * n + i])) {
        throw Error(Errc::kNonMetric, "non-finite distance");
      }
      if (dij != d[j * n + i]) {
        throw Error(Errc::kNonMetric, "asymmetry at (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
      }
      if (dij < 0.0) throw Error(Errc::kNonMetric, "negative distance");
      if (dij == 0.0) throw Error(Errc::kNonMetric, "distinct points at zero distance");
    }
  }
  if (validate == Validate::kFast) return;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (d[i * n + k] > d[i * n + j] + d[j * n + k] + kTriangleTol) {
          throw Error(Errc::kNonMetric, "triangle inequality fails at (" + std::to_string(i) +
                                            "," + std::to_string(j) + "," +
                                            std::to_string(k) + ")");
        }
      }
    }
  }
}

}  // namespace

double squared_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double FiniteMetricSpace::diameter() const noexcept {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

FiniteMetricSpace build_metric_space(std::vector<Point> points, const MetricKind& kind,
                                     Validate validate) {
  FiniteMetricSpace space;
  if (const auto* custom = std::get_if<CustomMetric>(&kind)) {
    const std::size_t n = custom->matrix.size();
    if (n == 0) throw Error(Errc::kEmptyDomain, "empty distance matrix");
    if (!points.empty() && points.size() != n) {
      throw Error(Errc::kDimensionMismatch, "points and matrix sizes differ");
    }
    space.dist_.reserve(n * n);
    for (const auto& row : custom->matrix) {
      if (row.size() != n) throw Error(Errc::kDimensionMismatch, "distance matrix not square");
      space.dist_.insert(space.dist_.end(), row.begin(), row.end());
    }
    if (!points.empty()) check_finite_coords(points);
    space.n_ = n;
  } else {
    if (points.empty()) throw Error(Errc::kEmptyDomain, "no points");
    check_finite_coords(points);
    const std::size_t n = points.size();
    space.n_ = n;
    space.dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < points[i].size(); ++k) {
          const double diff = points[i][k] - points[j][k];
          s += diff * diff;
        }
        const double dij = std::sqrt(s);
        space.dist_[i * n + j] = dij;
        space.dist_[j * n + i] = dij;
      }
    }
  }
  space.dim_ = points.empty() ? 0 : points.front().size();
  space.points_ = std::move(points);
  validate_matrix(space.dist_, space.n_, validate);
  return space;
}

FiniteMetricSpace uniform_line(double lo, double hi, std::size_t n) {
  if (n == 0) throw Error(Errc::kEmptyDomain, "uniform_line with zero points");
  if (!(hi > lo) && n > 1) throw Error(Errc::kInvalidArgument, "uniform_line needs lo < hi");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.0 : (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    pts.push_back({lo + t});
  }
  return build_metric_space(std::move(pts), Euclidean{}, n > 300 ? Validate::kFast : Validate::kFull);
}

}  // namespace absconv
