#pragma once

// Seeded random instances for property tests. All values are small dyadic
// rationals (multiples of 1/4 with few significant bits) and distances are
// 1-D differences or integer l1 sums, so every sum, product and difference
// the library forms is exact in double precision.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "absconv/constrained.hpp"
#include "absconv/families.hpp"
#include "absconv/lagrangian.hpp"

namespace corpus {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double quarter(Rng& rng, int lo, int hi) { return uniform_int(rng, lo, hi) / 4.0; }

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// n distinct points on the line, multiples of 1/4 within [-r, r].
inline absconv::SpacePtr line_points(Rng& rng, std::size_t n, int r = 8) {
  std::set<int> ticks;
  while (ticks.size() < n) ticks.insert(uniform_int(rng, -4 * r, 4 * r));
  std::vector<absconv::Point> pts;
  for (int t : ticks) pts.push_back({t / 4.0});
  std::shuffle(pts.begin(), pts.end(), rng);
  return std::make_shared<const absconv::FiniteMetricSpace>(
      absconv::build_metric_space(pts, absconv::Euclidean{}));
}

// n distinct integer points in the plane with the l1 distance as a custom
// metric; coordinates are kept so slope families still apply.
inline absconv::SpacePtr plane_l1(Rng& rng, std::size_t n, int r = 6) {
  std::set<std::pair<int, int>> seen;
  std::vector<absconv::Point> pts;
  while (pts.size() < n) {
    const int a = uniform_int(rng, -r, r), b = uniform_int(rng, -r, r);
    if (seen.insert({a, b}).second) pts.push_back({double(a), double(b)});
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = std::abs(pts[i][0] - pts[j][0]) + std::abs(pts[i][1] - pts[j][1]);
    }
  }
  return std::make_shared<const absconv::FiniteMetricSpace>(
      absconv::build_metric_space(pts, absconv::CustomMetric{d}));
}

inline absconv::SpacePtr random_space(Rng& rng, std::size_t n) {
  return coin(rng, 0.5) ? line_points(rng, n) : plane_l1(rng, n);
}

// Dyadic values; with probability `holes` an entry is +inf, but never all.
inline absconv::GridFn random_fn(Rng& rng, std::size_t n, double holes = 0.15, int range = 32) {
  std::vector<absconv::ExtReal> v(n);
  for (auto& e : v) {
    e = coin(rng, holes) ? absconv::ExtReal::plus_inf() : absconv::ExtReal::finite(quarter(rng, -range, range));
  }
  v[uniform_size(rng, 0, n - 1)] = absconv::ExtReal::finite(quarter(rng, -range, range));
  return absconv::GridFn(std::move(v));
}

inline const std::vector<absconv::FamilyKind>& all_kinds() {
  using absconv::FamilyKind;
  static const std::vector<FamilyKind> kinds{FamilyKind::kAffine,  FamilyKind::kQuadMinus,
                                             FamilyKind::kQuadPlus, FamilyKind::kSigmaNu,
                                             FamilyKind::kMetric,  FamilyKind::kGeneralizedMetric,
                                             FamilyKind::kGauge};
  return kinds;
}

// Dyadic breakpoints (integer abscissae, quarter-integer heights) keep
// interpolation exact for integer and quarter distances.
inline absconv::RadialProfile random_profile(Rng& rng) {
  std::vector<double> t{0.0}, g{0.0};
  for (int k = 1; k <= 5; ++k) {
    t.push_back(k == 5 ? 32.0 : double(1 << (k - 1)));
    g.push_back(g.back() + quarter(rng, 1, 8) * (t.back() - t[t.size() - 2]));
  }
  return absconv::RadialProfile(t, g);
}

inline absconv::ElemFamily random_family(Rng& rng, absconv::FamilyKind kind, const absconv::SpacePtr& Y) {
  using absconv::ElemFamily;
  using absconv::FamilyKind;
  switch (kind) {
    case FamilyKind::kAffine: return ElemFamily::affine(Y);
    case FamilyKind::kQuadMinus: return ElemFamily::quad_minus(Y);
    case FamilyKind::kQuadPlus: return ElemFamily::quad_plus(Y);
    case FamilyKind::kSigmaNu: {
      std::vector<double> s(Y->size()), nu(Y->size());
      for (auto& v : s) v = quarter(rng, 0, 16);
      for (auto& v : nu) v = quarter(rng, -16, 16);
      s[0] = nu[0] = 0.0;
      return ElemFamily::sigma_nu(Y, s, nu, 0);
    }
    case FamilyKind::kMetric: return ElemFamily::metric(Y);
    case FamilyKind::kGeneralizedMetric: return ElemFamily::generalized_metric(Y, random_profile(rng));
    case FamilyKind::kGauge:
      return ElemFamily::gauge(Y, coin(rng, 0.5) ? absconv::NormKind::kL1 : absconv::NormKind::kLinf);
  }
  return ElemFamily::affine(Y);
}

// Small grid with dyadic slopes, curvatures and anchors.
inline absconv::DualGrid random_grid(Rng& rng, const absconv::ElemFamily& family, std::size_t max_members = 24) {
  const auto& Y = family.domain();
  absconv::GridSpec spec;
  const std::size_t slopes = family.uses_slope() ? uniform_size(rng, 1, 6) : 1;
  const std::size_t curv = family.uses_curvature() ? uniform_size(rng, 1, 4) : 1;
  std::size_t anchors = family.uses_anchor() ? uniform_size(rng, 1, std::min<std::size_t>(Y.size(), 6)) : 1;
  while (slopes * curv * anchors > max_members && anchors > 1) --anchors;
  if (family.uses_slope()) {
    std::set<absconv::Point> seen;
    while (seen.size() < slopes) {
      absconv::Point p(Y.dim());
      for (auto& v : p) v = quarter(rng, -12, 12);
      seen.insert(p);
    }
    spec.slopes.assign(seen.begin(), seen.end());
  }
  if (family.uses_curvature()) {
    std::set<double> seen;
    const bool positive = family.uses_anchor();
    while (seen.size() < curv) seen.insert(quarter(rng, positive ? 1 : 0, 16));
    spec.curvatures.assign(seen.begin(), seen.end());
  }
  if (family.uses_anchor()) {
    std::set<std::size_t> seen;
    while (seen.size() < anchors) seen.insert(uniform_size(rng, 0, Y.size() - 1));
    spec.anchors.assign(seen.begin(), seen.end());
  }
  return absconv::make_dual_grid(family, spec);
}

// Random perturbation table; every column keeps a finite entry.
inline absconv::PerturbationProblem random_problem(Rng& rng, const absconv::SpacePtr& Y, std::size_t nx) {
  const std::size_t ny = Y->size();
  std::vector<absconv::ExtReal> p(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      p[x * ny + y] = coin(rng, 0.2) ? absconv::ExtReal::plus_inf()
                                     : absconv::ExtReal::finite(quarter(rng, -32, 32));
    }
  }
  for (std::size_t y = 0; y < ny; ++y) {
    const std::size_t x = uniform_size(rng, 0, nx - 1);
    if (!p[x * ny + y].is_finite()) p[x * ny + y] = absconv::ExtReal::finite(quarter(rng, -32, 32));
  }
  return absconv::PerturbationProblem(nx, Y, std::move(p), uniform_size(rng, 0, ny - 1));
}

// Feasible bounded constrained instance: A(y) nonempty for every y, f finite.
inline absconv::ConstrainedInstance random_constrained(Rng& rng, std::size_t nx, std::size_t ny) {
  absconv::ConstrainedInstance inst;
  inst.Y = random_space(rng, ny);
  std::vector<double> f(nx);
  for (auto& v : f) v = quarter(rng, -32, 32);
  inst.f = absconv::GridFn::from_reals(f);
  std::vector<std::vector<std::size_t>> feasible(ny);
  const double density = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
  for (auto& set : feasible) {
    for (std::size_t x = 0; x < nx; ++x) {
      if (coin(rng, density)) set.push_back(x);
    }
    if (set.empty()) set.push_back(uniform_size(rng, 0, nx - 1));
  }
  inst.map = absconv::ConstraintMap::from_feasible_sets(nx, std::move(feasible));
  inst.y0 = uniform_size(rng, 0, ny - 1);
  return inst;
}

}  // namespace corpus
