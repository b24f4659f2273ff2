#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "absconv/lagrangian.hpp"

namespace absconv {

/// Feasible-set map A: Y => X together with its inverse G = A^{-1}: X => Y.
class ConstraintMap {
 public:
  /// feasible[y] lists the x indices in A(y).
  static ConstraintMap from_feasible_sets(std::size_t nx, std::vector<std::vector<std::size_t>> feasible);

  std::size_t nx() const noexcept { return G_.size(); }
  std::size_t ny() const noexcept { return A_.size(); }
  const std::vector<std::size_t>& A(std::size_t y) const { return A_.at(y); }
  const std::vector<std::size_t>& G(std::size_t x) const { return G_.at(x); }
  bool contains(std::size_t y, std::size_t x) const;

 private:
  std::vector<std::vector<std::size_t>> A_, G_;
};

/// min f(x) subject to x in A(y0). Finite sets G(x) are closed.
struct ConstrainedInstance {
  GridFn f;
  ConstraintMap map;
  SpacePtr Y;
  std::size_t y0 = 0;
  /// Permit empty A(y) (dom A != Y); the perturbation then has empty columns.
  bool allow_empty_feasible = false;

  /// Throws Errc::kImproperObjective or Errc::kDimensionMismatch.
  void validate() const;
};

/// p(x, y) = f(x) if x in A(y), +inf otherwise.
PerturbationProblem build_constrained_perturbation(const ConstrainedInstance& inst);

/// L(x, anchor, a) = -a d(y0, anchor) + f(x) + a min_{y in G(x)} d(y, anchor);
/// +inf where G(x) is empty.
GridFn metric_lagrangian(const ConstrainedInstance& inst, std::size_t anchor, double a);

/// sup over (anchor, a > 0) of the metric Lagrangian: f(x) if y0 in G(x),
/// +inf otherwise.
ExtReal metric_primal_sup(const ConstrainedInstance& inst, std::size_t x);

/// max over anchors of the metric Lagrangian at a fixed scale a.
ExtReal metric_grid_sup(const ConstrainedInstance& inst, std::size_t x, double a);

/// dist(y0, G(x)); +inf when G(x) is empty.
double distance_to_feasible(const ConstrainedInstance& inst, std::size_t x);

struct MetricGapReport {
  DualityReport duality;
  std::vector<double> ladder;
  /// Dual value using rungs 0..k only.
  std::vector<ExtReal> dual_by_rung;
  /// Smallest a with L(., y0, a) >= min f on A(y0) at every x.
  double proof_bound = 0.0;
  std::optional<std::size_t> min_rung;  // first rung with gap <= tol
  double tol = 1e-9;
};

/// Duality over the metric multiplier grid (all anchors x ladder). Requires
/// A(y0) nonempty and min f on A(y0) finite. Throws std::logic_error if the
/// ladder reaches proof_bound yet the gap exceeds tol.
MetricGapReport verify_zero_gap_metric(const ConstrainedInstance& inst, const std::vector<double>& a_ladder,
                                       double tol = 1e-9);

/// L(x, u, a) = -a|y0|^2 + <u, y0> - max_{y in G(x)} (-a|y|^2 + <u, y> - f(x)).
GridFn quad_lagrangian(const ConstrainedInstance& inst, const Point& u, double a);

/// Quadratic-minorant member phi with phi(p_out) > 0 and phi <= 0 on C.
/// Affine candidates are tried first, then centered quadratics along
/// a_ladder. Throws Errc::kNotSeparable with the best margin found.
ElemParams phi_lsc_set_separation(const SpacePtr& Y, const std::vector<std::size_t>& C, std::size_t p_out,
                                  const std::vector<double>& a_ladder = {1, 2, 4, 8, 16, 32, 64});

}  // namespace absconv
