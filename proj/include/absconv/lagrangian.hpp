#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absconv/families.hpp"
#include "absconv/minimax.hpp"

namespace absconv {

/// Perturbation table p(x, y) on a finite X and a finite metric space Y with
/// distinguished y0. The problem of interest is min_x p(x, y0).
///
/// p never takes -inf and every column p(., y) is proper. A row may be
/// identically +inf. Empty columns (p(., y) = +inf) are accepted only when
/// allow_empty_columns is set, which constrained instances with an empty
/// feasible set need.
class PerturbationProblem {
 public:
  PerturbationProblem(std::size_t nx, SpacePtr Y, std::vector<ExtReal> p, std::size_t y0,
                      bool allow_empty_columns = false);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return Y_->size(); }
  std::size_t y0() const noexcept { return y0_; }
  const FiniteMetricSpace& Y() const noexcept { return *Y_; }
  const SpacePtr& Y_ptr() const noexcept { return Y_; }
  ExtReal operator()(std::size_t x, std::size_t y) const { return p_[x * ny() + y]; }
  const std::vector<ExtReal>& values() const noexcept { return p_; }

  GridFn row(std::size_t x) const;
  /// V(y) = min_x p(x, y).
  GridFn value_function() const;

 private:
  std::size_t nx_;
  SpacePtr Y_;
  std::vector<ExtReal> p_;
  std::size_t y0_;
};

/// L(x, psi_j) = psi_j(y0) - p*_x(psi_j) over a finite multiplier grid.
struct LagTable {
  std::size_t nx = 0;
  std::size_t n_psi = 0;
  std::size_t y0 = 0;
  std::vector<ExtReal> L;           // row-major nx x n_psi
  std::vector<ExtReal> partial_conj;  // p*_x(psi_j), same layout

  ExtReal operator()(std::size_t x, std::size_t j) const { return L[x * n_psi + j]; }
};

/// p*_x(psi) = max_y (psi(y) - p(x, y)).
ExtReal partial_conjugate(const PerturbationProblem& prob, std::size_t x, const ElemFamily& family,
                          const ElemParams& params);

LagTable build_lagrangian(const PerturbationProblem& prob, const DualGrid& psi_grid,
                          Exec exec = Exec::kParallel);

/// All zero-gap statements are relative to the multiplier grid, whose
/// description is carried in `grid`.
struct DualityReport {
  ExtReal primal;             // V(y0) = min_x p(x, y0)
  ExtReal lagrangian_primal;  // min_x max_psi L(x, psi)
  ExtReal dual;               // max_psi min_x L(x, psi)
  ExtReal gap;                // primal - dual, 0 when they coincide
  GridFn V;
  std::vector<ExtReal> V_star;  // conjugate of V on the grid
  ExtReal V_bidual_at_y0;
  /// max_psi L(x, psi) = p(x, y0) within 1e-9 for every x, i.e. each p(x, .)
  /// is convex at y0 relative to the grid.
  bool reconstruction_ok = false;
  /// Each p(x, .) coincides with its biconjugate on all of Y.
  bool convex_on_Y = false;
  std::size_t best_multiplier = 0;  // dual maximizer, ties to the smallest member
  std::string grid;
};

DualityReport duality_report(const PerturbationProblem& prob, const DualGrid& psi_grid,
                             Exec exec = Exec::kParallel);

/// Multipliers psi1 = psi2 and constant support members phi1 = phi2 = alpha
/// of L(., psi): the constant level is a support member whenever the
/// multiplier reaches it.
struct Certificate {
  std::size_t psi_index = 0;
  ElemParams psi1, psi2;
  std::vector<double> phi1, phi2;
  TCertificate t;
};

/// Throws Errc::kLevelAbovePrimal when alpha >= V(y0).
std::optional<Certificate> gap_certificate(const PerturbationProblem& prob, const DualGrid& psi_grid,
                                           double alpha);

/// Eight levels approaching V(y0) geometrically, the last one V(y0) - 1e-6,
/// each checked with gap_certificate.
struct ZeroGapSweep {
  std::vector<double> alphas;
  std::vector<bool> certified;
  bool zero_gap = false;
};

ZeroGapSweep zero_gap_sweep(const PerturbationProblem& prob, const DualGrid& psi_grid);

/// L(x, t psi_a + (1-t) psi_b) >= t L(x, psi_a) + (1-t) L(x, psi_b) - tol at
/// every x. Throws Errc::kNotConvexCombinable for families whose parameter
/// combinations leave the class.
bool concavity_probe(const PerturbationProblem& prob, const ElemFamily& family,
                     const ElemParams& psi_a, const ElemParams& psi_b, double t, double tol = 1e-9);

/// max(0, V(y0) - min{V(y) : 0 < d(y, y0) <= radius}); 0 on an empty
/// punctured ball. Throws Errc::kInfiniteAtPoint when V(y0) is infinite.
double lsc_defect(const GridFn& V, const FiniteMetricSpace& Y, std::size_t y0, double radius);

}  // namespace absconv
