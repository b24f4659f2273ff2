#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absconv/ext_real.hpp"
#include "absconv/grid_fn.hpp"
#include "absconv/kernels.hpp"
#include "absconv/metric_space.hpp"

namespace absconv {

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

enum class FamilyKind {
  kAffine,             // <l, x> + c
  kQuadMinus,          // -a |x|^2 + <l, x> + c, a >= 0
  kQuadPlus,           // a |x|^2 + <l, x> + c, a >= 0
  kSigmaNu,            // a sigma(x) + nu(x) + c, a >= 0
  kMetric,             // -a d(x, x0) + c, a > 0
  kGeneralizedMetric,  // -a g(d(x, x0)) + c, a > 0
  kGauge,              // -a |x - x0| + <l, x> + c, a > 0, |.| a fixed norm
};

enum class NormKind { kL1, kL2, kLinf };

const char* to_string(FamilyKind kind) noexcept;
const char* to_string(NormKind kind) noexcept;

double norm(std::span<const double> x, NormKind kind) noexcept;

/// Piecewise-linear g: [0, inf) -> [0, inf) with g(0) = 0 and g(t) > 0 for
/// t > 0, extrapolated beyond the last sample with the last slope.
class RadialProfile {
 public:
  RadialProfile(std::vector<double> t, std::vector<double> g);

  double operator()(double t) const;
  /// Smallest C with g(t + s) <= C (g(t) + g(s)) over the sample pairs.
  double quasi_subadditivity() const noexcept { return c_; }
  const std::vector<double>& t() const noexcept { return t_; }
  const std::vector<double>& g() const noexcept { return g_; }

 private:
  std::vector<double> t_, g_;
  double c_ = 1.0;
};

/// A parameterized class of real-valued elementary functions on a finite
/// domain. Every kind is closed under adding constants.
class ElemFamily {
 public:
  static ElemFamily affine(SpacePtr domain);
  static ElemFamily quad_minus(SpacePtr domain);
  static ElemFamily quad_plus(SpacePtr domain);
  /// sigma and nu must vanish at `origin` (default: the zero point if the
  /// domain has one, else point 0).
  static ElemFamily sigma_nu(SpacePtr domain, std::vector<double> sigma, std::vector<double> nu,
                             std::optional<std::size_t> origin = std::nullopt);
  static ElemFamily metric(SpacePtr domain);
  static ElemFamily generalized_metric(SpacePtr domain, RadialProfile g);
  static ElemFamily gauge(SpacePtr domain, NormKind norm);

  FamilyKind kind() const noexcept { return kind_; }
  const FiniteMetricSpace& domain() const noexcept { return *domain_; }
  const SpacePtr& domain_ptr() const noexcept { return domain_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }
  const std::vector<double>& nu() const noexcept { return nu_; }
  std::size_t origin() const noexcept { return origin_; }
  const std::optional<RadialProfile>& profile() const noexcept { return profile_; }
  NormKind norm_kind() const noexcept { return norm_; }

  bool closed_under_constants() const noexcept { return true; }
  bool uses_slope() const noexcept;
  bool uses_curvature() const noexcept;
  bool uses_anchor() const noexcept;
  /// Metric-type kinds (-a h(y, anchor) + c) have a radial profile around the anchor.
  bool is_radial() const noexcept;
  /// Convex combinations of parameters stay in the class.
  bool convex_combinable() const noexcept;

 private:
  ElemFamily(FamilyKind kind, SpacePtr domain);

  FamilyKind kind_;
  SpacePtr domain_;
  std::vector<double> sigma_, nu_;
  std::size_t origin_ = 0;
  std::optional<RadialProfile> profile_;
  NormKind norm_ = NormKind::kL2;
};

/// One member of a family. `ell` is empty for kinds without a slope and
/// `anchor` is set only for kinds that use one.
struct ElemParams {
  double a = 0.0;
  Point ell;
  std::optional<std::size_t> anchor;
  double c = 0.0;

  friend bool operator==(const ElemParams&, const ElemParams&) = default;
};

std::string to_string(const ElemParams& params);

/// Throws Errc::kBadParams when params do not describe a member of family.
void validate_params(const ElemFamily& family, const ElemParams& params);

/// Value of the member at domain point x. Throws Errc::kBadParams.
double eval_elementary(const ElemFamily& family, const ElemParams& params, std::size_t x);

/// Finite stand-in for a whole class: a list of distinct members with c = 0.
/// Offsets are dropped because they cancel in phi(x) - f*(phi).
class DualGrid {
 public:
  DualGrid(ElemFamily family, std::vector<ElemParams> params);

  const ElemFamily& family() const noexcept { return family_; }
  const std::vector<ElemParams>& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return params_.size(); }
  const ElemParams& operator[](std::size_t j) const { return params_[j]; }
  std::string describe() const;

 private:
  ElemFamily family_;
  std::vector<ElemParams> params_;
};

/// Axes of a product grid. Axes a family does not use are ignored; empty
/// axes fall back to {0} (curvature of quadratic kinds), {1} (a of radial
/// kinds), the zero slope, and all points (anchors).
struct GridSpec {
  std::vector<double> curvatures;
  std::vector<Point> slopes;
  std::vector<std::size_t> anchors;
};

DualGrid make_dual_grid(const ElemFamily& family, const GridSpec& spec);

/// Uniform lattice of `steps` values per coordinate on [-bound, bound]^dim.
std::vector<Point> slope_lattice(std::size_t dim, double bound, std::size_t steps);

struct AutoGridOptions {
  std::size_t slope_steps = 9;
  std::size_t curvature_levels = 4;
};

/// Data-driven grid: slopes span [-L, L] with L twice the largest difference
/// quotient of f; curvatures and radial scales follow {0 or 1, 2, 4, ...}.
DualGrid default_dual_grid(const ElemFamily& family, const GridFn& f,
                           const AutoGridOptions& options = {});

/// Values of every grid member on every domain point.
kernels::ElemTable tabulate(const DualGrid& dual, Exec exec = Exec::kParallel);

/// f*(phi_j) = max_x (phi_j(x) - f(x)). Throws Errc::kImproperInput when f
/// takes -inf.
std::vector<ExtReal> conjugate_transform(const GridFn& f, const DualGrid& dual,
                                         Exec exec = Exec::kParallel);

/// f**(x) = max_j (phi_j(x) - f*(phi_j)); never exceeds f.
GridFn biconjugate(const GridFn& f, const DualGrid& dual, Exec exec = Exec::kParallel);

/// phi <= f + tol on the whole grid.
bool is_support(const ElemFamily& family, const ElemParams& params, const GridFn& f, double tol);

/// f(x0) - f**(x0) >= 0. Throws Errc::kInfiniteAtPoint when f(x0) = +inf.
double convexity_defect(const GridFn& f, std::size_t x0, const DualGrid& dual);

/// Constructs gbar with gbar <= eps everywhere and gbar(y) <= g(y) - K when
/// d(y, y0) >= delta. Radial families only; throws Errc::kNoWitness if the
/// grid re-verification fails.
ElemParams peaking_witness(const ElemFamily& family, std::size_t y0, double eps, double delta,
                           double K, const ElemParams& g);

/// Constructs g with g(y0) > 1 - eps, g <= 1 on d < delta and g <= 0 on
/// d >= delta. Radial and gauge families only.
ElemParams urysohn_witness(const ElemFamily& family, std::size_t y0, double eps, double delta);

bool satisfies_peaking(const ElemFamily& family, std::size_t y0, double eps, double delta,
                       double K, const ElemParams& g, const ElemParams& gbar);
bool satisfies_urysohn(const ElemFamily& family, std::size_t y0, double eps, double delta,
                       const ElemParams& g);

}  // namespace absconv
