#include "absconv/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "absconv/error.hpp"

namespace absconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kWitnessBumps = 256;

void require_coordinates(const FiniteMetricSpace& space, FamilyKind kind) {
  if (!space.has_coordinates()) {
    throw Error(Errc::kBadParams,
                std::string(to_string(kind)) + " family needs a domain with coordinates");
  }
}

// Radial profile h(y) of a metric-type or gauge member around `anchor`.
double radial(const ElemFamily& family, std::size_t anchor, std::size_t y) {
  const FiniteMetricSpace& dom = family.domain();
  switch (family.kind()) {
    case FamilyKind::kMetric: return dom.dist(y, anchor);
    case FamilyKind::kGeneralizedMetric: return (*family.profile())(dom.dist(y, anchor));
    case FamilyKind::kGauge: {
      const Point& p = dom.point(y);
      const Point& q = dom.point(anchor);
      Point diff(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) diff[k] = p[k] - q[k];
      return norm(diff, family.norm_kind());
    }
    default: break;
  }
  throw Error(Errc::kBadParams, "family has no radial profile");
}

double eval_unchecked(const ElemFamily& family, const ElemParams& params, std::size_t x) {
  const FiniteMetricSpace& dom = family.domain();
  switch (family.kind()) {
    case FamilyKind::kAffine:
      return dot(params.ell, dom.point(x)) + params.c;
    case FamilyKind::kQuadMinus: {
      const Point& p = dom.point(x);
      return -params.a * squared_norm(p) + dot(params.ell, p) + params.c;
    }
    case FamilyKind::kQuadPlus: {
      const Point& p = dom.point(x);
      return params.a * squared_norm(p) + dot(params.ell, p) + params.c;
    }
    case FamilyKind::kSigmaNu:
      return params.a * family.sigma()[x] + family.nu()[x] + params.c;
    case FamilyKind::kMetric:
      return -params.a * dom.dist(x, *params.anchor) + params.c;
    case FamilyKind::kGeneralizedMetric:
      return -params.a * (*family.profile())(dom.dist(x, *params.anchor)) + params.c;
    case FamilyKind::kGauge: {
      const Point& p = dom.point(x);
      double shift;
      if (params.anchor) {
        shift = radial(family, *params.anchor, x);
      } else {
        shift = norm(p, family.norm_kind());
      }
      return -params.a * shift + dot(params.ell, p) + params.c;
    }
  }
  return 0.0;
}

std::size_t default_origin(const FiniteMetricSpace& space) {
  if (!space.has_coordinates()) return 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Point& p = space.point(i);
    if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; })) return i;
  }
  return 0;
}

void check_witness_inputs(std::size_t y0, const FiniteMetricSpace& dom, double eps, double delta) {
  if (y0 >= dom.size()) throw Error(Errc::kInvalidArgument, "y0 out of range");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(Errc::kInvalidArgument, "eps must be >= 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(Errc::kInvalidArgument, "delta must be > 0");
  }
}

}  // namespace

const char* to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::kAffine: return "affine";
    case FamilyKind::kQuadMinus: return "quad_minus";
    case FamilyKind::kQuadPlus: return "quad_plus";
    case FamilyKind::kSigmaNu: return "sigma_nu";
    case FamilyKind::kMetric: return "metric";
    case FamilyKind::kGeneralizedMetric: return "generalized_metric";
    case FamilyKind::kGauge: return "gauge";
  }
  return "unknown";
}

const char* to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::kL1: return "l1";
    case NormKind::kL2: return "l2";
    case NormKind::kLinf: return "linf";
  }
  return "unknown";
}

double norm(std::span<const double> x, NormKind kind) noexcept {
  double s = 0.0;
  switch (kind) {
    case NormKind::kL1:
      for (double v : x) s += std::abs(v);
      return s;
    case NormKind::kL2:
      return std::sqrt(squared_norm(x));
    case NormKind::kLinf:
      for (double v : x) s = std::max(s, std::abs(v));
      return s;
  }
  return s;
}

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::vector<double> t, std::vector<double> g)
    : t_(std::move(t)), g_(std::move(g)) {
  if (t_.size() < 2 || t_.size() != g_.size()) {
    throw Error(Errc::kBadParams, "radial profile needs >= 2 matching samples");
  }
  if (t_.front() != 0.0 || g_.front() != 0.0) {
    throw Error(Errc::kBadParams, "radial profile must start at g(0) = 0");
  }
  for (std::size_t k = 1; k < t_.size(); ++k) {
    if (!(t_[k] > t_[k - 1]) || !std::isfinite(t_[k])) {
      throw Error(Errc::kBadParams, "radial profile abscissae must increase");
    }
    if (!(g_[k] > 0.0) || !std::isfinite(g_[k])) {
      throw Error(Errc::kBadParams, "radial profile must be positive away from 0");
    }
  }
  c_ = 0.0;
  for (std::size_t i = 1; i < t_.size(); ++i) {
    for (std::size_t j = i; j < t_.size() && t_[i] + t_[j] <= t_.back(); ++j) {
      c_ = std::max(c_, (*this)(t_[i] + t_[j]) / (g_[i] + g_[j]));
    }
  }
  if (c_ == 0.0) c_ = 1.0;
}

double RadialProfile::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - t_.begin());
  if (hi >= t_.size()) hi = t_.size() - 1;
  const std::size_t lo = hi - 1;
  const double w = (t - t_[lo]) / (t_[hi] - t_[lo]);
  return g_[lo] + w * (g_[hi] - g_[lo]);
}

// ---------------------------------------------------------------------------
// ElemFamily

ElemFamily::ElemFamily(FamilyKind kind, SpacePtr domain) : kind_(kind), domain_(std::move(domain)) {
  if (!domain_) throw Error(Errc::kEmptyDomain, "family without a domain");
  if (uses_slope()) require_coordinates(*domain_, kind_);
}

ElemFamily ElemFamily::affine(SpacePtr domain) { return {FamilyKind::kAffine, std::move(domain)}; }
ElemFamily ElemFamily::quad_minus(SpacePtr domain) {
  return {FamilyKind::kQuadMinus, std::move(domain)};
}
ElemFamily ElemFamily::quad_plus(SpacePtr domain) {
  return {FamilyKind::kQuadPlus, std::move(domain)};
}
ElemFamily ElemFamily::metric(SpacePtr domain) { return {FamilyKind::kMetric, std::move(domain)}; }

ElemFamily ElemFamily::sigma_nu(SpacePtr domain, std::vector<double> sigma, std::vector<double> nu,
                                std::optional<std::size_t> origin) {
  ElemFamily fam(FamilyKind::kSigmaNu, std::move(domain));
  const std::size_t n = fam.domain_->size();
  if (sigma.size() != n || nu.size() != n) {
    throw Error(Errc::kDimensionMismatch, "sigma/nu must have one value per point");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(sigma[i]) || !std::isfinite(nu[i])) {
      throw Error(Errc::kBadParams, "sigma/nu must be real-valued");
    }
  }
  fam.origin_ = origin.value_or(default_origin(*fam.domain_));
  if (fam.origin_ >= n) throw Error(Errc::kBadParams, "origin out of range");
  if (sigma[fam.origin_] != 0.0 || nu[fam.origin_] != 0.0) {
    throw Error(Errc::kBadParams, "sigma and nu must vanish at the origin");
  }
  fam.sigma_ = std::move(sigma);
  fam.nu_ = std::move(nu);
  return fam;
}

ElemFamily ElemFamily::generalized_metric(SpacePtr domain, RadialProfile g) {
  ElemFamily fam(FamilyKind::kGeneralizedMetric, std::move(domain));
  fam.profile_ = std::move(g);
  return fam;
}

ElemFamily ElemFamily::gauge(SpacePtr domain, NormKind norm) {
  ElemFamily fam(FamilyKind::kGauge, std::move(domain));
  fam.norm_ = norm;
  return fam;
}

bool ElemFamily::uses_slope() const noexcept {
  return kind_ == FamilyKind::kAffine || kind_ == FamilyKind::kQuadMinus ||
         kind_ == FamilyKind::kQuadPlus || kind_ == FamilyKind::kGauge;
}

bool ElemFamily::uses_curvature() const noexcept { return kind_ != FamilyKind::kAffine; }

bool ElemFamily::uses_anchor() const noexcept { return is_radial() || kind_ == FamilyKind::kGauge; }

bool ElemFamily::is_radial() const noexcept {
  return kind_ == FamilyKind::kMetric || kind_ == FamilyKind::kGeneralizedMetric;
}

bool ElemFamily::convex_combinable() const noexcept {
  return kind_ == FamilyKind::kAffine || kind_ == FamilyKind::kQuadMinus ||
         kind_ == FamilyKind::kQuadPlus || kind_ == FamilyKind::kSigmaNu;
}

// ---------------------------------------------------------------------------
// Parameters

std::string to_string(const ElemParams& params) {
  std::ostringstream os;
  os.precision(17);
  os << "{a=" << params.a << ", ell=[";
  for (std::size_t k = 0; k < params.ell.size(); ++k) os << (k ? "," : "") << params.ell[k];
  os << "]";
  if (params.anchor) os << ", anchor=" << *params.anchor;
  os << ", c=" << params.c << "}";
  return os.str();
}

void validate_params(const ElemFamily& family, const ElemParams& params) {
  const auto bad = [&](const std::string& why) {
    throw Error(Errc::kBadParams, std::string(to_string(family.kind())) + ": " + why + " in " +
                                      to_string(params));
  };
  if (!std::isfinite(params.a) || !std::isfinite(params.c)) bad("non-finite parameter");
  for (double l : params.ell) {
    if (!std::isfinite(l)) bad("non-finite slope");
  }
  const FiniteMetricSpace& dom = family.domain();
  if (family.uses_slope()) {
    if (params.ell.size() != dom.dim()) bad("slope dimension differs from domain dimension");
  } else if (!params.ell.empty()) {
    bad("family has no slope");
  }
  if (params.anchor && *params.anchor >= dom.size()) bad("anchor out of range");
  switch (family.kind()) {
    case FamilyKind::kAffine:
      if (params.a != 0.0) bad("affine members have no curvature");
      if (params.anchor) bad("affine members have no anchor");
      break;
    case FamilyKind::kQuadMinus:
    case FamilyKind::kQuadPlus:
    case FamilyKind::kSigmaNu:
      if (params.a < 0.0) bad("curvature must be >= 0");
      if (params.anchor) bad("family has no anchor");
      break;
    case FamilyKind::kMetric:
    case FamilyKind::kGeneralizedMetric:
      if (!(params.a > 0.0)) bad("a must be > 0");
      if (!params.anchor) bad("anchor required");
      break;
    case FamilyKind::kGauge:
      if (!(params.a > 0.0)) bad("a must be > 0");
      break;
  }
}

double eval_elementary(const ElemFamily& family, const ElemParams& params, std::size_t x) {
  validate_params(family, params);
  if (x >= family.domain().size()) throw Error(Errc::kInvalidArgument, "point out of range");
  return eval_unchecked(family, params, x);
}

// ---------------------------------------------------------------------------
// DualGrid

DualGrid::DualGrid(ElemFamily family, std::vector<ElemParams> params)
    : family_(std::move(family)), params_(std::move(params)) {
  if (params_.empty()) throw Error(Errc::kBadParams, "dual grid is empty");
  using Key = std::tuple<double, std::vector<double>, std::int64_t>;
  std::set<Key> seen;
  for (const auto& p : params_) {
    validate_params(family_, p);
    if (p.c != 0.0) throw Error(Errc::kBadParams, "dual grid members must have c = 0");
    Key key{p.a, p.ell, p.anchor ? static_cast<std::int64_t>(*p.anchor) : -1};
    if (!seen.insert(key).second) {
      throw Error(Errc::kBadParams, "duplicate dual grid member " + to_string(p));
    }
  }
}

std::string DualGrid::describe() const {
  std::ostringstream os;
  os << to_string(family_.kind()) << " grid, " << params_.size() << " members over "
     << family_.domain().size() << " points";
  return os.str();
}

std::vector<Point> slope_lattice(std::size_t dim, double bound, std::size_t steps) {
  if (steps == 0) throw Error(Errc::kInvalidArgument, "slope_lattice needs steps >= 1");
  std::vector<double> axis(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    axis[k] = steps == 1 ? 0.0
                         : -bound + 2.0 * bound * static_cast<double>(k) /
                                        static_cast<double>(steps - 1);
  }
  if (steps % 2 == 1) axis[steps / 2] = 0.0;
  std::vector<Point> out{Point{}};
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<Point> next;
    next.reserve(out.size() * steps);
    for (const auto& prefix : out) {
      for (double v : axis) {
        Point p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

DualGrid make_dual_grid(const ElemFamily& family, const GridSpec& spec) {
  const FiniteMetricSpace& dom = family.domain();
  std::vector<std::optional<std::size_t>> anchors;
  if (family.uses_anchor()) {
    if (spec.anchors.empty()) {
      for (std::size_t i = 0; i < dom.size(); ++i) anchors.emplace_back(i);
    } else {
      for (auto i : spec.anchors) anchors.emplace_back(i);
    }
  } else {
    anchors.emplace_back(std::nullopt);
  }
  std::vector<double> curvatures{0.0};
  if (family.uses_curvature()) {
    if (!spec.curvatures.empty()) {
      curvatures = spec.curvatures;
    } else if (family.uses_anchor()) {
      curvatures = {1.0};
    }
  }
  std::vector<Point> slopes{Point{}};
  if (family.uses_slope()) {
    slopes = spec.slopes.empty() ? std::vector<Point>{Point(dom.dim(), 0.0)} : spec.slopes;
  }
  std::vector<ElemParams> params;
  params.reserve(anchors.size() * curvatures.size() * slopes.size());
  for (const auto& anchor : anchors) {
    for (double a : curvatures) {
      for (const auto& ell : slopes) params.push_back(ElemParams{a, ell, anchor, 0.0});
    }
  }
  return DualGrid(family, std::move(params));
}

DualGrid default_dual_grid(const ElemFamily& family, const GridFn& f,
                           const AutoGridOptions& options) {
  const FiniteMetricSpace& dom = family.domain();
  if (f.size() != dom.size()) throw Error(Errc::kDimensionMismatch, "f size differs from domain");
  double quotient = 0.0;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (!f[i].is_finite()) continue;
    for (std::size_t j = i + 1; j < dom.size(); ++j) {
      if (!f[j].is_finite()) continue;
      quotient = std::max(quotient, std::abs(f[i].raw() - f[j].raw()) / dom.dist(i, j));
    }
  }
  const double bound = quotient > 0.0 ? 2.0 * quotient : 1.0;
  GridSpec spec;
  if (family.uses_slope()) spec.slopes = slope_lattice(dom.dim(), bound, options.slope_steps);
  if (family.uses_anchor()) {
    for (std::size_t k = 0; k < options.curvature_levels; ++k) {
      spec.curvatures.push_back(std::ldexp(bound, static_cast<int>(k)));
    }
  } else if (family.uses_curvature()) {
    spec.curvatures.push_back(0.0);
    for (std::size_t k = 0; k < options.curvature_levels; ++k) {
      spec.curvatures.push_back(std::ldexp(1.0, static_cast<int>(k)));
    }
  }
  return make_dual_grid(family, spec);
}

kernels::ElemTable tabulate(const DualGrid& dual, Exec exec) {
  const ElemFamily& family = dual.family();
  kernels::ElemTable table;
  table.rows = dual.size();
  table.cols = family.domain().size();
  table.values.resize(table.rows * table.cols);
  const auto rows = static_cast<std::int64_t>(table.rows);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::int64_t j = 0; j < rows; ++j) {
    const ElemParams& p = dual[static_cast<std::size_t>(j)];
    for (std::size_t x = 0; x < table.cols; ++x) {
      table.values[static_cast<std::size_t>(j) * table.cols + x] = eval_unchecked(family, p, x);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Conjugation

std::vector<ExtReal> conjugate_transform(const GridFn& f, const DualGrid& dual, Exec exec) {
  if (f.size() != dual.family().domain().size()) {
    throw Error(Errc::kDimensionMismatch, "f size differs from the family domain");
  }
  if (f.takes_minus_inf()) {
    throw Error(Errc::kImproperInput, "f takes -inf; its conjugate is +inf everywhere");
  }
  const auto table = tabulate(dual, exec);
  const auto raw = f.raw();
  const auto conj = kernels::row_sup_minus(table, raw, exec);
  std::vector<ExtReal> out;
  out.reserve(conj.size());
  for (double v : conj) out.push_back(ExtReal::from_double(v));
  return out;
}

GridFn biconjugate(const GridFn& f, const DualGrid& dual, Exec exec) {
  if (f.size() != dual.family().domain().size()) {
    throw Error(Errc::kDimensionMismatch, "f size differs from the family domain");
  }
  if (f.takes_minus_inf()) throw Error(Errc::kImproperInput, "f takes -inf");
  const auto table = tabulate(dual, exec);
  const auto raw = f.raw();
  const auto conj = kernels::row_sup_minus(table, raw, exec);
  return GridFn::from_reals(kernels::col_sup_minus(table, conj, exec));
}

bool is_support(const ElemFamily& family, const ElemParams& params, const GridFn& f, double tol) {
  if (f.size() != family.domain().size()) {
    throw Error(Errc::kDimensionMismatch, "f size differs from the family domain");
  }
  validate_params(family, params);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x].is_plus_inf()) continue;
    if (f[x].is_minus_inf()) return false;
    if (eval_unchecked(family, params, x) - f[x].raw() > tol) return false;
  }
  return true;
}

double convexity_defect(const GridFn& f, std::size_t x0, const DualGrid& dual) {
  if (x0 >= f.size()) throw Error(Errc::kInvalidArgument, "x0 out of range");
  if (f[x0].is_plus_inf()) throw Error(Errc::kInfiniteAtPoint, "f(x0) = +inf");
  if (f.takes_minus_inf()) throw Error(Errc::kImproperInput, "f takes -inf");
  const GridFn fss = biconjugate(f, dual);
  return f[x0].raw() - fss[x0].raw();
}

// ---------------------------------------------------------------------------
// Peaking and Urysohn witnesses

bool satisfies_peaking(const ElemFamily& family, std::size_t y0, double eps, double delta,
                       double K, const ElemParams& g, const ElemParams& gbar) {
  const FiniteMetricSpace& dom = family.domain();
  for (std::size_t y = 0; y < dom.size(); ++y) {
    const double gb = eval_elementary(family, gbar, y);
    if (gb > eps) return false;
    if (dom.dist(y, y0) >= delta && gb > eval_elementary(family, g, y) - K) return false;
  }
  return true;
}

bool satisfies_urysohn(const ElemFamily& family, std::size_t y0, double eps, double delta,
                       const ElemParams& g) {
  const FiniteMetricSpace& dom = family.domain();
  if (!(eval_elementary(family, g, y0) > 1.0 - eps)) return false;
  for (std::size_t y = 0; y < dom.size(); ++y) {
    const double v = eval_elementary(family, g, y);
    if (dom.dist(y, y0) < delta ? v > 1.0 : v > 0.0) return false;
  }
  return true;
}

ElemParams peaking_witness(const ElemFamily& family, std::size_t y0, double eps, double delta,
                           double K, const ElemParams& g) {
  if (!family.is_radial()) {
    throw Error(Errc::kBadParams, "peaking witnesses exist only for metric-type families");
  }
  const FiniteMetricSpace& dom = family.domain();
  check_witness_inputs(y0, dom, eps, delta);
  if (!(K >= 0.0) || !std::isfinite(K)) throw Error(Errc::kInvalidArgument, "K must be >= 0");
  validate_params(family, g);

  double a = -kInf;
  for (std::size_t y = 0; y < dom.size(); ++y) {
    if (dom.dist(y, y0) < delta) continue;
    a = std::max(a, (eps + K - eval_unchecked(family, g, y)) / radial(family, y0, y));
  }
  if (!(a > 0.0)) a = 1.0;

  ElemParams gbar{a, {}, y0, eps};
  for (int bump = 0; bump < kWitnessBumps; ++bump) {
    if (satisfies_peaking(family, y0, eps, delta, K, g, gbar)) return gbar;
    gbar.a = std::nextafter(gbar.a, kInf) * (1.0 + 0x1p-44);
  }
  throw Error(Errc::kNoWitness, "peaking verification failed for " + to_string(gbar));
}

ElemParams urysohn_witness(const ElemFamily& family, std::size_t y0, double eps, double delta) {
  if (!family.is_radial() && family.kind() != FamilyKind::kGauge) {
    throw Error(Errc::kBadParams, "Urysohn witnesses exist only for metric-type and gauge families");
  }
  const FiniteMetricSpace& dom = family.domain();
  check_witness_inputs(y0, dom, eps, delta);
  if (!(eps > 0.0)) throw Error(Errc::kInvalidArgument, "eps must be > 0");

  double a = 0.0;
  if (family.kind() == FamilyKind::kMetric) {
    a = 1.0 / delta;
  } else {
    for (std::size_t y = 0; y < dom.size(); ++y) {
      if (dom.dist(y, y0) >= delta) a = std::max(a, 1.0 / radial(family, y0, y));
    }
  }
  if (!(a > 0.0) || !std::isfinite(a)) a = 1.0;

  ElemParams g{a, {}, y0, 1.0};
  if (family.kind() == FamilyKind::kGauge) g.ell.assign(dom.dim(), 0.0);
  for (int bump = 0; bump < kWitnessBumps; ++bump) {
    if (satisfies_urysohn(family, y0, eps, delta, g)) return g;
    g.a = std::nextafter(g.a, kInf) * (1.0 + 0x1p-44);
  }
  throw Error(Errc::kNoWitness, "Urysohn verification failed for " + to_string(g));
}

}  // namespace absconv
