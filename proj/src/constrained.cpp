#include "absconv/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "absconv/error.hpp"

namespace absconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ConstraintMap ConstraintMap::from_feasible_sets(std::size_t nx,
                                                std::vector<std::vector<std::size_t>> feasible) {
  ConstraintMap m;
  m.G_.assign(nx, {});
  for (std::size_t y = 0; y < feasible.size(); ++y) {
    auto& set = feasible[y];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (std::size_t x : set) {
      if (x >= nx) throw Error(Errc::kInvalidArgument, "feasible index out of range");
      m.G_[x].push_back(y);
    }
  }
  m.A_ = std::move(feasible);
  return m;
}

bool ConstraintMap::contains(std::size_t y, std::size_t x) const {
  const auto& set = A_.at(y);
  return std::binary_search(set.begin(), set.end(), x);
}

void ConstrainedInstance::validate() const {
  if (!Y) throw Error(Errc::kEmptyDomain, "no parameter space");
  if (map.ny() != Y->size()) throw Error(Errc::kDimensionMismatch, "A must have one set per y");
  if (f.size() != map.nx()) throw Error(Errc::kDimensionMismatch, "f must have one value per x");
  if (y0 >= Y->size()) throw Error(Errc::kInvalidArgument, "y0 out of range");
  if (!f.proper()) throw Error(Errc::kImproperObjective, "objective must be proper");
  if (!allow_empty_feasible) {
    for (std::size_t y = 0; y < map.ny(); ++y) {
      if (map.A(y).empty()) {
        throw Error(Errc::kImproperProblem, "A(y) empty at y = " + std::to_string(y));
      }
    }
  }
}

PerturbationProblem build_constrained_perturbation(const ConstrainedInstance& inst) {
  inst.validate();
  const std::size_t nx = inst.map.nx();
  const std::size_t ny = inst.Y->size();
  std::vector<ExtReal> p(nx * ny, ExtReal::plus_inf());
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x : inst.map.A(y)) p[x * ny + y] = inst.f[x];
  }
  return PerturbationProblem(nx, inst.Y, std::move(p), inst.y0, inst.allow_empty_feasible);
}

GridFn metric_lagrangian(const ConstrainedInstance& inst, std::size_t anchor, double a) {
  inst.validate();
  if (!(a > 0.0)) throw Error(Errc::kBadParams, "a must be > 0");
  if (anchor >= inst.Y->size()) throw Error(Errc::kInvalidArgument, "anchor out of range");
  const FiniteMetricSpace& Y = *inst.Y;
  std::vector<ExtReal> out;
  out.reserve(inst.map.nx());
  for (std::size_t x = 0; x < inst.map.nx(); ++x) {
    const auto& G = inst.map.G(x);
    if (G.empty() || inst.f[x].is_plus_inf()) {
      out.push_back(ExtReal::plus_inf());
      continue;
    }
    double proj = kInf;
    for (std::size_t y : G) proj = std::min(proj, Y.dist(y, anchor));
    out.push_back(ExtReal::finite(-a * Y.dist(inst.y0, anchor) + inst.f[x].raw() + a * proj));
  }
  return GridFn(std::move(out));
}

double distance_to_feasible(const ConstrainedInstance& inst, std::size_t x) {
  double d = kInf;
  for (std::size_t y : inst.map.G(x)) d = std::min(d, inst.Y->dist(y, inst.y0));
  return d;
}

ExtReal metric_primal_sup(const ConstrainedInstance& inst, std::size_t x) {
  inst.validate();
  if (x >= inst.map.nx()) throw Error(Errc::kInvalidArgument, "x out of range");
  return inst.map.contains(inst.y0, x) ? inst.f[x] : ExtReal::plus_inf();
}

ExtReal metric_grid_sup(const ConstrainedInstance& inst, std::size_t x, double a) {
  ExtReal best = ExtReal::minus_inf();
  for (std::size_t anchor = 0; anchor < inst.Y->size(); ++anchor) {
    best = std::max(best, metric_lagrangian(inst, anchor, a)[x]);
  }
  return best;
}

MetricGapReport verify_zero_gap_metric(const ConstrainedInstance& inst, const std::vector<double>& a_ladder,
                                       double tol) {
  inst.validate();
  if (a_ladder.empty()) throw Error(Errc::kInvalidArgument, "empty a-ladder");
  const auto& feasible = inst.map.A(inst.y0);
  if (feasible.empty()) throw Error(Errc::kImproperProblem, "A(y0) is empty");
  double primal = kInf;
  for (std::size_t x : feasible) primal = std::min(primal, inst.f[x].raw());
  if (!std::isfinite(primal)) throw Error(Errc::kImproperObjective, "f is +inf on all of A(y0)");

  MetricGapReport rep;
  rep.tol = tol;
  rep.ladder = a_ladder;
  std::sort(rep.ladder.begin(), rep.ladder.end());
  rep.ladder.erase(std::unique(rep.ladder.begin(), rep.ladder.end()), rep.ladder.end());

  for (std::size_t x = 0; x < inst.map.nx(); ++x) {
    if (inst.map.contains(inst.y0, x) || !inst.f[x].is_finite()) continue;
    const double d = distance_to_feasible(inst, x);
    if (std::isfinite(d) && primal > inst.f[x].raw()) {
      rep.proof_bound = std::max(rep.proof_bound, (primal - inst.f[x].raw()) / d);
    }
  }

  const auto prob = build_constrained_perturbation(inst);
  const auto family = ElemFamily::metric(inst.Y);
  GridSpec spec;
  spec.curvatures = rep.ladder;
  // Rung-major order so every prefix of the grid is a prefix of the ladder.
  std::vector<ElemParams> params;
  for (double a : rep.ladder) {
    for (std::size_t anchor = 0; anchor < inst.Y->size(); ++anchor) {
      params.push_back(ElemParams{a, {}, anchor, 0.0});
    }
  }
  const DualGrid grid(family, std::move(params));
  rep.duality = duality_report(prob, grid);

  const LagTable lag = build_lagrangian(prob, grid);
  const std::size_t per_rung = inst.Y->size();
  ExtReal running = ExtReal::minus_inf();
  for (std::size_t k = 0; k < rep.ladder.size(); ++k) {
    for (std::size_t j = k * per_rung; j < (k + 1) * per_rung; ++j) {
      ExtReal inf = ExtReal::plus_inf();
      for (std::size_t x = 0; x < lag.nx; ++x) inf = std::min(inf, lag(x, j));
      running = std::max(running, inf);
    }
    rep.dual_by_rung.push_back(running);
    if (!rep.min_rung && running.is_finite() && primal - running.raw() <= tol) rep.min_rung = k;
  }
  if (rep.ladder.back() >= rep.proof_bound && !rep.min_rung) {
    throw std::logic_error("ladder covers the proof bound but the gap stays above tol");
  }
  return rep;
}

GridFn quad_lagrangian(const ConstrainedInstance& inst, const Point& u, double a) {
  inst.validate();
  const FiniteMetricSpace& Y = *inst.Y;
  if (!Y.has_coordinates()) throw Error(Errc::kBadParams, "quadratic multipliers need coordinates");
  if (u.size() != Y.dim()) throw Error(Errc::kDimensionMismatch, "u dimension differs from Y");
  if (!(a >= 0.0)) throw Error(Errc::kBadParams, "a must be >= 0");
  const auto q = [&](std::size_t y) {
    const Point& p = Y.point(y);
    return -a * squared_norm(p) + dot(u, p) + 0.0;
  };
  const double at_y0 = q(inst.y0);
  std::vector<ExtReal> out;
  out.reserve(inst.map.nx());
  for (std::size_t x = 0; x < inst.map.nx(); ++x) {
    ExtReal sup = ExtReal::minus_inf();
    for (std::size_t y : inst.map.G(x)) sup = std::max(sup, ext_sub_real(q(y), inst.f[x]));
    out.push_back(ext_sub_real(at_y0, sup));
  }
  return GridFn(std::move(out));
}

ElemParams phi_lsc_set_separation(const SpacePtr& Y, const std::vector<std::size_t>& C, std::size_t p_out,
                                  const std::vector<double>& a_ladder) {
  if (!Y || !Y->has_coordinates()) throw Error(Errc::kBadParams, "separation needs coordinates");
  if (C.empty()) throw Error(Errc::kInvalidArgument, "C must be nonempty");
  if (p_out >= Y->size()) throw Error(Errc::kInvalidArgument, "p out of range");
  for (std::size_t y : C) {
    if (y >= Y->size()) throw Error(Errc::kInvalidArgument, "C index out of range");
    if (y == p_out) throw Error(Errc::kInvalidArgument, "p lies in C");
  }
  const auto family = ElemFamily::quad_minus(Y);
  const Point& p = Y->point(p_out);
  const std::size_t dim = Y->dim();

  double best_margin = -kInf;
  // margin = min(phi(p), -max_C phi); positive iff phi separates.
  const auto margin = [&](const ElemParams& phi) {
    double on_c = -kInf;
    for (std::size_t y : C) on_c = std::max(on_c, eval_elementary(family, phi, y));
    return std::min(eval_elementary(family, phi, p_out), -on_c);
  };
  const auto accept = [&](const ElemParams& phi) {
    double on_c = -kInf;
    for (std::size_t y : C) on_c = std::max(on_c, eval_elementary(family, phi, y));
    const bool ok = eval_elementary(family, phi, p_out) > 0.0 && on_c <= 0.0;
    best_margin = std::max(best_margin, margin(phi));
    return ok;
  };

  Point centroid(dim, 0.0);
  for (std::size_t y : C) {
    for (std::size_t k = 0; k < dim; ++k) centroid[k] += Y->point(y)[k];
  }
  for (double& v : centroid) v /= static_cast<double>(C.size());
  std::size_t nearest = C.front();
  for (std::size_t y : C) {
    if (Y->dist(y, p_out) < Y->dist(nearest, p_out)) nearest = y;
  }
  for (const Point& base : {centroid, Y->point(nearest)}) {
    ElemParams phi{0.0, Point(dim), std::nullopt, 0.0};
    for (std::size_t k = 0; k < dim; ++k) phi.ell[k] = p[k] - base[k];
    double on_c = -kInf;
    for (std::size_t y : C) on_c = std::max(on_c, dot(phi.ell, Y->point(y)));
    phi.c = -on_c;
    if (accept(phi)) return phi;
  }

  // -a |y - p|^2 + a dmin^2 / 2, expanded into (a, ell, c) form.
  double dmin2 = kInf;
  for (std::size_t y : C) dmin2 = std::min(dmin2, Y->dist(y, p_out) * Y->dist(y, p_out));
  for (double a : a_ladder) {
    if (!(a > 0.0)) continue;
    ElemParams phi{a, Point(dim), std::nullopt, 0.0};
    for (std::size_t k = 0; k < dim; ++k) phi.ell[k] = 2.0 * a * p[k];
    phi.c = -a * squared_norm(p) + a * dmin2 / 2.0;
    if (accept(phi)) return phi;
  }
  throw Error(Errc::kNotSeparable, "no member separates p from C; best margin " +
                                       to_string(ExtReal::from_double(best_margin)));
}

}  // namespace absconv
