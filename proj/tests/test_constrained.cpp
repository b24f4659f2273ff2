#include <memory>

#include "doctest.h"
#include "test_util.hpp"

#include "absconv/constrained.hpp"
#include "corpus.hpp"

using namespace absconv;

namespace {

ExtReal fin(double v) { return ExtReal::finite(v); }

// X = {x1, x2}, Y = {y1, y2} at distance 1, y0 = y1, A(y1) = {x1},
// A(y2) = {x1, x2}, f = (2, 0).
ConstrainedInstance two_by_two() {
  ConstrainedInstance inst;
  inst.Y = std::make_shared<const FiniteMetricSpace>(build_metric_space({{0.0}, {1.0}}, Euclidean{}));
  inst.f = GridFn::from_reals(std::vector<double>{2, 0});
  inst.map = ConstraintMap::from_feasible_sets(2, {{0}, {0, 1}});
  inst.y0 = 0;
  return inst;
}

ConstrainedInstance line_instance(std::vector<std::vector<std::size_t>> feasible, std::vector<double> f,
                                  std::size_t y0) {
  ConstrainedInstance inst;
  inst.Y = std::make_shared<const FiniteMetricSpace>(uniform_line(-1, 1, feasible.size()));
  inst.f = GridFn::from_reals(f);
  inst.map = ConstraintMap::from_feasible_sets(f.size(), std::move(feasible));
  inst.y0 = y0;
  return inst;
}

}  // namespace

TEST_CASE("constraint map inverse") {
  const auto m = ConstraintMap::from_feasible_sets(3, {{0, 2}, {2}, {}});
  CHECK(m.G(0) == std::vector<std::size_t>{0});
  CHECK(m.G(1).empty());
  CHECK(m.G(2) == std::vector<std::size_t>{0, 1});
  CHECK(m.contains(0, 2));
  CHECK_FALSE(m.contains(1, 0));
  CHECK_ERRC(ConstraintMap::from_feasible_sets(2, {{5}}), Errc::kInvalidArgument);
}

TEST_CASE("indicator perturbation examples") {
  const auto p = build_constrained_perturbation(two_by_two());
  CHECK(p(0, 0) == fin(2));
  CHECK(p(0, 1) == fin(2));
  CHECK(p(1, 0) == ExtReal::plus_inf());
  CHECK(p(1, 1) == fin(0));
  const auto all = line_instance({{0, 1}, {0, 1}, {0, 1}}, {0, 0}, 1);
  const auto pall = build_constrained_perturbation(all);
  for (ExtReal v : pall.values()) CHECK(v == fin(0));

  auto bad = two_by_two();
  bad.f = GridFn({ExtReal::minus_inf(), fin(0)});
  CHECK_ERRC(bad.validate(), Errc::kImproperObjective);
  auto empty = two_by_two();
  empty.map = ConstraintMap::from_feasible_sets(2, {{0}, {}});
  CHECK_ERRC(empty.validate(), Errc::kImproperProblem);
  empty.allow_empty_feasible = true;
  CHECK_NOTHROW(build_constrained_perturbation(empty));
}

TEST_CASE("metric Lagrangian examples") {
  const auto inst = two_by_two();
  CHECK(metric_lagrangian(inst, 0, 2.0) == GridFn::from_reals(std::vector<double>{2, 2}));
  CHECK(metric_lagrangian(inst, 0, 1.0) == GridFn::from_reals(std::vector<double>{2, 1}));
  for (double a : {0.5, 1.0, 7.0}) CHECK(metric_lagrangian(inst, 0, a)[0] == fin(2));
  CHECK_ERRC(metric_lagrangian(inst, 0, 0.0), Errc::kBadParams);
}

TEST_CASE("metric primal sup") {
  const auto inst = two_by_two();
  CHECK(metric_primal_sup(inst, 0) == fin(2));
  CHECK(metric_primal_sup(inst, 1) == ExtReal::plus_inf());
  CHECK(distance_to_feasible(inst, 1) == 1.0);
  CHECK(distance_to_feasible(inst, 0) == 0.0);
  // Grid sup grows like a * dist for the infeasible point.
  CHECK(metric_grid_sup(inst, 1, 4.0) == fin(4.0));
  CHECK(metric_grid_sup(inst, 1, 8.0) == fin(8.0));
  CHECK(metric_grid_sup(inst, 0, 8.0) == fin(2.0));
}

TEST_CASE("metric zero gap on the 2x2 instance") {
  const auto rep = verify_zero_gap_metric(two_by_two(), {1, 2, 4});
  CHECK(rep.duality.primal == fin(2));
  CHECK(rep.duality.dual == fin(2));
  CHECK(rep.proof_bound == 2.0);
  REQUIRE(rep.min_rung);
  CHECK(rep.ladder[*rep.min_rung] == 2.0);
  CHECK(rep.dual_by_rung[0] == fin(1));

  const auto free = verify_zero_gap_metric(line_instance({{0, 1}, {0, 1}, {0, 1}}, {3, 1}, 1), {1, 2, 4});
  REQUIRE(free.min_rung);
  CHECK(*free.min_rung == 0);

  auto neg = two_by_two();
  neg.f = GridFn({ExtReal::minus_inf(), fin(0)});
  CHECK_ERRC(verify_zero_gap_metric(neg, {1, 2}), Errc::kImproperObjective);
}

TEST_CASE("quadratic Lagrangian examples") {
  auto single = line_instance({{0}, {}, {}}, {5}, 0);
  single.allow_empty_feasible = true;
  CHECK(quad_lagrangian(single, {3.0}, 2.0) == GridFn::from_reals(std::vector<double>{5}));
  auto sym = line_instance({{0}, {}, {0}}, {0}, 1);
  sym.allow_empty_feasible = true;
  CHECK(quad_lagrangian(sym, {0.0}, 1.0)[0] == fin(1.0));
  // a = 0: the affine Lagrangian.
  const auto prob = build_constrained_perturbation(
      [] {
        auto i = line_instance({{0}, {0}, {0}}, {0}, 1);
        i.map = ConstraintMap::from_feasible_sets(1, {{0}, {}, {0}});
        i.allow_empty_feasible = true;
        return i;
      }());
  GridSpec spec;
  spec.slopes = {{0.5}};
  const LagTable lag = build_lagrangian(prob, make_dual_grid(ElemFamily::affine(prob.Y_ptr()), spec));
  auto inst = line_instance({{0}, {0}, {0}}, {0}, 1);
  inst.map = ConstraintMap::from_feasible_sets(1, {{0}, {}, {0}});
  inst.allow_empty_feasible = true;
  CHECK(quad_lagrangian(inst, {0.5}, 0.0)[0] == lag(0, 0));
}

TEST_CASE("set separation examples") {
  const auto Y = std::make_shared<const FiniteMetricSpace>(uniform_line(-1, 2, 4));  // -1, 0, 1, 2
  const ElemParams aff = phi_lsc_set_separation(Y, {0, 1, 2}, 3);
  CHECK(aff.a == 0.0);
  const auto qm = ElemFamily::quad_minus(Y);
  CHECK(eval_elementary(qm, aff, 3) > 0.0);
  for (std::size_t y : {0, 1, 2}) CHECK(eval_elementary(qm, aff, y) <= 0.0);

  const auto Z = std::make_shared<const FiniteMetricSpace>(uniform_line(-1, 1, 3));
  const ElemParams q = phi_lsc_set_separation(Z, {0, 2}, 1);
  CHECK(q == ElemParams{1.0, {0.0}, std::nullopt, 0.5});
  CHECK(eval_elementary(ElemFamily::quad_minus(Z), q, 1) == 0.5);
  CHECK(eval_elementary(ElemFamily::quad_minus(Z), q, 0) == -0.5);

  CHECK(phi_lsc_set_separation(Y, {3}, 0).a == 0.0);
  CHECK_ERRC(phi_lsc_set_separation(Z, {0, 2}, 1, {}), Errc::kNotSeparable);
  CHECK_ERRC(phi_lsc_set_separation(Z, {1}, 1), Errc::kInvalidArgument);
  CHECK_ERRC(phi_lsc_set_separation(Z, {}, 1), Errc::kInvalidArgument);
}

TEST_CASE("closed forms match the generic Lagrangian") {
  corpus::Rng rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = corpus::random_constrained(rng, corpus::uniform_size(rng, 1, 8), corpus::uniform_size(rng, 1, 8));
    const auto prob = build_constrained_perturbation(inst);
    GridSpec spec;
    spec.curvatures = {0.5, 1, 3};
    const DualGrid mgrid = make_dual_grid(ElemFamily::metric(inst.Y), spec);
    const LagTable lag = build_lagrangian(prob, mgrid);
    for (std::size_t j = 0; j < mgrid.size(); ++j) {
      const GridFn closed = metric_lagrangian(inst, *mgrid[j].anchor, mgrid[j].a);
      for (std::size_t x = 0; x < prob.nx(); ++x) CHECK(closed[x] == lag(x, j));
    }
    GridSpec qspec;
    qspec.curvatures = {0, 0.25, 2};
    std::set<Point> slopes;
    while (slopes.size() < 3) {
      Point u(inst.Y->dim());
      for (auto& v : u) v = corpus::quarter(rng, -8, 8);
      slopes.insert(u);
    }
    qspec.slopes.assign(slopes.begin(), slopes.end());
    const DualGrid qgrid = make_dual_grid(ElemFamily::quad_minus(inst.Y), qspec);
    const LagTable qlag = build_lagrangian(prob, qgrid);
    for (std::size_t j = 0; j < qgrid.size(); ++j) {
      const GridFn closed = quad_lagrangian(inst, qgrid[j].ell, qgrid[j].a);
      for (std::size_t x = 0; x < prob.nx(); ++x) CHECK(closed[x] == qlag(x, j));
    }
  }
}

TEST_CASE("monotone reconstruction over the ladder") {
  corpus::Rng rng(43);
  const std::vector<double> ladder{1, 2, 4, 8, 16, 32};
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = corpus::random_constrained(rng, corpus::uniform_size(rng, 1, 8), corpus::uniform_size(rng, 2, 8));
    for (std::size_t x = 0; x < inst.map.nx(); ++x) {
      ExtReal prev = ExtReal::minus_inf();
      for (double a : ladder) {
        const ExtReal s = metric_grid_sup(inst, x, a);
        CHECK(prev <= s);
        prev = s;
        if (inst.map.contains(inst.y0, x)) CHECK(s == inst.f[x]);
      }
      if (!inst.map.contains(inst.y0, x) && !inst.map.G(x).empty()) {
        const double slope = (metric_grid_sup(inst, x, 32).value() - metric_grid_sup(inst, x, 16).value()) / 16.0;
        CHECK(slope == doctest::Approx(distance_to_feasible(inst, x)).epsilon(1e-9));
      }
    }
  }
}
