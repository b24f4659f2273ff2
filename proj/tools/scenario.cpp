#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "absconv/constrained.hpp"
#include "absconv/error.hpp"
#include "absconv/families.hpp"
#include "absconv/lagrangian.hpp"
#include "absconv/transport.hpp"

namespace absconv::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultTol = 1e-9;

// Scenario shape errors; reported with exit code 2 like library precondition
// failures.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void reject(const std::string& what) { throw ScenarioError(what); }

const json& need(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) reject(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double as_number(const json& v, const char* what) {
  if (!v.is_number()) reject(std::string(what) + " must be a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const char* what) {
  if (!v.is_number_unsigned()) reject(std::string(what) + " must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<double> as_numbers(const json& v, const char* what) {
  if (!v.is_array()) reject(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, what));
  return out;
}

Matrix as_matrix(const json& v, const char* what) {
  if (!v.is_array()) reject(std::string(what) + " must be an array of rows");
  Matrix out;
  for (const auto& row : v) out.push_back(as_numbers(row, what));
  return out;
}

ExtReal as_ext(const json& v) {
  if (v.is_number()) return ExtReal::finite(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "+inf") return ExtReal::plus_inf();
    if (s == "-inf") return ExtReal::minus_inf();
  }
  if (v.is_object() && v.size() == 1 && v.contains("finite") && v.at("finite").is_number()) {
    return ExtReal::finite(v.at("finite").get<double>());
  }
  reject("extended real must be a number, {\"finite\": v}, \"+inf\" or \"-inf\"");
}

GridFn as_grid_fn(const json& v, const char* what) {
  if (!v.is_array()) reject(std::string(what) + " must be an array");
  std::vector<ExtReal> out;
  for (const auto& e : v) out.push_back(as_ext(e));
  return GridFn(std::move(out));
}

json ext_json(ExtReal x) { return ext_to_json(x.raw()); }

json ext_array(const std::vector<ExtReal>& xs) {
  json out = json::array();
  for (ExtReal x : xs) out.push_back(ext_json(x));
  return out;
}

json params_json(const ElemParams& p) {
  json out = {{"a", p.a}, {"ell", p.ell}, {"c", p.c}};
  out["anchor"] = p.anchor ? json(*p.anchor) : json(nullptr);
  return out;
}

ElemParams as_params(const json& v) {
  if (!v.is_object()) reject("elementary parameters must be an object");
  ElemParams p;
  if (v.contains("a")) p.a = as_number(v.at("a"), "a");
  if (v.contains("c")) p.c = as_number(v.at("c"), "c");
  if (v.contains("ell")) {
    const auto& e = v.at("ell");
    p.ell = e.is_number() ? std::vector<double>{e.get<double>()} : as_numbers(e, "ell");
  }
  if (v.contains("anchor") && !v.at("anchor").is_null()) p.anchor = as_index(v.at("anchor"), "anchor");
  return p;
}

std::vector<Point> as_points(const json& v) {
  if (!v.is_array()) reject("points must be an array");
  std::vector<Point> pts;
  for (const auto& e : v) {
    if (e.is_number()) {
      pts.push_back({e.get<double>()});
    } else {
      pts.push_back(as_numbers(e, "point"));
    }
  }
  return pts;
}

SpacePtr parse_domain(const json& d, Validate validate) {
  if (!d.is_object()) reject("domain must be an object");
  if (d.contains("uniform")) {
    const auto& u = d.at("uniform");
    const double lo = as_number(need(u, "lo"), "lo");
    const double hi = as_number(need(u, "hi"), "hi");
    const std::size_t n = as_index(need(u, "n"), "n");
    return std::make_shared<const FiniteMetricSpace>(uniform_line(lo, hi, n));
  }
  std::vector<Point> pts;
  if (d.contains("points")) pts = as_points(d.at("points"));
  if (d.contains("matrix")) {
    return std::make_shared<const FiniteMetricSpace>(
        build_metric_space(std::move(pts), CustomMetric{as_matrix(d.at("matrix"), "matrix")}, validate));
  }
  if (pts.empty()) reject("domain needs 'points', 'matrix' or 'uniform'");
  return std::make_shared<const FiniteMetricSpace>(build_metric_space(std::move(pts), Euclidean{}, validate));
}

NormKind parse_norm(const std::string& s) {
  if (s == "l1") return NormKind::kL1;
  if (s == "l2") return NormKind::kL2;
  if (s == "linf") return NormKind::kLinf;
  reject("unknown norm '" + s + "'");
}

ElemFamily parse_family(const json& f, const SpacePtr& domain) {
  const auto kind = need(f, "kind").get<std::string>();
  if (kind == "affine") return ElemFamily::affine(domain);
  if (kind == "quad_minus") return ElemFamily::quad_minus(domain);
  if (kind == "quad_plus") return ElemFamily::quad_plus(domain);
  if (kind == "metric") return ElemFamily::metric(domain);
  if (kind == "sigma_nu") {
    std::optional<std::size_t> origin;
    if (f.contains("origin")) origin = as_index(f.at("origin"), "origin");
    return ElemFamily::sigma_nu(domain, as_numbers(need(f, "sigma"), "sigma"),
                                as_numbers(need(f, "nu"), "nu"), origin);
  }
  if (kind == "generalized_metric") {
    const auto& g = need(f, "profile");
    return ElemFamily::generalized_metric(
        domain, RadialProfile(as_numbers(need(g, "t"), "t"), as_numbers(need(g, "g"), "g")));
  }
  if (kind == "gauge") {
    return ElemFamily::gauge(domain, parse_norm(f.value("norm", std::string("l2"))));
  }
  reject("unknown family kind '" + kind + "'");
}

// The grid either comes from explicit axes or is derived from `data`.
DualGrid parse_grid(const json& f, const ElemFamily& family, const GridFn* data) {
  const json grid = f.value("grid", json("auto"));
  if (grid.is_string()) {
    if (grid.get<std::string>() != "auto") reject("grid must be \"auto\" or an object");
    if (!data) reject("an automatic grid needs data to size it");
    return default_dual_grid(family, *data);
  }
  if (!grid.is_object()) reject("grid must be \"auto\" or an object");
  GridSpec spec;
  if (grid.contains("curvatures")) spec.curvatures = as_numbers(grid.at("curvatures"), "curvatures");
  if (grid.contains("slopes")) spec.slopes = as_points(grid.at("slopes"));
  if (grid.contains("slope_lattice")) {
    const auto& l = grid.at("slope_lattice");
    const std::size_t dim = family.domain().has_coordinates() ? family.domain().dim() : 0;
    auto lat = slope_lattice(dim, as_number(need(l, "bound"), "bound"), as_index(need(l, "steps"), "steps"));
    spec.slopes.insert(spec.slopes.end(), lat.begin(), lat.end());
  }
  if (grid.contains("anchors")) {
    for (const auto& a : grid.at("anchors")) spec.anchors.push_back(as_index(a, "anchor"));
  }
  return make_dual_grid(family, spec);
}

json grid_json(const DualGrid& grid) {
  json members = json::array();
  for (const auto& p : grid.params()) members.push_back(params_json(p));
  return {{"description", grid.describe()}, {"size", grid.size()}, {"members", members}};
}

std::uint64_t need_seed(const json& sc, const RunOptions& opt) {
  if (opt.seed) return *opt.seed;
  if (sc.contains("seed")) return as_index(sc.at("seed"), "seed");
  reject("randomized scenario needs a seed");
}

// Dyadic draws keep every downstream identity exactly representable.
double dyadic(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng) / 4.0;
}

//
// conjugate
//
json run_conjugate(const json& sc, const RunOptions& opt) {
  const SpacePtr X = parse_domain(need(sc, "domain"), opt.validate);
  const GridFn f = as_grid_fn(need(sc, "f"), "f");
  if (f.size() != X->size()) reject("f must have one value per domain point");
  const ElemFamily family = parse_family(need(sc, "family"), X);
  const DualGrid grid = parse_grid(sc.at("family"), family, &f);

  const auto fs = conjugate_transform(f, grid);
  const GridFn fss = biconjugate(f, grid);
  json defect = json::array();
  for (std::size_t x = 0; x < f.size(); ++x) {
    defect.push_back(f[x].is_finite() ? json(convexity_defect(f, x, grid)) : json(nullptr));
  }
  json out = {{"grid", grid_json(grid)},
              {"f_star", ext_array(fs)},
              {"biconjugate", ext_array(fss.values())},
              {"defect", defect},
              {"phi_convex", fss == f}};
  if (sc.contains("x0")) {
    const std::size_t x0 = as_index(sc.at("x0"), "x0");
    out["defect_at_x0"] = convexity_defect(f, x0, grid);
  }
  return out;
}

//
// gap / certify
//
struct GapInstance {
  SpacePtr Y;
  std::unique_ptr<PerturbationProblem> prob;
};

GapInstance parse_gap_instance(const json& sc, const RunOptions& opt) {
  GapInstance gi;
  gi.Y = parse_domain(need(sc, "domain"), opt.validate);
  const std::size_t y0 = as_index(need(sc, "y0"), "y0");
  std::size_t nx = 0;
  std::vector<ExtReal> p;
  if (sc.contains("p")) {
    const auto& rows = sc.at("p");
    if (!rows.is_array() || rows.empty()) reject("p must be a nonempty array of rows");
    nx = rows.size();
    for (const auto& r : rows) {
      const GridFn row = as_grid_fn(r, "p row");
      if (row.size() != gi.Y->size()) reject("every p row needs one value per y");
      p.insert(p.end(), row.values().begin(), row.values().end());
    }
  } else if (sc.contains("random")) {
    const auto& r = sc.at("random");
    nx = as_index(need(r, "nx"), "nx");
    if (nx == 0) reject("random.nx must be >= 1");
    const double inf_fraction = r.contains("inf_fraction") ? as_number(r.at("inf_fraction"), "inf_fraction") : 0.0;
    std::mt19937_64 rng(need_seed(sc, opt));
    std::bernoulli_distribution hole(std::clamp(inf_fraction, 0.0, 1.0));
    const std::size_t ny = gi.Y->size();
    p.resize(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double v = dyadic(rng, -16, 16);
        p[x * ny + y] = (hole(rng) && x != y % nx) ? ExtReal::plus_inf() : ExtReal::finite(v);
      }
    }
  } else {
    reject("gap scenario needs 'p', 'random' or 'refinement'");
  }
  gi.prob = std::make_unique<PerturbationProblem>(nx, gi.Y, std::move(p), y0);
  return gi;
}

json lsc_curve(const GridFn& V, const FiniteMetricSpace& Y, std::size_t y0) {
  json out = json::array();
  if (!V[y0].is_finite()) return out;
  std::vector<double> radii;
  for (std::size_t y = 0; y < Y.size(); ++y) {
    if (y != y0) radii.push_back(Y.dist(y0, y));
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  for (double r : radii) out.push_back({{"radius", r}, {"defect", lsc_defect(V, Y, y0, r)}});
  return out;
}

double refinement_profile(const std::string& name, double y, bool at_center) {
  if (name == "abs") return std::abs(y);
  if (name == "neg_abs") return -std::abs(y);
  if (name == "punctured") return at_center ? 0.0 : -1.0;
  reject("unknown refinement profile '" + name + "'");
}

json run_refinement(const json& sc, const RunOptions& opt, std::string& csv) {
  const auto& r = sc.at("refinement");
  const std::string profile = need(r, "profile").get<std::string>();
  const double lo = r.contains("lo") ? as_number(r.at("lo"), "lo") : -1.0;
  const double hi = r.contains("hi") ? as_number(r.at("hi"), "hi") : 1.0;
  const double tol = opt.tol.value_or(kDefaultTol);
  json rows = json::array();
  std::ostringstream table;
  table.precision(17);
  table << "n,spacing,gap,lsc_defect\n";
  for (const auto& nj : need(r, "sizes")) {
    const std::size_t n = as_index(nj, "size");
    if (n < 3 || n % 2 == 0) reject("refinement sizes must be odd and >= 3");
    const SpacePtr Y = std::make_shared<const FiniteMetricSpace>(uniform_line(lo, hi, n));
    const std::size_t y0 = n / 2;
    std::vector<ExtReal> p(n);
    for (std::size_t y = 0; y < n; ++y) {
      p[y] = ExtReal::finite(refinement_profile(profile, Y->point(y)[0], y == y0));
    }
    const PerturbationProblem prob(1, Y, std::move(p), y0);
    const GridFn V = prob.value_function();
    const ElemFamily family = parse_family(need(sc, "family"), Y);
    const DualGrid grid = parse_grid(sc.at("family"), family, &V);
    const DualityReport rep = duality_report(prob, grid);
    const double spacing = (hi - lo) / static_cast<double>(n - 1);
    const double defect = lsc_defect(V, *Y, y0, spacing);
    rows.push_back({{"n", n},
                    {"spacing", spacing},
                    {"grid_size", grid.size()},
                    {"gap", ext_json(rep.gap)},
                    {"zero_gap", rep.gap.is_finite() && rep.gap.raw() <= tol},
                    {"lsc_defect", defect}});
    table << n << ',' << spacing << ',' << to_string(rep.gap) << ',' << defect << '\n';
  }
  csv = table.str();
  return {{"profile", profile}, {"refinement", rows}};
}

json run_gap(const json& sc, const RunOptions& opt, std::string& csv) {
  if (sc.contains("refinement")) return run_refinement(sc, opt, csv);
  const GapInstance gi = parse_gap_instance(sc, opt);
  const auto& prob = *gi.prob;
  const GridFn V = prob.value_function();
  const ElemFamily family = parse_family(need(sc, "family"), gi.Y);
  const DualGrid grid = parse_grid(sc.at("family"), family, &V);
  const DualityReport rep = duality_report(prob, grid);
  const double tol = opt.tol.value_or(kDefaultTol);

  json curve = lsc_curve(V, *gi.Y, prob.y0());
  std::ostringstream table;
  table.precision(17);
  table << "radius,lsc_defect\n";
  for (const auto& row : curve) table << row["radius"].get<double>() << ',' << row["defect"].get<double>() << '\n';
  csv = table.str();

  return {{"grid", grid_json(grid)},
          {"primal", ext_json(rep.primal)},
          {"lagrangian_primal", ext_json(rep.lagrangian_primal)},
          {"dual", ext_json(rep.dual)},
          {"gap", ext_json(rep.gap)},
          {"zero_gap", rep.primal == rep.dual || (rep.gap.is_finite() && rep.gap.raw() <= tol)},
          {"V", ext_array(rep.V.values())},
          {"V_star", ext_array(rep.V_star)},
          {"V_bidual_at_y0", ext_json(rep.V_bidual_at_y0)},
          {"reconstruction_ok", rep.reconstruction_ok},
          {"convex_on_Y", rep.convex_on_Y},
          {"best_multiplier", params_json(grid[rep.best_multiplier])},
          {"lsc_curve", curve}};
}

json run_certify(const json& sc, const RunOptions& opt, bool& found) {
  const GapInstance gi = parse_gap_instance(sc, opt);
  const auto& prob = *gi.prob;
  const GridFn V = prob.value_function();
  const ElemFamily family = parse_family(need(sc, "family"), gi.Y);
  const DualGrid grid = parse_grid(sc.at("family"), family, &V);
  const double alpha = as_number(need(sc, "alpha"), "alpha");
  const auto cert = gap_certificate(prob, grid, alpha);
  const DualityReport rep = duality_report(prob, grid);
  found = cert.has_value();
  json out = {{"grid", grid_json(grid)},
              {"alpha", alpha},
              {"primal", ext_json(rep.primal)},
              {"dual", ext_json(rep.dual)}};
  if (cert) {
    out["certificate"] = {{"psi_index", cert->psi_index},
                          {"psi1", params_json(cert->psi1)},
                          {"psi2", params_json(cert->psi2)},
                          {"phi1", cert->phi1},
                          {"phi2", cert->phi2},
                          {"t0", cert->t.t0},
                          {"level", cert->t.level},
                          {"lower_envelope_value", cert->t.lower_envelope_value}};
  } else {
    out["certificate"] = nullptr;
  }
  if (sc.value("sweep", false) && rep.primal.is_finite()) {
    const ZeroGapSweep sweep = zero_gap_sweep(prob, grid);
    json levels = json::array();
    for (std::size_t k = 0; k < sweep.alphas.size(); ++k) {
      levels.push_back({{"alpha", sweep.alphas[k]}, {"certified", static_cast<bool>(sweep.certified[k])}});
    }
    out["sweep"] = {{"levels", levels}, {"zero_gap", sweep.zero_gap}};
  }
  return out;
}

//
// constrained
//
json run_constrained(const json& sc, const RunOptions& opt) {
  ConstrainedInstance inst;
  inst.Y = parse_domain(need(sc, "domain"), opt.validate);
  inst.f = as_grid_fn(need(sc, "f"), "f");
  inst.y0 = as_index(need(sc, "y0"), "y0");
  inst.allow_empty_feasible = sc.value("allow_empty_feasible", false);
  std::vector<std::vector<std::size_t>> feasible;
  const auto& fj = need(sc, "feasible");
  if (!fj.is_array()) reject("feasible must be an array of index lists");
  for (const auto& set : fj) {
    if (!set.is_array()) reject("feasible must be an array of index lists");
    std::vector<std::size_t> s;
    for (const auto& x : set) s.push_back(as_index(x, "feasible index"));
    feasible.push_back(std::move(s));
  }
  inst.map = ConstraintMap::from_feasible_sets(inst.f.size(), std::move(feasible));
  inst.validate();
  const std::vector<double> ladder =
      sc.contains("ladder") ? as_numbers(sc.at("ladder"), "ladder") : std::vector<double>{1, 2, 4, 8, 16, 32, 64};
  const double tol = opt.tol.value_or(kDefaultTol);
  const MetricGapReport rep = verify_zero_gap_metric(inst, ladder, tol);

  json primal_sup = json::array();
  json dist = json::array();
  for (std::size_t x = 0; x < inst.f.size(); ++x) {
    primal_sup.push_back(ext_json(metric_primal_sup(inst, x)));
    dist.push_back(ext_to_json(distance_to_feasible(inst, x)));
  }
  json out = {{"grid", rep.duality.grid},
              {"primal", ext_json(rep.duality.primal)},
              {"dual", ext_json(rep.duality.dual)},
              {"gap", ext_json(rep.duality.gap)},
              {"ladder", rep.ladder},
              {"dual_by_rung", ext_array(rep.dual_by_rung)},
              {"proof_bound", rep.proof_bound},
              {"metric_primal_sup", primal_sup},
              {"distance_to_feasible", dist},
              {"tol", rep.tol}};
  if (rep.min_rung) {
    out["min_rung"] = *rep.min_rung;
    out["min_rung_a"] = rep.ladder[*rep.min_rung];
  } else {
    out["min_rung"] = nullptr;
    out["min_rung_a"] = nullptr;
  }
  out["zero_gap"] = rep.min_rung.has_value();
  return out;
}

//
// transport / conic
//
json run_transport(const json& sc, const RunOptions& opt) {
  Matrix cost;
  std::vector<double> mu, nu;
  if (sc.contains("random")) {
    const auto& r = sc.at("random");
    const std::size_t n = as_index(need(r, "n"), "n");
    const std::size_t m = as_index(need(r, "m"), "m");
    if (n == 0 || m == 0) reject("random transport needs n, m >= 1");
    std::mt19937_64 rng(need_seed(sc, opt));
    std::uniform_int_distribution<int> c(0, 32), w(1, 8);
    cost.assign(n, std::vector<double>(m));
    for (auto& row : cost) {
      for (auto& v : row) v = c(rng);
    }
    // Integer masses with equal totals: spread sum(mu) over the targets.
    mu.resize(n);
    long total = 0;
    for (auto& v : mu) total += static_cast<long>(v = w(rng));
    nu.assign(m, 0.0);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (long k = 0; k < total; ++k) nu[pick(rng)] += 1.0;
  } else {
    if (sc.contains("cost_csv")) {
      cost = load_cost_csv(sc.at("cost_csv").get<std::string>());
    } else {
      cost = as_matrix(need(sc, "cost"), "cost");
    }
    mu = as_numbers(need(sc, "mu"), "mu");
    nu = as_numbers(need(sc, "nu"), "nu");
  }
  const TransportProblem prob(cost, mu, nu);
  const KantorovichReport rep = kantorovich_gap_report(prob);
  const auto& sol = rep.solution;
  Matrix q(prob.n(), std::vector<double>(prob.m()));
  for (std::size_t i = 0; i < prob.n(); ++i) {
    for (std::size_t j = 0; j < prob.m(); ++j) q[i][j] = sol.coupling(i, j);
  }
  json basis = json::array();
  for (const auto& [i, j] : sol.basis) basis.push_back({i, j});
  json out = {{"value", sol.value},
              {"primal", rep.primal},
              {"dual", rep.dual},
              {"gap", rep.gap},
              {"strong_duality", rep.strong_duality},
              {"slack_violations", rep.slack_violations},
              {"feasibility_violations", rep.feasibility_violations},
              {"potential_bound", rep.potential_bound},
              {"orientation", rep.orientation},
              {"coupling", q},
              {"psi", sol.potentials.psi},
              {"phi", sol.potentials.phi},
              {"pivots", sol.pivots},
              {"basis", basis}};
  if (sc.contains("random")) {
    out["instance"] = {{"cost", cost}, {"mu", mu}, {"nu", nu}};
  }
  return out;
}

json run_conic(const json& sc) {
  ConicLP lp{as_numbers(need(sc, "pi"), "pi"), as_numbers(need(sc, "c"), "c")};
  const ConicReport rep = conic_lp_dual(lp);
  return {{"primal", ext_json(rep.primal)},
          {"dual", ext_json(rep.dual)},
          {"q_star", rep.q_star ? json(*rep.q_star) : json(nullptr)}};
}

//
// peaking
//
json member_values(const ElemFamily& family, const ElemParams& p) {
  json out = json::array();
  for (std::size_t y = 0; y < family.domain().size(); ++y) out.push_back(eval_elementary(family, p, y));
  return out;
}

json run_peaking(const json& sc, const RunOptions& opt) {
  const SpacePtr Y = parse_domain(need(sc, "domain"), opt.validate);
  const ElemFamily family = parse_family(need(sc, "family"), Y);
  const std::size_t y0 = as_index(need(sc, "y0"), "y0");
  const double eps = as_number(need(sc, "eps"), "eps");
  const double delta = as_number(need(sc, "delta"), "delta");
  json out = {{"y0", y0}, {"eps", eps}, {"delta", delta}};
  if (sc.contains("g")) {
    const double K = as_number(need(sc, "K"), "K");
    const ElemParams g = as_params(sc.at("g"));
    validate_params(family, g);
    const ElemParams gbar = peaking_witness(family, y0, eps, delta, K, g);
    out["peaking"] = {{"K", K},
                      {"g", params_json(g)},
                      {"witness", params_json(gbar)},
                      {"values", member_values(family, gbar)},
                      {"verified", satisfies_peaking(family, y0, eps, delta, K, g, gbar)}};
  } else {
    out["peaking"] = nullptr;
  }
  if (sc.value("urysohn", true) && eps > 0.0) {
    const ElemParams u = urysohn_witness(family, y0, eps, delta);
    out["urysohn"] = {{"witness", params_json(u)},
                      {"values", member_values(family, u)},
                      {"verified", satisfies_urysohn(family, y0, eps, delta, u)}};
  } else {
    out["urysohn"] = nullptr;
  }
  return out;
}

const char* validate_name(Validate v) { return v == Validate::kFull ? "full" : "fast"; }

}  // namespace

json ext_to_json(double raw) {
  if (raw == std::numeric_limits<double>::infinity()) return "+inf";
  if (raw == -std::numeric_limits<double>::infinity()) return "-inf";
  return {{"finite", raw}};
}

RunResult run_scenario(const json& scenario, const RunOptions& options) {
  RunResult res;
  try {
    if (!scenario.is_object()) reject("scenario must be a JSON object");
    const std::string kind = need(scenario, "kind").get<std::string>();
    if (!options.command.empty() && options.command != kind) {
      reject("subcommand '" + options.command + "' does not match scenario kind '" + kind + "'");
    }
    const auto start = std::chrono::steady_clock::now();
    json result;
    std::string status = "ok";
    if (kind == "conjugate") {
      result = run_conjugate(scenario, options);
    } else if (kind == "gap") {
      result = run_gap(scenario, options, res.csv);
    } else if (kind == "certify") {
      bool found = false;
      result = run_certify(scenario, options, found);
      if (!found) status = "no_certificate";
    } else if (kind == "constrained") {
      result = run_constrained(scenario, options);
    } else if (kind == "transport") {
      result = run_transport(scenario, options);
    } else if (kind == "conic") {
      result = run_conic(scenario);
    } else if (kind == "peaking") {
      result = run_peaking(scenario, options);
    } else {
      reject("unknown scenario kind '" + kind + "'");
    }
    const auto stop = std::chrono::steady_clock::now();

    json seed = nullptr;
    if (options.seed) {
      seed = *options.seed;
    } else if (scenario.contains("seed")) {
      seed = scenario.at("seed");
    }
    res.report = {{"kind", kind},
                  {"status", status},
                  {"seed", seed},
                  {"tol", options.tol.value_or(kDefaultTol)},
                  {"validate", validate_name(options.validate)},
                  {"input", scenario},
                  {"result", result}};
    if (options.timing) {
      res.report["timing"] = {
          {"elapsed_ms", std::chrono::duration<double, std::milli>(stop - start).count()}};
    }
    res.exit_code = status == "ok" ? kExitOk : kExitNegative;
    if (res.exit_code == kExitNegative) res.message = "no certificate at the requested level";
  } catch (const ScenarioError& e) {
    res = RunResult{kExitInvalid, nullptr, {}, std::string("invalid scenario: ") + e.what()};
  } catch (const json::exception& e) {
    res = RunResult{kExitInvalid, nullptr, {}, std::string("invalid scenario: ") + e.what()};
  } catch (const Error& e) {
    const bool negative = e.code() == Errc::kNoWitness || e.code() == Errc::kNotSeparable;
    res = RunResult{negative ? kExitNegative : kExitInvalid, nullptr, {},
                    e.what()};
  } catch (const std::exception& e) {
    res = RunResult{kExitInternal, nullptr, {}, std::string("internal error: ") + e.what()};
  }
  return res;
}

int run_scenario_file(const std::string& path, const std::string& out, const std::string& csv_path,
                      const RunOptions& options, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot read scenario " << path << '\n';
    return kExitInvalid;
  }
  json scenario;
  try {
    scenario = json::parse(in);
  } catch (const json::exception& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return kExitInvalid;
  }
  const RunResult res = run_scenario(scenario, options);
  if (!res.message.empty()) err << res.message << '\n';
  if (res.report.is_null()) return res.exit_code;

  const std::string text = res.report.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream o(out, std::ios::binary);
    if (!o || !(o << text)) {
      err << "cannot write " << out << '\n';
      return kExitInternal;
    }
  }
  if (!csv_path.empty()) {
    std::ofstream c(csv_path, std::ios::binary);
    if (!c || !(c << res.csv)) {
      err << "cannot write " << csv_path << '\n';
      return kExitInternal;
    }
  }
  return res.exit_code;
}

}  // namespace absconv::cli
