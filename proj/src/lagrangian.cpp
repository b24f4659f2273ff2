#include "absconv/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "absconv/error.hpp"

namespace absconv {

namespace {

constexpr double kReconstructionTol = 1e-9;

// Tie-break among equally good multipliers: the smallest member wins.
double member_size(const ElemParams& p) {
  double s = std::abs(p.a);
  for (double l : p.ell) s += std::abs(l);
  return s;
}

// Index of the multiplier with the largest min_x L(x, psi_j), ties to the
// smallest member and then the lowest index.
std::size_t best_multiplier(const LagTable& lag, const DualGrid& grid, ExtReal* value) {
  std::size_t best = 0;
  ExtReal best_inf = ExtReal::minus_inf();
  for (std::size_t j = 0; j < lag.n_psi; ++j) {
    ExtReal inf = ExtReal::plus_inf();
    for (std::size_t x = 0; x < lag.nx; ++x) inf = std::min(inf, lag(x, j));
    if (j == 0 || inf > best_inf ||
        (inf == best_inf && member_size(grid[j]) < member_size(grid[best]))) {
      best = j;
      best_inf = inf;
    }
  }
  *value = best_inf;
  return best;
}

bool ext_close(ExtReal a, ExtReal b, double tol) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.raw() - b.raw()) <= tol;
  return a == b;
}

void check_grid(const PerturbationProblem& prob, const DualGrid& grid) {
  if (grid.family().domain().size() != prob.ny()) {
    throw Error(Errc::kDimensionMismatch, "multiplier grid does not live on Y");
  }
}

}  // namespace

PerturbationProblem::PerturbationProblem(std::size_t nx, SpacePtr Y, std::vector<ExtReal> p,
                                         std::size_t y0, bool allow_empty_columns)
    : nx_(nx), Y_(std::move(Y)), p_(std::move(p)), y0_(y0) {
  if (!Y_) throw Error(Errc::kEmptyDomain, "no parameter space");
  if (nx_ == 0) throw Error(Errc::kEmptyDomain, "empty X");
  if (p_.size() != nx_ * Y_->size()) throw Error(Errc::kDimensionMismatch, "p is not |X| x |Y|");
  if (y0_ >= Y_->size()) throw Error(Errc::kInvalidArgument, "y0 out of range");
  for (ExtReal v : p_) {
    if (v.is_minus_inf()) throw Error(Errc::kImproperProblem, "p takes -inf");
  }
  if (!allow_empty_columns) {
    for (std::size_t y = 0; y < ny(); ++y) {
      bool any_finite = false;
      for (std::size_t x = 0; x < nx_ && !any_finite; ++x) any_finite = (*this)(x, y).is_finite();
      if (!any_finite) {
        throw Error(Errc::kImproperProblem, "p(., y) is not proper at y = " + std::to_string(y));
      }
    }
  }
}

GridFn PerturbationProblem::row(std::size_t x) const {
  return GridFn(std::vector<ExtReal>(p_.begin() + static_cast<std::ptrdiff_t>(x * ny()),
                                     p_.begin() + static_cast<std::ptrdiff_t>((x + 1) * ny())));
}

GridFn PerturbationProblem::value_function() const {
  std::vector<ExtReal> v(ny(), ExtReal::plus_inf());
  for (std::size_t x = 0; x < nx_; ++x) {
    for (std::size_t y = 0; y < ny(); ++y) v[y] = std::min(v[y], (*this)(x, y));
  }
  return GridFn(std::move(v));
}

ExtReal partial_conjugate(const PerturbationProblem& prob, std::size_t x, const ElemFamily& family,
                          const ElemParams& params) {
  if (x >= prob.nx()) throw Error(Errc::kInvalidArgument, "x out of range");
  if (family.domain().size() != prob.ny()) {
    throw Error(Errc::kDimensionMismatch, "family does not live on Y");
  }
  ExtReal best = ExtReal::minus_inf();
  for (std::size_t y = 0; y < prob.ny(); ++y) {
    best = std::max(best, ext_sub_real(eval_elementary(family, params, y), prob(x, y)));
  }
  return best;
}

LagTable build_lagrangian(const PerturbationProblem& prob, const DualGrid& psi_grid, Exec exec) {
  check_grid(prob, psi_grid);
  const auto table = tabulate(psi_grid, exec);
  std::vector<double> p(prob.values().size());
  std::transform(prob.values().begin(), prob.values().end(), p.begin(),
                 [](ExtReal v) { return v.raw(); });
  const auto conj = kernels::partial_conjugates(table, p, prob.nx(), exec);

  LagTable out;
  out.nx = prob.nx();
  out.n_psi = psi_grid.size();
  out.y0 = prob.y0();
  out.L.reserve(conj.size());
  out.partial_conj.reserve(conj.size());
  for (std::size_t x = 0; x < out.nx; ++x) {
    bool row_inf = true;
    for (std::size_t j = 0; j < out.n_psi; ++j) {
      const ExtReal pc = ExtReal::from_double(conj[x * out.n_psi + j]);
      const ExtReal l = ext_sub_real(table(j, prob.y0()), pc);
      row_inf = row_inf && l.is_plus_inf();
      out.partial_conj.push_back(pc);
      out.L.push_back(l);
    }
    bool p_inf = true;
    for (std::size_t y = 0; y < prob.ny() && p_inf; ++y) p_inf = prob(x, y).is_plus_inf();
    if (row_inf != p_inf) {
      throw std::logic_error("Lagrangian row is +inf exactly when p(x, .) is empty");
    }
  }
  return out;
}

DualityReport duality_report(const PerturbationProblem& prob, const DualGrid& psi_grid, Exec exec) {
  const LagTable lag = build_lagrangian(prob, psi_grid, exec);
  const auto table = tabulate(psi_grid, exec);
  DualityReport r;
  r.grid = psi_grid.describe();
  r.V = prob.value_function();
  r.primal = r.V[prob.y0()];

  r.lagrangian_primal = ExtReal::plus_inf();
  r.reconstruction_ok = true;
  for (std::size_t x = 0; x < lag.nx; ++x) {
    ExtReal sup = ExtReal::minus_inf();
    for (std::size_t j = 0; j < lag.n_psi; ++j) sup = std::max(sup, lag(x, j));
    r.lagrangian_primal = std::min(r.lagrangian_primal, sup);
    r.reconstruction_ok = r.reconstruction_ok && ext_close(sup, prob(x, prob.y0()), kReconstructionTol);
  }

  r.best_multiplier = best_multiplier(lag, psi_grid, &r.dual);

  r.V_star = conjugate_transform(r.V, psi_grid, exec);
  r.V_bidual_at_y0 = ExtReal::minus_inf();
  for (std::size_t j = 0; j < lag.n_psi; ++j) {
    r.V_bidual_at_y0 = std::max(r.V_bidual_at_y0, ext_sub_real(table(j, prob.y0()), r.V_star[j]));
  }
  if (!(r.dual == r.V_bidual_at_y0)) {
    throw std::logic_error("dual value differs from V**(y0): " + to_string(r.dual) + " vs " +
                           to_string(r.V_bidual_at_y0));
  }
  r.gap = r.primal == r.dual ? ExtReal::finite(0.0) : r.primal - r.dual;

  r.convex_on_Y = true;
  for (std::size_t x = 0; x < prob.nx() && r.convex_on_Y; ++x) {
    const GridFn row = prob.row(x);
    const GridFn hull = biconjugate(row, psi_grid, exec);
    for (std::size_t y = 0; y < prob.ny() && r.convex_on_Y; ++y) {
      r.convex_on_Y = ext_close(hull[y], row[y], kReconstructionTol);
    }
  }
  return r;
}

std::optional<Certificate> gap_certificate(const PerturbationProblem& prob, const DualGrid& psi_grid,
                                           double alpha) {
  if (!std::isfinite(alpha)) throw Error(Errc::kInvalidArgument, "alpha must be finite");
  const ExtReal primal = prob.value_function()[prob.y0()];
  if (!(ExtReal::finite(alpha) < primal)) {
    throw Error(Errc::kLevelAbovePrimal,
                "alpha = " + to_string(ExtReal::finite(alpha)) + " >= primal " + to_string(primal));
  }
  const LagTable lag = build_lagrangian(prob, psi_grid);
  ExtReal dual;
  const std::size_t j = best_multiplier(lag, psi_grid, &dual);
  if (dual < ExtReal::finite(alpha)) return std::nullopt;
  Certificate cert;
  cert.psi_index = j;
  cert.psi1 = cert.psi2 = psi_grid[j];
  cert.phi1.assign(lag.nx, alpha);
  cert.phi2 = cert.phi1;
  cert.t = *intersection_certificate(cert.phi1, cert.phi2, alpha);
  return cert;
}

ZeroGapSweep zero_gap_sweep(const PerturbationProblem& prob, const DualGrid& psi_grid) {
  const ExtReal primal = prob.value_function()[prob.y0()];
  if (!primal.is_finite()) throw Error(Errc::kImproperProblem, "sweep needs a finite V(y0)");
  constexpr int kSteps = 8;
  constexpr double kLast = 1e-6;
  const double v = primal.raw();
  const double span = std::max(1.0, std::abs(v));
  const double ratio = std::pow(kLast / span, 1.0 / (kSteps - 1));
  ZeroGapSweep sweep;
  sweep.zero_gap = true;
  for (int k = 0; k < kSteps; ++k) {
    const double alpha = k == kSteps - 1 ? v - kLast : v - span * std::pow(ratio, k);
    const bool ok = gap_certificate(prob, psi_grid, alpha).has_value();
    sweep.alphas.push_back(alpha);
    sweep.certified.push_back(ok);
    sweep.zero_gap = sweep.zero_gap && ok;
  }
  return sweep;
}

bool concavity_probe(const PerturbationProblem& prob, const ElemFamily& family,
                     const ElemParams& psi_a, const ElemParams& psi_b, double t, double tol) {
  if (!family.convex_combinable()) {
    throw Error(Errc::kNotConvexCombinable,
                std::string(to_string(family.kind())) + " parameters are not convex-combinable");
  }
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::kInvalidArgument, "t must lie in [0, 1]");
  validate_params(family, psi_a);
  validate_params(family, psi_b);
  ElemParams mix;
  mix.a = t * psi_a.a + (1.0 - t) * psi_b.a;
  mix.c = t * psi_a.c + (1.0 - t) * psi_b.c;
  mix.ell.resize(psi_a.ell.size());
  for (std::size_t k = 0; k < mix.ell.size(); ++k) {
    mix.ell[k] = t * psi_a.ell[k] + (1.0 - t) * psi_b.ell[k];
  }
  const auto lag = [&](const ElemParams& psi, std::size_t x) {
    return ext_sub_real(eval_elementary(family, psi, prob.y0()),
                        partial_conjugate(prob, x, family, psi));
  };
  for (std::size_t x = 0; x < prob.nx(); ++x) {
    const ExtReal lhs = lag(mix, x);
    const ExtReal rhs = t * lag(psi_a, x) + (1.0 - t) * lag(psi_b, x);
    if (lhs.is_plus_inf() || rhs.is_minus_inf()) continue;
    if (rhs.is_plus_inf()) return false;
    if (lhs.raw() < rhs.raw() - tol) return false;
  }
  return true;
}

double lsc_defect(const GridFn& V, const FiniteMetricSpace& Y, std::size_t y0, double radius) {
  if (V.size() != Y.size()) throw Error(Errc::kDimensionMismatch, "V size differs from Y");
  if (y0 >= Y.size()) throw Error(Errc::kInvalidArgument, "y0 out of range");
  if (!(radius > 0.0)) throw Error(Errc::kInvalidArgument, "radius must be > 0");
  if (!V[y0].is_finite()) throw Error(Errc::kInfiniteAtPoint, "V(y0) is not finite");
  ExtReal m = ExtReal::plus_inf();
  for (std::size_t y = 0; y < Y.size(); ++y) {
    const double d = Y.dist(y, y0);
    if (d > 0.0 && d <= radius) m = std::min(m, V[y]);
  }
  if (m.is_minus_inf()) throw Error(Errc::kImproperInput, "V takes -inf near y0");
  if (m.is_plus_inf()) return 0.0;
  return std::max(0.0, V[y0].raw() - m.raw());
}

}  // namespace absconv
