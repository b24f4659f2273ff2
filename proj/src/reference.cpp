#include "absconv/reference.hpp"

#include <algorithm>

#include "absconv/error.hpp"
#include "absconv/lagrangian.hpp"

namespace absconv::reference {

std::vector<ExtReal> conjugate_transform(const GridFn& f, const DualGrid& dual) {
  if (f.takes_minus_inf()) throw Error(Errc::kImproperInput, "f takes -inf");
  std::vector<ExtReal> out;
  out.reserve(dual.size());
  for (const auto& params : dual.params()) {
    ExtReal best = ExtReal::minus_inf();
    for (std::size_t x = 0; x < f.size(); ++x) {
      best = std::max(best, ext_sub_real(eval_elementary(dual.family(), params, x), f[x]));
    }
    out.push_back(best);
  }
  return out;
}

GridFn biconjugate(const GridFn& f, const DualGrid& dual) {
  const auto conj = reference::conjugate_transform(f, dual);
  std::vector<ExtReal> out(f.size(), ExtReal::minus_inf());
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (std::size_t j = 0; j < dual.size(); ++j) {
      out[x] = std::max(out[x], ext_sub_real(eval_elementary(dual.family(), dual[j], x), conj[j]));
    }
  }
  return GridFn(std::move(out));
}

std::vector<ExtReal> lagrangian(const PerturbationProblem& prob, const DualGrid& psi_grid) {
  std::vector<ExtReal> out;
  out.reserve(prob.nx() * psi_grid.size());
  for (std::size_t x = 0; x < prob.nx(); ++x) {
    for (const auto& psi : psi_grid.params()) {
      ExtReal conj = ExtReal::minus_inf();
      for (std::size_t y = 0; y < prob.ny(); ++y) {
        conj = std::max(conj, ext_sub_real(eval_elementary(psi_grid.family(), psi, y), prob(x, y)));
      }
      out.push_back(ext_sub_real(eval_elementary(psi_grid.family(), psi, prob.y0()), conj));
    }
  }
  return out;
}

double envelope_max(std::span<const double> phi1, std::span<const double> phi2) {
  const std::size_t n = phi1.size();
  const auto g = [&](double t) {
    double m = t * phi1[0] + (1.0 - t) * phi2[0];
    for (std::size_t x = 1; x < n; ++x) m = std::min(m, t * phi1[x] + (1.0 - t) * phi2[x]);
    return m;
  };
  double best = std::max(g(0.0), g(1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double si = phi1[i] - phi2[i];
      const double sj = phi1[j] - phi2[j];
      if (si == sj) continue;
      const double t = (phi2[j] - phi2[i]) / (si - sj);
      if (t > 0.0 && t < 1.0) best = std::max(best, g(t));
    }
  }
  return best;
}

}  // namespace absconv::reference
