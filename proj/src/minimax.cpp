#include "absconv/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "absconv/error.hpp"

namespace absconv {

namespace {

void check_pair(std::span<const double> phi1, std::span<const double> phi2) {
  if (phi1.empty()) throw Error(Errc::kEmptyDomain, "empty grid");
  if (phi1.size() != phi2.size()) throw Error(Errc::kDimensionMismatch, "phi1/phi2 sizes differ");
  for (std::size_t x = 0; x < phi1.size(); ++x) {
    if (!std::isfinite(phi1[x]) || !std::isfinite(phi2[x])) {
      throw Error(Errc::kInvalidArgument, "phi1/phi2 must be real-valued");
    }
  }
}

double envelope_at(std::span<const double> phi1, std::span<const double> phi2, double t) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < phi1.size(); ++x) m = std::min(m, t * phi1[x] + (1.0 - t) * phi2[x]);
  return m;
}

// Higher value wins; ties go to the smaller t.
bool better(const EnvelopeMax& a, const EnvelopeMax& b) {
  return a.value > b.value || (a.value == b.value && a.t < b.t);
}

}  // namespace

bool intersection_property_direct(std::span<const double> phi1, std::span<const double> phi2,
                                  double alpha, std::size_t t_samples) {
  check_pair(phi1, phi2);
  if (t_samples < 2) throw Error(Errc::kInvalidArgument, "t_samples must be >= 2");
  const double scale = static_cast<double>(t_samples - 1);
  const double scaled_alpha = alpha * scale;
  for (std::size_t k = 0; k < t_samples; ++k) {
    const double w1 = static_cast<double>(k);
    const double w2 = scale - w1;
    bool meets1 = false;
    bool meets2 = false;
    for (std::size_t x = 0; x < phi1.size() && !(meets1 && meets2); ++x) {
      if (w1 * phi1[x] + w2 * phi2[x] < scaled_alpha) {
        meets1 = meets1 || phi1[x] < alpha;
        meets2 = meets2 || phi2[x] < alpha;
      }
    }
    if (meets1 && meets2) return false;
  }
  return true;
}

bool disjoint_sublevel(std::span<const double> phi1, std::span<const double> phi2, double alpha) {
  check_pair(phi1, phi2);
  for (std::size_t x = 0; x < phi1.size(); ++x) {
    if (phi1[x] < alpha && phi2[x] < alpha) return false;
  }
  return true;
}

EnvelopeMax maximize_lower_envelope(std::span<const double> phi1, std::span<const double> phi2,
                                    Exec exec) {
  check_pair(phi1, phi2);
  const std::size_t n = phi1.size();
  std::vector<std::size_t> rising, flat_or_falling;
  for (std::size_t x = 0; x < n; ++x) {
    (phi1[x] - phi2[x] > 0.0 ? rising : flat_or_falling).push_back(x);
  }

  EnvelopeMax best{0.0, envelope_at(phi1, phi2, 0.0)};
  const EnvelopeMax at_one{1.0, envelope_at(phi1, phi2, 1.0)};
  if (better(at_one, best)) best = at_one;

  const auto n_rise = static_cast<std::int64_t>(rising.size());
#pragma omp parallel if (exec == Exec::kParallel)
  {
    EnvelopeMax local = best;
#pragma omp for schedule(dynamic, 4) nowait
    for (std::int64_t r = 0; r < n_rise; ++r) {
      const std::size_t i = rising[static_cast<std::size_t>(r)];
      const double si = phi1[i] - phi2[i];
      for (std::size_t j : flat_or_falling) {
        const double sj = phi1[j] - phi2[j];
        const double t = (phi2[j] - phi2[i]) / (si - sj);
        if (!(t > 0.0 && t < 1.0)) continue;
        const EnvelopeMax cand{t, envelope_at(phi1, phi2, t)};
        if (better(cand, local)) local = cand;
      }
    }
#pragma omp critical(absconv_envelope)
    {
      if (better(local, best)) best = local;
    }
  }
  return best;
}

std::optional<TCertificate> intersection_certificate(std::span<const double> phi1,
                                                     std::span<const double> phi2, double alpha) {
  const EnvelopeMax m = maximize_lower_envelope(phi1, phi2);
  if (m.value < alpha) return std::nullopt;
  return TCertificate{m.t, alpha, m.value};
}

SaddleTable::SaddleTable(std::size_t rows, std::size_t cols, std::vector<ExtReal> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) throw Error(Errc::kEmptyDomain, "empty saddle table");
  if (values_.size() != rows_ * cols_) {
    throw Error(Errc::kDimensionMismatch, "saddle table size mismatch");
  }
}

SaddleValues saddle_values(const SaddleTable& table) {
  ExtReal infsup = ExtReal::plus_inf();
  for (std::size_t x = 0; x < table.rows(); ++x) {
    ExtReal row_max = ExtReal::minus_inf();
    for (std::size_t z = 0; z < table.cols(); ++z) row_max = std::max(row_max, table(x, z));
    infsup = std::min(infsup, row_max);
  }
  ExtReal supinf = ExtReal::minus_inf();
  for (std::size_t z = 0; z < table.cols(); ++z) {
    ExtReal col_min = ExtReal::plus_inf();
    for (std::size_t x = 0; x < table.rows(); ++x) col_min = std::min(col_min, table(x, z));
    supinf = std::max(supinf, col_min);
  }
  return {infsup, supinf};
}

}  // namespace absconv
