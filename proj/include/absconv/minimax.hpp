#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absconv/ext_real.hpp"
#include "absconv/kernels.hpp"

namespace absconv {

/// t0 in [0, 1] with min_x (t0 phi1 + (1 - t0) phi2) = lower_envelope_value >= level.
struct TCertificate {
  double t0 = 0.0;
  double level = 0.0;
  double lower_envelope_value = 0.0;
};

/// Maximum of g(t) = min_x (t phi1(x) + (1 - t) phi2(x)) on [0, 1] and its
/// smallest maximizer.
struct EnvelopeMax {
  double t = 0.0;
  double value = 0.0;
};

/// Checks, for t on a uniform grid of t_samples points including 0 and 1,
/// that [t phi1 + (1-t) phi2 < alpha] misses [phi1 < alpha] or misses
/// [phi2 < alpha]. Comparisons are scaled by (t_samples - 1) so no rounded
/// t enters them.
bool intersection_property_direct(std::span<const double> phi1, std::span<const double> phi2,
                                  double alpha, std::size_t t_samples);

/// [phi1 < alpha] and [phi2 < alpha] are disjoint.
bool disjoint_sublevel(std::span<const double> phi1, std::span<const double> phi2, double alpha);

/// g is the lower envelope of |X| lines in t, so it is concave and
/// piecewise linear. Its maximum sits at 0, 1, or a crossing of a rising line
/// with a non-rising one; all such crossings are evaluated.
EnvelopeMax maximize_lower_envelope(std::span<const double> phi1, std::span<const double> phi2,
                                    Exec exec = Exec::kParallel);

/// TCertificate iff max g >= alpha. phi1 == phi2 is allowed.
std::optional<TCertificate> intersection_certificate(std::span<const double> phi1,
                                                     std::span<const double> phi2, double alpha);

/// a(x, z) sampled on a finite X and a finite sample of Z.
class SaddleTable {
 public:
  SaddleTable(std::size_t rows, std::size_t cols, std::vector<ExtReal> values);
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  ExtReal operator()(std::size_t x, std::size_t z) const { return values_[x * cols_ + z]; }

 private:
  std::size_t rows_, cols_;
  std::vector<ExtReal> values_;
};

struct SaddleValues {
  ExtReal infsup;  // min_x max_z a(x, z)
  ExtReal supinf;  // max_z min_x a(x, z)
};

SaddleValues saddle_values(const SaddleTable& table);

}  // namespace absconv
