#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absconv/ext_real.hpp"

namespace absconv {

using Matrix = std::vector<std::vector<double>>;

/// Balanced discrete transport problem: cost c(i, j) between n source atoms
/// with masses mu and m target atoms with masses nu.
class TransportProblem {
 public:
  /// Throws Errc::kUnbalanced when the total masses differ by more than
  /// 1e-12 (relative to max(1, total)), Errc::kInvalidArgument on negative
  /// or non-finite data.
  TransportProblem(const Matrix& cost, std::vector<double> mu, std::vector<double> nu);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  double cost(std::size_t i, std::size_t j) const { return cost_[i * m_ + j]; }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<double>& nu() const noexcept { return nu_; }
  Matrix cost_matrix() const;

 private:
  std::size_t n_, m_;
  std::vector<double> cost_, mu_, nu_;
};

/// Nonnegative n x m plan, row-major.
struct Coupling {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> q;

  double operator()(std::size_t i, std::size_t j) const { return q[i * m + j]; }
};

struct Potentials {
  std::vector<double> psi;  // on sources
  std::vector<double> phi;  // on targets
};

struct TransportSolution {
  Coupling coupling;
  Potentials potentials;
  double value = 0.0;
  std::size_t pivots = 0;
  std::vector<std::pair<std::size_t, std::size_t>> basis;
};

/// Transportation simplex: north-west-corner start, Bland's smallest-index
/// rule for entering and leaving cells. Degenerate pivots keep zero-flow
/// cells in the basis, so the basis stays a spanning tree of size n + m - 1.
/// The potentials are read off the final basis.
TransportSolution solve_transport(const TransportProblem& prob);

double coupling_cost(const TransportProblem& prob, const Coupling& q);
/// sum_i mu_i psi_i + sum_j nu_j phi_j.
double potentials_objective(const TransportProblem& prob, const Potentials& pot);
/// Largest psi_i + phi_j - c(i, j); <= 1e-9 for feasible potentials.
double max_feasibility_violation(const TransportProblem& prob, const Potentials& pot);

/// phi_j = min_i (c(i, j) - psi_i).
std::vector<double> c_transform(std::span<const double> psi, const Matrix& cost);
/// psi_i = min_j (c(i, j) - phi_j).
std::vector<double> cbar_transform(std::span<const double> phi, const Matrix& cost);

/// The potentials problem is reported as a maximization of the pairing
/// <(mu, nu), (psi, phi)>; the equivalent minimization of its negative is
/// the same problem with the sign flipped.
struct KantorovichReport {
  double primal = 0.0;  // optimal potentials pairing
  double dual = 0.0;    // optimal coupling cost
  double gap = 0.0;     // |primal - dual|
  bool strong_duality = false;  // gap <= 1e-6
  std::size_t slack_violations = 0;
  std::size_t feasibility_violations = 0;
  double potential_bound = 0.0;  // max |psi_i|, |phi_j|: box holding the optimal pair
  std::string orientation;
  TransportSolution solution;
};

KantorovichReport kantorovich_gap_report(const TransportProblem& prob);

/// min <pi, f> subject to f - c in the nonnegative orthant.
struct ConicLP {
  std::vector<double> pi;
  std::vector<double> c;
};

struct ConicReport {
  ExtReal primal;
  ExtReal dual;
  std::optional<std::vector<double>> q_star;
};

/// -p*(0, q*) for the perturbation p(f, q) = <pi, f> + ind(f - c - q >= 0):
/// <pi, c> when q* = pi >= 0, -inf otherwise.
ExtReal conic_neg_conjugate(const ConicLP& lp, std::span<const double> q_star);

/// Throws std::logic_error if the two values ever differ.
ConicReport conic_lp_dual(const ConicLP& lp);

/// <(mu, nu), (psi, phi)> - sum_ij q_ij (psi_i + phi_j).
double pairing_gap(const Coupling& q, std::span<const double> mu, std::span<const double> nu,
                   const Potentials& pot);

/// q >= 0 exactly, marginals within 1e-9, and the pairing identity within
/// 1e-9 for every supplied test pair.
bool coupling_check(const Coupling& q, std::span<const double> mu, std::span<const double> nu,
                    const std::vector<Potentials>& pairing_tests);

/// Row-major, header-free, comma-separated.
Matrix parse_cost_csv(const std::string& text);
Matrix load_cost_csv(const std::string& path);

}  // namespace absconv
