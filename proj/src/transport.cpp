#include "absconv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "absconv/error.hpp"

namespace absconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginalTol = 1e-9;
constexpr double kSlackTol = 1e-9;
constexpr double kDualityTol = 1e-6;
constexpr std::size_t kNoEdge = static_cast<std::size_t>(-1);

// Spanning-tree basis of the transportation simplex. Nodes 0..n-1 are
// sources, n..n+m-1 targets; every basic cell (i, j) is an edge i -- n+j.
class Basis {
 public:
  Basis(std::size_t n, std::size_t m) : n_(n), m_(m), basic_(n * m, 0), flow_(n * m, 0.0) {}

  void add(std::size_t cell, double flow) {
    basic_[cell] = 1;
    flow_[cell] = flow;
    cells_.push_back(cell);
  }

  bool basic(std::size_t cell) const { return basic_[cell] != 0; }
  double flow(std::size_t cell) const { return flow_[cell]; }
  const std::vector<std::size_t>& cells() const { return cells_; }
  const std::vector<double>& flows() const { return flow_; }

  // u_i + v_j = c_ij on every basic cell, u_0 = 0.
  void potentials(const TransportProblem& prob, std::vector<double>& u, std::vector<double>& v) {
    build_adjacency();
    std::vector<double> pot(n_ + m_, 0.0);
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t cell : adj_[node]) {
        const std::size_t i = cell / m_, j = cell % m_;
        const std::size_t other = node < n_ ? n_ + j : i;
        if (seen[other]) continue;
        seen[other] = 1;
        pot[other] = prob.cost(i, j) - pot[node];
        stack.push_back(other);
      }
    }
    u.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(n_));
    v.assign(pot.begin() + static_cast<std::ptrdiff_t>(n_), pot.end());
  }

  // Tree path from target node n+j to source node i, as cells in order.
  std::vector<std::size_t> path(std::size_t i, std::size_t j) const {
    std::vector<std::size_t> parent_edge(n_ + m_, kNoEdge);
    std::vector<std::size_t> parent(n_ + m_, kNoEdge);
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> stack{i};
    seen[i] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t cell : adj_[node]) {
        const std::size_t ci = cell / m_, cj = cell % m_;
        const std::size_t other = node < n_ ? n_ + cj : ci;
        if (seen[other]) continue;
        seen[other] = 1;
        parent[other] = node;
        parent_edge[other] = cell;
        stack.push_back(other);
      }
    }
    std::vector<std::size_t> out;
    for (std::size_t node = n_ + j; node != i; node = parent[node]) {
      if (parent[node] == kNoEdge) throw std::logic_error("transport basis is not a spanning tree");
      out.push_back(parent_edge[node]);
    }
    return out;
  }

  void pivot(std::size_t entering, const std::vector<std::size_t>& cycle_path) {
    // Cells alternate -, +, -, ... starting from the target end of the path.
    double theta = kInf;
    std::size_t leaving = kNoEdge;
    for (std::size_t k = 0; k < cycle_path.size(); k += 2) {
      const std::size_t cell = cycle_path[k];
      if (flow_[cell] < theta || (flow_[cell] == theta && cell < leaving)) {
        theta = flow_[cell];
        leaving = cell;
      }
    }
    for (std::size_t k = 0; k < cycle_path.size(); ++k) {
      const std::size_t cell = cycle_path[k];
      flow_[cell] = k % 2 == 0 ? flow_[cell] - theta : flow_[cell] + theta;
    }
    flow_[leaving] = 0.0;
    basic_[leaving] = 0;
    basic_[entering] = 1;
    flow_[entering] = theta;
    *std::find(cells_.begin(), cells_.end(), leaving) = entering;
  }

 private:
  void build_adjacency() {
    adj_.assign(n_ + m_, {});
    for (std::size_t cell : cells_) {
      adj_[cell / m_].push_back(cell);
      adj_[n_ + cell % m_].push_back(cell);
    }
  }

  std::size_t n_, m_;
  std::vector<char> basic_;
  std::vector<double> flow_;
  std::vector<std::size_t> cells_;
  std::vector<std::vector<std::size_t>> adj_;
};

Basis north_west_corner(const TransportProblem& prob) {
  const std::size_t n = prob.n(), m = prob.m();
  Basis basis(n, m);
  std::vector<double> supply = prob.mu();
  std::vector<double> demand = prob.nu();
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    const double x = std::min(supply[i], demand[j]);
    basis.add(i * m + j, x);
    supply[i] -= x;
    demand[j] -= x;
    if (i == n - 1) {
      ++j;
    } else if (j == m - 1) {
      ++i;
    } else if (supply[i] <= demand[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return basis;
}

double cost_scale(const TransportProblem& prob) {
  double s = 1.0;
  for (std::size_t i = 0; i < prob.n(); ++i) {
    for (std::size_t j = 0; j < prob.m(); ++j) s = std::max(s, std::abs(prob.cost(i, j)));
  }
  return s;
}

void check_nonneg(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw Error(Errc::kEmptyDomain, std::string(what) + " is empty");
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(Errc::kInvalidArgument, std::string(what) + " must be finite and >= 0");
    }
  }
}

}  // namespace

TransportProblem::TransportProblem(const Matrix& cost, std::vector<double> mu, std::vector<double> nu)
    : n_(mu.size()), m_(nu.size()), mu_(std::move(mu)), nu_(std::move(nu)) {
  check_nonneg(mu_, "mu");
  check_nonneg(nu_, "nu");
  if (cost.size() != n_) throw Error(Errc::kDimensionMismatch, "cost must have one row per source");
  cost_.reserve(n_ * m_);
  for (const auto& row : cost) {
    if (row.size() != m_) throw Error(Errc::kDimensionMismatch, "cost row length differs from m");
    for (double c : row) {
      if (!std::isfinite(c)) throw Error(Errc::kInvalidArgument, "cost entries must be finite");
      cost_.push_back(c);
    }
  }
  const double smu = std::accumulate(mu_.begin(), mu_.end(), 0.0);
  const double snu = std::accumulate(nu_.begin(), nu_.end(), 0.0);
  if (std::abs(smu - snu) > 1e-12 * std::max(1.0, std::max(smu, snu))) {
    throw Error(Errc::kUnbalanced, "sum(mu) != sum(nu)");
  }
}

Matrix TransportProblem::cost_matrix() const {
  Matrix out(n_, std::vector<double>(m_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) out[i][j] = cost(i, j);
  }
  return out;
}

TransportSolution solve_transport(const TransportProblem& prob) {
  const std::size_t n = prob.n(), m = prob.m();
  Basis basis = north_west_corner(prob);
  const double eps = 1e-11 * cost_scale(prob);
  const std::size_t max_pivots = 1000 * (n + m) * (n + m) + 1000;

  std::vector<double> u, v;
  std::size_t pivots = 0;
  for (;; ++pivots) {
    if (pivots > max_pivots) throw std::logic_error("transportation simplex did not terminate");
    basis.potentials(prob, u, v);
    std::size_t entering = kNoEdge;
    for (std::size_t cell = 0; cell < n * m && entering == kNoEdge; ++cell) {
      if (basis.basic(cell)) continue;
      const std::size_t i = cell / m, j = cell % m;
      if (prob.cost(i, j) - u[i] - v[j] < -eps) entering = cell;
    }
    if (entering == kNoEdge) break;
    basis.pivot(entering, basis.path(entering / m, entering % m));
  }

  TransportSolution sol;
  sol.pivots = pivots;
  sol.coupling = Coupling{n, m, basis.flows()};
  sol.potentials = Potentials{u, v};
  sol.value = coupling_cost(prob, sol.coupling);
  for (std::size_t cell : basis.cells()) sol.basis.emplace_back(cell / m, cell % m);
  std::sort(sol.basis.begin(), sol.basis.end());
  return sol;
}

double coupling_cost(const TransportProblem& prob, const Coupling& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < prob.n(); ++i) {
    for (std::size_t j = 0; j < prob.m(); ++j) s += q(i, j) * prob.cost(i, j);
  }
  return s;
}

double potentials_objective(const TransportProblem& prob, const Potentials& pot) {
  double s = 0.0;
  for (std::size_t i = 0; i < prob.n(); ++i) s += prob.mu()[i] * pot.psi[i];
  for (std::size_t j = 0; j < prob.m(); ++j) s += prob.nu()[j] * pot.phi[j];
  return s;
}

double max_feasibility_violation(const TransportProblem& prob, const Potentials& pot) {
  double worst = -kInf;
  for (std::size_t i = 0; i < prob.n(); ++i) {
    for (std::size_t j = 0; j < prob.m(); ++j) {
      worst = std::max(worst, pot.psi[i] + pot.phi[j] - prob.cost(i, j));
    }
  }
  return worst;
}

std::vector<double> c_transform(std::span<const double> psi, const Matrix& cost) {
  if (cost.size() != psi.size()) throw Error(Errc::kDimensionMismatch, "psi length differs from n");
  const std::size_t m = cost.empty() ? 0 : cost.front().size();
  std::vector<double> phi(m, kInf);
  for (std::size_t i = 0; i < cost.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) phi[j] = std::min(phi[j], cost[i][j] - psi[i]);
  }
  return phi;
}

std::vector<double> cbar_transform(std::span<const double> phi, const Matrix& cost) {
  std::vector<double> psi(cost.size(), kInf);
  for (std::size_t i = 0; i < cost.size(); ++i) {
    if (cost[i].size() != phi.size()) throw Error(Errc::kDimensionMismatch, "phi length differs from m");
    for (std::size_t j = 0; j < phi.size(); ++j) psi[i] = std::min(psi[i], cost[i][j] - phi[j]);
  }
  return psi;
}

KantorovichReport kantorovich_gap_report(const TransportProblem& prob) {
  KantorovichReport rep;
  rep.solution = solve_transport(prob);
  const auto& pot = rep.solution.potentials;
  rep.primal = potentials_objective(prob, pot);
  rep.dual = rep.solution.value;
  rep.gap = std::abs(rep.primal - rep.dual);
  rep.strong_duality = rep.gap <= kDualityTol;
  for (std::size_t i = 0; i < prob.n(); ++i) {
    rep.potential_bound = std::max(rep.potential_bound, std::abs(pot.psi[i]));
    for (std::size_t j = 0; j < prob.m(); ++j) {
      const double slack = prob.cost(i, j) - pot.psi[i] - pot.phi[j];
      if (slack < -kSlackTol) ++rep.feasibility_violations;
      if (rep.solution.coupling(i, j) > 0.0 && std::abs(slack) > kSlackTol) ++rep.slack_violations;
    }
  }
  for (double p : pot.phi) rep.potential_bound = std::max(rep.potential_bound, std::abs(p));
  rep.orientation =
      "primal = max <(mu,nu),(psi,phi)> s.t. psi(x)+phi(y) <= c(x,y), equivalently "
      "-min -<(mu,nu),(psi,phi)>; dual = min <q,c> over couplings of (mu,nu)";
  return rep;
}

ExtReal conic_neg_conjugate(const ConicLP& lp, std::span<const double> q_star) {
  if (q_star.size() != lp.pi.size()) throw Error(Errc::kDimensionMismatch, "q* length differs");
  double value = 0.0;
  for (std::size_t i = 0; i < lp.pi.size(); ++i) {
    if (q_star[i] != lp.pi[i] || q_star[i] < 0.0) return ExtReal::minus_inf();
    value += lp.pi[i] * lp.c[i];
  }
  return ExtReal::finite(value);
}

ConicReport conic_lp_dual(const ConicLP& lp) {
  if (lp.pi.size() != lp.c.size()) throw Error(Errc::kDimensionMismatch, "pi and c lengths differ");
  for (std::size_t i = 0; i < lp.pi.size(); ++i) {
    if (!std::isfinite(lp.pi[i]) || !std::isfinite(lp.c[i])) {
      throw Error(Errc::kInvalidArgument, "conic data must be finite");
    }
  }
  ConicReport rep;
  // f = c + s with s >= 0: bounded below iff pi >= 0, optimum at s = 0.
  const bool bounded = std::all_of(lp.pi.begin(), lp.pi.end(), [](double p) { return p >= 0.0; });
  if (bounded) {
    double v = 0.0;
    for (std::size_t i = 0; i < lp.pi.size(); ++i) v += lp.pi[i] * lp.c[i];
    rep.primal = ExtReal::finite(v);
  } else {
    rep.primal = ExtReal::minus_inf();
  }
  // -p*(0, .) is -inf off q* = pi, so the supremum is its value there.
  rep.dual = conic_neg_conjugate(lp, lp.pi);
  if (rep.dual.is_finite()) rep.q_star = lp.pi;
  if (!(rep.primal == rep.dual)) throw std::logic_error("conic primal and dual differ");
  return rep;
}

double pairing_gap(const Coupling& q, std::span<const double> mu, std::span<const double> nu,
                   const Potentials& pot) {
  double lhs = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) lhs += mu[i] * pot.psi[i];
  for (std::size_t j = 0; j < nu.size(); ++j) lhs += nu[j] * pot.phi[j];
  double rhs = 0.0;
  for (std::size_t i = 0; i < q.n; ++i) {
    for (std::size_t j = 0; j < q.m; ++j) rhs += q(i, j) * (pot.psi[i] + pot.phi[j]);
  }
  return lhs - rhs;
}

bool coupling_check(const Coupling& q, std::span<const double> mu, std::span<const double> nu,
                    const std::vector<Potentials>& pairing_tests) {
  if (q.n != mu.size() || q.m != nu.size() || q.q.size() != q.n * q.m) {
    throw Error(Errc::kDimensionMismatch, "coupling shape differs from marginals");
  }
  for (double v : q.q) {
    if (!(v >= 0.0)) return false;
  }
  for (std::size_t i = 0; i < q.n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.m; ++j) s += q(i, j);
    if (std::abs(s - mu[i]) > kMarginalTol) return false;
  }
  for (std::size_t j = 0; j < q.m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.n; ++i) s += q(i, j);
    if (std::abs(s - nu[j]) > kMarginalTol) return false;
  }
  for (const auto& pot : pairing_tests) {
    if (pot.psi.size() != q.n || pot.phi.size() != q.m) {
      throw Error(Errc::kDimensionMismatch, "test pair shape differs from coupling");
    }
    if (std::abs(pairing_gap(q, mu, nu, pot)) > kMarginalTol) return false;
  }
  return true;
}

Matrix parse_cost_csv(const std::string& text) {
  Matrix out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw Error(Errc::kInvalidArgument, "bad CSV cell '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw Error(Errc::kInvalidArgument, "bad CSV cell '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!out.empty() && row.size() != out.front().size()) {
      throw Error(Errc::kDimensionMismatch, "ragged CSV cost matrix");
    }
    out.push_back(std::move(row));
  }
  if (out.empty()) throw Error(Errc::kEmptyDomain, "empty CSV cost matrix");
  return out;
}

Matrix load_cost_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cost_csv(buf.str());
}

}  // namespace absconv
