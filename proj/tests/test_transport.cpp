#include <algorithm>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "test_util.hpp"

#include "absconv/transport.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace absconv;

namespace {

const Matrix kSwap{{0, 1}, {1, 0}};

void check_optimal(const TransportProblem& prob, const TransportSolution& sol) {
  CHECK(max_feasibility_violation(prob, sol.potentials) <= 1e-9);
  CHECK(potentials_objective(prob, sol.potentials) == doctest::Approx(sol.value).epsilon(1e-12));
  CHECK(coupling_cost(prob, sol.coupling) == doctest::Approx(sol.value).epsilon(1e-12));
  CHECK(coupling_check(sol.coupling, prob.mu(), prob.nu(), {sol.potentials}));
  CHECK(sol.basis.size() == prob.n() + prob.m() - 1);
}

TransportProblem random_instance(corpus::Rng& rng, std::size_t n, std::size_t m) {
  Matrix cost(n, std::vector<double>(m));
  for (auto& row : cost) {
    for (auto& c : row) c = corpus::uniform_int(rng, 0, 32);
  }
  std::vector<double> mu(n), nu(m, 0.0);
  for (auto& v : mu) v = corpus::uniform_int(rng, 0, 8);
  mu[0] += 1;
  double total = 0;
  for (double v : mu) total += v;
  // Split the same integer total over the targets.
  for (int unit = 0; unit < static_cast<int>(total); ++unit) nu[corpus::uniform_size(rng, 0, m - 1)] += 1;
  return TransportProblem(cost, mu, nu);
}

}  // namespace

TEST_CASE("transport examples") {
  const TransportProblem half(kSwap, {0.5, 0.5}, {0.5, 0.5});
  const auto s = solve_transport(half);
  CHECK(s.value == 0.0);
  CHECK(s.coupling.q == std::vector<double>{0.5, 0, 0, 0.5});
  check_optimal(half, s);

  const TransportProblem corner(kSwap, {1, 0}, {0, 1});
  const auto c = solve_transport(corner);
  CHECK(c.value == 1.0);
  CHECK(c.potentials.psi[0] + c.potentials.phi[1] == doctest::Approx(1.0));
  check_optimal(corner, c);
  CHECK(oracle::transport_lp_min(kSwap, {1, 0}, {0, 1}) == doctest::Approx(1.0));

  const TransportProblem line({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, {1, 1, 1}, {1, 1, 1});
  CHECK(solve_transport(line).value == 0.0);

  const auto one = kantorovich_gap_report(TransportProblem({{3}}, {2}, {2}));
  CHECK(one.gap == 0.0);
  CHECK(one.dual == 6.0);
}

TEST_CASE("transport validation") {
  CHECK_ERRC(TransportProblem(kSwap, {1, 0}, {0, 2}), Errc::kUnbalanced);
  CHECK_ERRC(TransportProblem(kSwap, {-1, 2}, {0, 1}), Errc::kInvalidArgument);
  CHECK_ERRC(TransportProblem({{0, 1}}, {1, 0}, {0, 1}), Errc::kDimensionMismatch);
  CHECK_NOTHROW(TransportProblem(kSwap, {0.1, 0.2}, {0.3, 0.0}));
}

TEST_CASE("c-transform examples") {
  CHECK(c_transform(std::vector<double>{0, 0}, kSwap) == std::vector<double>{0, 0});
  CHECK(c_transform(std::vector<double>{1, 0}, kSwap) == std::vector<double>{-1, 0});
  CHECK(cbar_transform(std::vector<double>{-1, 0}, kSwap) == std::vector<double>{1, 0});
  corpus::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto prob = random_instance(rng, corpus::uniform_size(rng, 1, 6), corpus::uniform_size(rng, 1, 6));
    const auto sol = solve_transport(prob);
    const Matrix C = prob.cost_matrix();
    const Potentials tight{sol.potentials.psi, c_transform(sol.potentials.psi, C)};
    CHECK(potentials_objective(prob, tight) == doctest::Approx(sol.value).epsilon(1e-12));
    // Arbitrary start: sweeps never decrease the objective and settle after two.
    std::vector<double> psi(prob.n());
    for (auto& v : psi) v = corpus::quarter(rng, -40, 40);
    const auto phi1 = c_transform(psi, C);
    const Potentials p1{psi, phi1};
    CHECK(max_feasibility_violation(prob, p1) <= 0.0);
    const auto psi2 = cbar_transform(phi1, C);
    const Potentials p2{psi2, phi1};
    CHECK(potentials_objective(prob, p2) >= potentials_objective(prob, p1));
    const auto phi3 = c_transform(psi2, C);
    CHECK(phi3 == phi1);
    CHECK(cbar_transform(phi3, C) == psi2);
    CHECK(potentials_objective(prob, p2) <= sol.value + 1e-9);
  }
}

TEST_CASE("small instances match the vertex oracle") {
  corpus::Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = corpus::uniform_size(rng, 1, 3), m = corpus::uniform_size(rng, 1, 3);
    const auto prob = random_instance(rng, n, m);
    const auto rep = kantorovich_gap_report(prob);
    CHECK(rep.strong_duality);
    CHECK(rep.slack_violations == 0);
    CHECK(rep.feasibility_violations == 0);
    CHECK(rep.dual == doctest::Approx(oracle::transport_vertex_min(prob.cost_matrix(), prob.mu(), prob.nu())).epsilon(1e-12));
    check_optimal(prob, rep.solution);
  }
}

TEST_CASE("medium instances match the LP oracle") {
  corpus::Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const auto prob = random_instance(rng, corpus::uniform_size(rng, 2, 7), corpus::uniform_size(rng, 2, 7));
    const auto sol = solve_transport(prob);
    CHECK(sol.value == doctest::Approx(oracle::transport_lp_min(prob.cost_matrix(), prob.mu(), prob.nu())).epsilon(1e-9));
    check_optimal(prob, sol);
  }
}

TEST_CASE("sorted atoms on the line match in order") {
  corpus::Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = corpus::uniform_size(rng, 1, 12);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = corpus::quarter(rng, -40, 40);
    for (auto& v : y) v = corpus::quarter(rng, -40, 40);
    Matrix cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::abs(x[i] - y[j]);
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double closed = 0;
    for (std::size_t k = 0; k < n; ++k) closed += std::abs(x[k] - y[k]);
    const std::vector<double> w(n, 1.0);
    CHECK(solve_transport(TransportProblem(cost, w, w)).value == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("weak duality between feasible pairs") {
  corpus::Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto prob = random_instance(rng, corpus::uniform_size(rng, 1, 6), corpus::uniform_size(rng, 1, 6));
    std::vector<double> psi(prob.n());
    for (auto& v : psi) v = corpus::quarter(rng, -40, 40);
    const Potentials pot{psi, c_transform(psi, prob.cost_matrix())};
    // Any feasible coupling: the product of the marginals scaled by the total.
    double total = 0;
    for (double v : prob.mu()) total += v;
    Coupling q{prob.n(), prob.m(), std::vector<double>(prob.n() * prob.m())};
    for (std::size_t i = 0; i < prob.n(); ++i) {
      for (std::size_t j = 0; j < prob.m(); ++j) q.q[i * prob.m() + j] = prob.mu()[i] * prob.nu()[j] / total;
    }
    CHECK(potentials_objective(prob, pot) <= coupling_cost(prob, q) + 1e-9);
  }
}

TEST_CASE("coupling check examples") {
  const Coupling id{2, 2, {0.5, 0, 0, 0.5}};
  const std::vector<double> h{0.5, 0.5};
  CHECK(coupling_check(id, h, h, {{{3, -1}, {2, 7}}}));
  CHECK_FALSE(coupling_check({2, 2, {0.75, -0.25, 0, 0.5}}, h, h, {}));
  CHECK_FALSE(coupling_check({2, 2, {0.5, 0.25, 0, 0.25}}, h, h, {}));
  // Sub-marginal plans: the pairing dominates for nonnegative potentials.
  const Coupling sub{2, 2, {0.25, 0, 0, 0.25}};
  const Potentials pos{{1, 2}, {0.5, 3}};
  CHECK(pairing_gap(sub, h, h, pos) >= 0.0);
  CHECK(pairing_gap(id, h, h, pos) == 0.0);
}

TEST_CASE("cost CSV") {
  CHECK(parse_cost_csv("0,1\n1,0\n") == kSwap);
  CHECK(parse_cost_csv("1.5, 2\r\n3,4") == Matrix{{1.5, 2}, {3, 4}});
  CHECK_ERRC(parse_cost_csv("1,2\n3\n"), Errc::kDimensionMismatch);
  CHECK_ERRC(parse_cost_csv("1,x\n"), Errc::kInvalidArgument);
  CHECK_ERRC(parse_cost_csv(""), Errc::kEmptyDomain);
  CHECK(load_cost_csv("scenarios/cost_2x2.csv") == kSwap);
  CHECK_ERRC(load_cost_csv("scenarios/no_such_file.csv"), Errc::kInvalidArgument);
}

TEST_CASE("conic LP closed form against the LP oracle") {
  const auto r = conic_lp_dual({{1, 2}, {3, 4}});
  CHECK(r.primal == ExtReal::finite(11));
  CHECK(r.dual == ExtReal::finite(11));
  CHECK(r.q_star == std::vector<double>{1, 2});
  const auto neg = conic_lp_dual({{1, -1}, {3, 4}});
  CHECK(neg.primal == ExtReal::minus_inf());
  CHECK(neg.dual == ExtReal::minus_inf());
  const auto zero = conic_lp_dual({{0, 0}, {3, 4}});
  CHECK(zero.primal == ExtReal::finite(0));
  CHECK(zero.q_star == std::vector<double>{0, 0});

  corpus::Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = corpus::uniform_size(rng, 1, 6);
    ConicLP lp{std::vector<double>(n), std::vector<double>(n)};
    for (auto& v : lp.pi) v = corpus::quarter(rng, 0, 16);
    for (auto& v : lp.c) v = corpus::quarter(rng, -16, 16);
    // f = c + s with slack s >= 0 and f split as f+ - f-.
    oracle::Mat A(n, std::vector<double>(3 * n, 0.0));
    std::vector<double> cost(3 * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      A[k][k] = 1;
      A[k][n + k] = -1;
      A[k][2 * n + k] = -1;
      cost[k] = lp.pi[k];
      cost[n + k] = -lp.pi[k];
    }
    const auto res = oracle::lp_min(A, lp.c, cost);
    const auto rep = conic_lp_dual(lp);
    REQUIRE(res.status == oracle::LpStatus::kOptimal);
    CHECK(rep.primal.value() == doctest::Approx(res.value).epsilon(1e-12));
    CHECK(rep.primal == rep.dual);
    CHECK(conic_neg_conjugate(lp, lp.pi) == rep.dual);
    std::vector<double> off = lp.pi;
    off[0] += 0.25;
    CHECK(conic_neg_conjugate(lp, off) == ExtReal::minus_inf());
  }
}
