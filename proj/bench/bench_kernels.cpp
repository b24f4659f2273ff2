// Reference vs serial vs parallel timings for the conjugation kernels.
//
//   absconv_bench [points] [members] [rows] [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <random>

#include "absconv/families.hpp"
#include "absconv/lagrangian.hpp"
#include "absconv/reference.hpp"

using namespace absconv;

namespace {

double best_ms(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double ref, double ser, double par) {
  std::printf("%-14s %12.2f %12.2f %12.2f %9.2fx\n", name, ref, ser, par, ser / par);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
  const std::size_t slopes = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 400;
  const std::size_t nx = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 64;
  if (argc > 4) omp_set_num_threads(std::atoi(argv[4]));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto Y = std::make_shared<const FiniteMetricSpace>(uniform_line(-1, 1, n));
  std::vector<double> f(n);
  for (auto& v : f) v = u(rng);
  const GridFn fn = GridFn::from_reals(f);
  GridSpec spec;
  spec.curvatures = {0, 1, 4};
  spec.slopes = slope_lattice(1, 8, slopes);
  const DualGrid grid = make_dual_grid(ElemFamily::quad_minus(Y), spec);

  std::vector<ExtReal> p(nx * n);
  for (auto& v : p) v = ExtReal::finite(u(rng));
  const PerturbationProblem prob(nx, Y, std::move(p), n / 2);

  std::printf("|Y| = %zu, grid = %zu, |X| = %zu, threads = %d\n", n, grid.size(), nx, omp_get_max_threads());
  std::printf("%-14s %12s %12s %12s %10s\n", "kernel", "reference ms", "serial ms", "parallel ms", "speedup");

  row("conjugate", best_ms([&] { reference::conjugate_transform(fn, grid); }),
      best_ms([&] { conjugate_transform(fn, grid, Exec::kSerial); }),
      best_ms([&] { conjugate_transform(fn, grid, Exec::kParallel); }));
  row("biconjugate", best_ms([&] { reference::biconjugate(fn, grid); }),
      best_ms([&] { biconjugate(fn, grid, Exec::kSerial); }),
      best_ms([&] { biconjugate(fn, grid, Exec::kParallel); }));
  row("lagrangian", best_ms([&] { reference::lagrangian(prob, grid); }, 1),
      best_ms([&] { build_lagrangian(prob, grid, Exec::kSerial); }),
      best_ms([&] { build_lagrangian(prob, grid, Exec::kParallel); }));

  const bool same = conjugate_transform(fn, grid, Exec::kSerial) == conjugate_transform(fn, grid, Exec::kParallel) &&
                    build_lagrangian(prob, grid, Exec::kSerial).L == build_lagrangian(prob, grid, Exec::kParallel).L;
  std::printf("serial and parallel outputs identical: %s\n", same ? "yes" : "no");
  return same ? 0 : 1;
}
