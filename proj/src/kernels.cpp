#include "absconv/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace absconv::kernels {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<double> row_sup_minus(const ElemTable& table, std::span<const double> f, Exec exec) {
  const auto rows = static_cast<std::int64_t>(table.rows);
  const std::size_t cols = table.cols;
  std::vector<double> out(table.rows, kNegInf);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::int64_t j = 0; j < rows; ++j) {
    const double* phi = table.values.data() + static_cast<std::size_t>(j) * cols;
    double best = kNegInf;
    for (std::size_t x = 0; x < cols; ++x) best = std::max(best, phi[x] - f[x]);
    out[static_cast<std::size_t>(j)] = best;
  }
  return out;
}

std::vector<double> col_sup_minus(const ElemTable& table, std::span<const double> g, Exec exec) {
  const auto cols = static_cast<std::int64_t>(table.cols);
  const std::size_t rows = table.rows;
  std::vector<double> out(table.cols, kNegInf);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::int64_t x = 0; x < cols; ++x) {
    double best = kNegInf;
    for (std::size_t j = 0; j < rows; ++j) {
      best = std::max(best, table.values[j * table.cols + static_cast<std::size_t>(x)] - g[j]);
    }
    out[static_cast<std::size_t>(x)] = best;
  }
  return out;
}

std::vector<double> partial_conjugates(const ElemTable& table, std::span<const double> p,
                                       std::size_t nx, Exec exec) {
  const std::size_t rows = table.rows;
  const std::size_t cols = table.cols;
  const auto cells = static_cast<std::int64_t>(nx * rows);
  std::vector<double> out(nx * rows, kNegInf);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const std::size_t x = static_cast<std::size_t>(cell) / rows;
    const std::size_t j = static_cast<std::size_t>(cell) % rows;
    const double* psi = table.values.data() + j * cols;
    const double* px = p.data() + x * cols;
    double best = kNegInf;
    for (std::size_t y = 0; y < cols; ++y) best = std::max(best, psi[y] - px[y]);
    out[static_cast<std::size_t>(cell)] = best;
  }
  return out;
}

}  // namespace absconv::kernels
