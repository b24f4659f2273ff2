#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Data-parallel sup/minus kernels shared by conjugation and the Lagrangian.
//
// All kernels work on IEEE doubles whose infinities encode the extended-real
// tags. Inputs never contain NaN and the elementary values are finite, so
// every subtraction below stays inside the ExtReal contract. Reductions are
// max-only, which makes the serial and parallel paths bit-identical.

namespace absconv {

enum class Exec { kSerial, kParallel };

namespace kernels {

/// Row-major table: entry (j, x) is the j-th elementary function at point x.
struct ElemTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t j, std::size_t x) const { return values[j * cols + x]; }
  std::span<const double> row(std::size_t j) const { return {values.data() + j * cols, cols}; }
};

/// out[j] = max_x (table(j, x) - f[x]).
std::vector<double> row_sup_minus(const ElemTable& table, std::span<const double> f, Exec exec);

/// out[x] = max_j (table(j, x) - g[j]).
std::vector<double> col_sup_minus(const ElemTable& table, std::span<const double> g, Exec exec);

/// p is row-major nx x table.cols. out[x * table.rows + j] = max_y (table(j, y) - p[x, y]).
std::vector<double> partial_conjugates(const ElemTable& table, std::span<const double> p,
                                       std::size_t nx, Exec exec);

}  // namespace kernels
}  // namespace absconv
