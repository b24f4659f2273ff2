#pragma once

// Straightforward serial implementations kept as a cross-check for the
// table-driven parallel kernels. They evaluate every elementary function
// through eval_elementary and do all arithmetic in ExtReal, so they share no
// code path with kernels.cpp beyond the family definitions.

#include <cstddef>
#include <span>
#include <vector>

#include "absconv/families.hpp"

namespace absconv {
class PerturbationProblem;
}

namespace absconv::reference {

std::vector<ExtReal> conjugate_transform(const GridFn& f, const DualGrid& dual);

GridFn biconjugate(const GridFn& f, const DualGrid& dual);

/// Row-major |X| x |grid| table of L(x, psi_j) = psi_j(y0) - p*_x(psi_j).
std::vector<ExtReal> lagrangian(const PerturbationProblem& prob, const DualGrid& psi_grid);

/// max over t in [0, 1] of min_x (t phi1(x) + (1 - t) phi2(x)), evaluated at
/// every pairwise crossing of the lines (including same-sign pairs).
double envelope_max(std::span<const double> phi1, std::span<const double> phi2);

}  // namespace absconv::reference
