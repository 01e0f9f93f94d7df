#pragma once

#include <set>
#include <vector>

#include "oselab/cocycle.hpp"
#include "oselab/interval_maps.hpp"

namespace oselab {

// Function constant on each cell of a uniform partition (possibly a
// refinement of the map partition). Scalar is double for spectral data
// and Rational for the exact transfer-operator paths.
template <typename Scalar>
struct StepValues {
  UniformPartition partition;
  std::vector<Scalar> values;
};

using StepFunction = StepValues<double>;
using RationalStep = StepValues<Rational>;

template <typename Scalar>
Scalar l1_norm(const StepValues<Scalar>& f);
template <typename Scalar>
Scalar variation(const StepValues<Scalar>& f);
template <typename Scalar>
Scalar bv_norm(const StepValues<Scalar>& f);

// Cell means on a coarser partition; the input partition must refine it.
template <typename Scalar>
StepValues<Scalar> project_cell_means(const StepValues<Scalar>& f, const UniformPartition& coarse);

// One exact transfer-operator step: (Pf)(x) = sum over preimage branches
// of f(y)/|slope|. Requires f's grid fine enough that every branch image
// of a grid cell stays inside one grid cell.
RationalStep pf_apply_exact(const PiecewiseAffineMap& map, const RationalStep& f);

struct DecayCheck {
  Rational measured;  // var of the n-step image
  Rational bound;     // s_max-free bound: var(f) * s / prod of slopes
};
// f must have zero mean on every cell of the map partition.
DecayCheck decay_check(const RationalStep& f, const MapCocycle& cocycle, int n, std::int64_t base = 0);

// Share of the positive mass of w carried by the given cells.
double coherent_overlap(const StepFunction& w, const std::set<int>& cells);

enum class JExample { Cycle, SixFold };

// Third-of-circle interval attached to a driver symbol, as cells of the
// nine-cell partition.
std::set<int> j_family(JExample example, int symbol);

}  // namespace oselab
