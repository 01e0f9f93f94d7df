#pragma once

#include <cstdint>
#include <vector>

#include "oselab/cocycle.hpp"
#include "oselab/oseledets.hpp"

namespace oselab {

struct RandomCocycleSpec {
  int dimension = 4;
  int generator_count = 2;
  int singular_count = 1;  // generators projected to rank d-1
  double entry_low = -1.0;
  double entry_high = 1.0;
  std::uint64_t seed = 1;
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic cocycle from the spec: entries from a seeded hash, the
// first `singular_count` generators with their smallest singular value
// zeroed, driven by a two-sided i.i.d. symbol stream hashed from
// (seed, index).
MatrixCocycle generate_random_cocycle(const RandomCocycleSpec& spec);

// Independent exponent estimate by repeated thin-QR pushes of a frame.
// Directions whose diagonal keeps collapsing relative to the incoming
// column are reported as bottom.
std::vector<double> qr_exponent_oracle(const MatrixCocycle& cocycle, int n_steps, std::int64_t base = 0);

struct PropertyCheck {
  bool pass = true;
  double margin = 0.0;           // worst observed value
  std::int64_t worst_base = 0;
};

struct SplittingReport {
  std::vector<std::vector<int>> multiplicities;  // per base in the window
  PropertyCheck multiplicity_stable;
  PropertyCheck dimension_sum;        // margin = |sum - d| worst case
  PropertyCheck direct_sum;           // margin = worst condition number
  PropertyCheck equivariance;         // margin = worst residual
  PropertyCheck growth_rates;         // margin = worst regression deviation

  bool all_pass() const {
    return multiplicity_stable.pass && dimension_sum.pass && direct_sum.pass && equivariance.pass &&
           growth_rates.pass;
  }
};

struct SplittingTolerances {
  double direct_sum_condition = 1e6;
  double equivariance = 1e-6;
  double growth_rate = 1e-2;
};

SplittingReport verify_splitting(const MatrixCocycle& cocycle, int depth, int push, int window,
                                 std::int64_t base = 0, const SplittingTolerances& tol = {});

struct BackwardRow {
  int depth = 0;
  std::vector<double> exponents;  // sorted log sigma / depth of the backward product
};

struct BackwardCheck {
  std::vector<BackwardRow> rows;
  std::vector<double> forward_exponents;  // Gram-root exponents at the deepest depth
  // Sup distance over finite entries between successive rows.
  std::vector<double> successive_gaps;
  double final_gap_to_forward = 0.0;
};

BackwardCheck backward_singular_check(const MatrixCocycle& cocycle, const std::vector<int>& depths,
                                      std::int64_t base = 0);

}  // namespace oselab
