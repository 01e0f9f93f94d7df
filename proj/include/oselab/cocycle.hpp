#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "oselab/bigfloat.hpp"
#include "oselab/drivers.hpp"
#include "oselab/interval_maps.hpp"

namespace oselab {

// Value used for exponents of directions killed by the cocycle.
inline constexpr double kBottomExponent = -std::numeric_limits<double>::infinity();
inline bool is_bottom(double x) { return x == kBottomExponent; }

// Generator table (1-based symbols) paired with a driving sequence.
// Generators are held at working precision so that exact rational inputs
// stay exact far beyond double range.
struct MatrixCocycle {
  std::vector<BigMatrix> generators;
  Driver driver;
  int dimension = 0;

  const BigMatrix& generator_at(std::int64_t i) const;
};

MatrixCocycle make_cocycle(std::vector<RationalMatrix> generators, Driver driver);
MatrixCocycle make_cocycle(std::vector<Eigen::MatrixXd> generators, Driver driver);
MatrixCocycle make_cocycle(std::vector<BigMatrix> generators, Driver driver);

// Map-valued counterpart, used for slope bookkeeping and exact transfer
// operator steps.
struct MapCocycle {
  std::vector<PiecewiseAffineMap> generators;
  Driver driver;

  const PiecewiseAffineMap& generator_at(std::int64_t i) const;
  MatrixCocycle matrix_cocycle() const;
};

// n-step product with the newest factor on the left, with a separated log
// scale so deep products cannot overflow.
struct ScaledMatrix {
  BigMatrix matrix;
  double log_scale = 0.0;
};
ScaledMatrix scaled_product(const MatrixCocycle& cocycle, int n, std::int64_t base);
Eigen::MatrixXd product(const MatrixCocycle& cocycle, int n, std::int64_t base);

// (A^T A)^(1/2M) of the depth-M product, via SVD. Singular values under
// the absolute floor, or under the relative noise cutoff, become exact
// zero eigenvalues.
BigMatrix gram_root(const MatrixCocycle& cocycle, int depth, std::int64_t base,
                    double underflow_floor = 1e-300);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  // descending modulus
  std::vector<double> moduli;
  std::vector<int> multiplicities;  // grouping of near-equal moduli
};
SpectrumReport matrix_spectrum(const BigMatrix& m, double group_tol = 1e-9);
SpectrumReport matrix_spectrum(const RationalMatrix& m, double group_tol = 1e-9);

struct LyapunovEstimate {
  std::vector<double> exponents;  // strictly decreasing, bottom last
  std::vector<int> multiplicities;
  int depth = 0;
  std::int64_t base = 0;
};
LyapunovEstimate lyapunov_spectrum(const MatrixCocycle& cocycle, int depth, std::int64_t base,
                                   double gap_tol = 1e-6);

struct PeriodicExponents {
  SpectrumReport spectrum;            // of the one-period product
  std::vector<double> exponents;      // log|eta| / period, descending
  std::vector<int> multiplicities;
};
// Exact eigen-analysis of the one-period product; the driver must be periodic.
PeriodicExponents periodic_exponents(const MatrixCocycle& cocycle, int period);

// -(1/n) sum of log slopes along the window; requires every generator map
// to have a single absolute slope.
double essential_bound(const MapCocycle& cocycle, int n_window, std::int64_t base);

// Finite exponents strictly inside (theta, 0).
std::vector<double> exceptional_exponents(const LyapunovEstimate& estimate, double theta);

}  // namespace oselab
