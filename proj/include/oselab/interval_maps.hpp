#pragma once

#include <concepts>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include "oselab/bigfloat.hpp"
#include "oselab/errors.hpp"

namespace oselab {

// Exact fraction, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

// Constrained templates: unconstrained Rational overloads would make the
// compiler probe matrix-to-rational conversions, which boost rejects with
// a hard error instead of SFINAE.
template <typename T>
  requires std::same_as<T, Rational>
double to_double(const T& r) {
  return static_cast<double>(r);
}
template <typename T>
  requires std::same_as<T, Rational>
BigFloat to_big(const T& r) {
  return BigFloat(boost::multiprecision::numerator(r)) / BigFloat(boost::multiprecision::denominator(r));
}

struct UniformPartition {
  int cells = 1;
  bool circle = true;

  Rational cell_width() const { return Rational(1, cells); }
  Rational left_endpoint(int j) const { return Rational(j, cells); }
  bool operator==(const UniformPartition&) const = default;
};

// Dense matrix of exact rationals, used for transfer matrices and
// characteristic-polynomial oracles.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  static RationalMatrix identity(int n);

  Eigen::MatrixXd as_double() const;
  BigMatrix as_big() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

// Piecewise-affine map on the unit interval/circle, affine on each cell of
// a uniform partition. Expanding (|slope| > 1 on every cell), with one
// carve-out: pure nonzero grid rotations are representable so that the
// rotation factor maps and their permutation matrices stay in this type.
class PiecewiseAffineMap {
 public:
  PiecewiseAffineMap(UniformPartition partition, std::vector<Rational> slopes, std::vector<Rational> offsets);

  const UniformPartition& partition() const { return partition_; }
  const Rational& slope(int cell) const { return slopes_.at(cell); }
  const Rational& offset(int cell) const { return offsets_.at(cell); }
  bool is_rotation() const { return rotation_; }

  // x in [0,1); cells are right-open so the cell lookup is unambiguous.
  Rational evaluate(const Rational& x) const;

  // Cells (0-based) whose union is the exact image of the given cell.
  // Throws NotMarkov when an image endpoint falls strictly inside a cell.
  std::vector<int> markov_image(int cell) const;

  bool operator==(const PiecewiseAffineMap&) const = default;

 private:
  UniformPartition partition_;
  std::vector<Rational> slopes_;
  std::vector<Rational> offsets_;
  bool rotation_ = false;
};

// 0/1 transition matrix: entry (i,j) = 1 iff the image of cell j covers cell i.
Eigen::MatrixXi transition_matrix(const PiecewiseAffineMap& map);

// Column-stochastic transfer matrix, p(i,j) = gamma(i,j)/|a_j|.
RationalMatrix pf_matrix(const PiecewiseAffineMap& map);

// True iff every row of the transfer matrix sums to 1; on a uniform
// partition this is Lebesgue invariance.
bool preserves_lebesgue(const PiecewiseAffineMap& map);

// m(U ∩ T^{-1}V) / m(U) for cell sets U, V, exact.
Rational invariant_mass_ratio(const PiecewiseAffineMap& map, const std::set<int>& source_cells,
                              const std::set<int>& target_cells);

enum class MapFamily { T123, S, S1to6, T4to6 };

// The nine-cell circle families: slope 3 everywhere, offsets on the 1/9
// grid, composed rotations resolved into per-cell offset tables.
PiecewiseAffineMap build_family_map(MapFamily family, int index);

// By name: "T1".."T6", "S", "S1".."S6", "rho".
PiecewiseAffineMap build_named_map(const std::string& name);

// Rotation of the nine-cell circle by thirds (permutation transfer matrix).
PiecewiseAffineMap rotation_by_thirds(int thirds);

}  // namespace oselab
