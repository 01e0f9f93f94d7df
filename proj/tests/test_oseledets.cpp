#include "doctest.h"

#include <cmath>

#include "oselab/oseledets.hpp"

using namespace oselab;

namespace {

std::vector<RationalMatrix> cycle_family_matrices() {
  std::vector<RationalMatrix> gens;
  for (int i = 1; i <= 3; ++i) gens.push_back(pf_matrix(build_named_map("T" + std::to_string(i))));
  return gens;
}

std::vector<RationalMatrix> six_family_matrices() {
  std::vector<RationalMatrix> gens;
  for (int i = 1; i <= 6; ++i) gens.push_back(pf_matrix(build_named_map("S" + std::to_string(i))));
  return gens;
}

BigMatrix diag3(double a, double b, double c) {
  BigMatrix m = BigMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_CASE("orthonormalization keeps the span") {
  BigMatrix frame(3, 2);
  frame << 1, 1, 1, 2, 0, 5;
  const SubspaceBasis q = orthonormalize(frame);
  const BigMatrix gram = q.columns.transpose() * q.columns;
  CHECK(to_double((gram - BigMatrix::Identity(2, 2)).cwiseAbs().maxCoeff()) < 1e-50);
  CHECK(subspace_distance(q, orthonormalize(frame * BigFloat(2))) < 1e-50);
}

TEST_CASE("eigenvalue clustering") {
  const std::vector<EigenGroup> one = eigenspace_groups(BigMatrix::Identity(4, 4));
  REQUIRE(one.size() == 1);
  CHECK(one[0].value == 1.0);
  CHECK(one[0].basis.dim() == 4);

  const std::vector<EigenGroup> two = eigenspace_groups(diag3(0.9, 0.9, 0.1), 1e-3);
  REQUIRE(two.size() == 2);
  CHECK(two[0].basis.dim() == 2);
  CHECK(two[1].basis.dim() == 1);

  const std::vector<EigenGroup> dead = eigenspace_groups(diag3(1.0, 0.0, 0.0));
  REQUIRE(dead.size() == 2);
  CHECK(dead[0].value == 1.0);
  CHECK(dead[1].value == 0.0);
  CHECK(dead[1].basis.dim() == 2);

  // Sign convention: largest-magnitude entry of each column positive.
  for (const auto& g : two) {
    for (int c = 0; c < g.basis.dim(); ++c) {
      BigFloat best = 0;
      Eigen::Index at = 0;
      for (Eigen::Index r = 0; r < 3; ++r)
        if (abs(g.basis.columns(r, c)) > best) {
          best = abs(g.basis.columns(r, c));
          at = r;
        }
      CHECK(g.basis.columns(at, c) > 0);
    }
  }

  BigMatrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(eigenspace_groups(skew), NotSymmetric);
  CHECK_THROWS_AS(eigenspace_groups(BigMatrix::Zero(2, 3)), NotSymmetric);
}

TEST_CASE("principal-angle distances") {
  BigMatrix e1(2, 1), e2(2, 1), mixed(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  mixed << 1, 1;
  CHECK(subspace_distance(SubspaceBasis{e1}, SubspaceBasis{e1}) == 0.0);
  CHECK(subspace_distance(SubspaceBasis{e1}, SubspaceBasis{e2}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(subspace_distance(SubspaceBasis{e1}, orthonormalize(mixed)) ==
        doctest::Approx(2 * std::sin(std::atan(1.0) / 2)).epsilon(1e-12));
  CHECK_THROWS_AS(subspace_distance(SubspaceBasis{e1}, SubspaceBasis{BigMatrix::Identity(3, 1)}),
                  DimensionMismatch);
}

TEST_CASE("pushforward on an autonomous diagonal cocycle") {
  const MatrixCocycle c = make_cocycle(std::vector<BigMatrix>{diag3(2.0, 1.0, 0.5)}, Driver::periodic({1}));
  const OseledetsApproximation approx = pushforward_subspaces(c, 12, 6, 0);
  REQUIRE(approx.groups.size() == 3);
  CHECK(approx.dimension() == 3);
  const double expected[3] = {std::log(2.0), 0.0, -std::log(2.0)};
  for (int j = 0; j < 3; ++j) {
    CHECK(approx.groups[j].exponent == doctest::Approx(expected[j]).epsilon(1e-12));
    CHECK(approx.groups[j].multiplicity == 1);
    CHECK(approx.groups[j].conditioning == doctest::Approx(1.0).epsilon(1e-12));
    BigMatrix axis = BigMatrix::Zero(3, 1);
    axis(j, 0) = 1;
    CHECK(subspace_distance(approx.groups[j].basis, SubspaceBasis{axis}) < 1e-40);
  }
  CHECK(approx.flag_space(0).dim() == 3);
  CHECK(approx.flag_space(2).dim() == 1);
  CHECK_THROWS_AS(approx.flag_space(3), IndexOutOfRange);
  CHECK_THROWS_AS(pushforward_subspaces(c, 4, 6, 0), IndexOutOfRange);

  // Push 0 is just the eigenspace decomposition at the base.
  const OseledetsApproximation raw = pushforward_subspaces(c, 12, 0, 0);
  for (int j = 0; j < 3; ++j) CHECK(subspace_distance(raw.groups[j].basis, approx.groups[j].basis) < 1e-40);
}

TEST_CASE("singular directions form the bottom group") {
  const MatrixCocycle c = make_cocycle(std::vector<BigMatrix>{diag3(2.0, 1.0, 0.0)}, Driver::periodic({1}));
  const OseledetsApproximation approx = pushforward_subspaces(c, 10, 5, 0);
  REQUIRE(approx.groups.size() == 3);
  CHECK(is_bottom(approx.groups[2].exponent));
  CHECK(approx.groups[2].multiplicity == 1);
  BigMatrix axis = BigMatrix::Zero(3, 1);
  axis(2, 0) = 1;
  CHECK(subspace_distance(approx.groups[2].basis, SubspaceBasis{axis}) < 1e-40);
}

TEST_CASE("zero cocycle keeps a full bottom complement") {
  BigMatrix left = BigMatrix::Zero(2, 2), right = BigMatrix::Zero(2, 2);
  left(0, 0) = 1;
  right(1, 1) = 1;
  // Alternating complementary projections annihilate everything in two steps.
  const MatrixCocycle c = make_cocycle(std::vector<BigMatrix>{left, right}, Driver::periodic({1, 2}));
  const OseledetsApproximation approx = pushforward_subspaces(c, 8, 4, 0);
  REQUIRE(approx.groups.size() == 1);
  CHECK(is_bottom(approx.groups[0].exponent));
  CHECK(approx.groups[0].multiplicity == 2);
}

TEST_CASE("pushed groups stay equivariant for the three-map cycle") {
  const MatrixCocycle c = make_cocycle(cycle_family_matrices(), Driver::periodic({1, 2, 3}));
  std::vector<OseledetsApproximation> approx;
  for (int b = 0; b < 3; ++b) approx.push_back(pushforward_subspaces(c, 36, 18, b));

  for (const auto& a : approx) {
    CHECK(a.dimension() == 9);
    REQUIRE(a.groups.size() == 4);
    CHECK(a.groups[1].multiplicity == 1);
    CHECK(a.groups[3].multiplicity == 6);
    // Direct-sum property: stacked bases stay well conditioned.
    BigMatrix stacked(9, 9);
    int at = 0;
    for (const auto& g : a.groups) {
      stacked.middleCols(at, g.multiplicity) = g.basis.columns;
      at += g.multiplicity;
    }
    Eigen::JacobiSVD<BigMatrix> svd(stacked);
    CHECK(to_double(svd.singularValues()(8)) > 1e-6);
  }

  const std::vector<double> res = equivariance_residual(approx[0], approx[1], c);
  REQUIRE(res.size() == 3);
  for (double r : res) CHECK(r < 1e-6);

  // Pairing base 0 with base 2 skips a rotation; the second space moves by
  // a third of the circle, so the mismatch is order one.
  const std::vector<double> wrong = equivariance_residual(approx[0], approx[2], c);
  CHECK(wrong[1] > 0.1);
}

TEST_CASE("closed-form invariant family of the six-map cocycle") {
  const MatrixCocycle c = make_cocycle(six_family_matrices(), coherent_sequence_driver());
  const OseledetsApproximation a0 = pushforward_subspaces(c, 30, 15, 0);
  const OseledetsApproximation a1 = pushforward_subspaces(c, 30, 15, 1);
  const std::vector<double> res = equivariance_residual(a0, a1, c);
  REQUIRE(res.size() >= 2);
  CHECK(res[1] < 1e-8);
}

TEST_CASE("pushforward approximations are Cauchy in the push depth") {
  const MatrixCocycle c = make_cocycle(cycle_family_matrices(), Driver::periodic({1, 2, 3}));
  auto second_space = [&](int push) {
    return pushforward_subspaces(c, 2 * push, push, 0).groups[1].basis;
  };
  const SubspaceBasis deep = second_space(12);
  const double d3 = subspace_distance(second_space(3), deep);
  const double d6 = subspace_distance(second_space(6), deep);
  const double d9 = subspace_distance(second_space(9), deep);
  CHECK(d3 > d6);
  CHECK(d6 > d9);
  CHECK(d9 < 1e-3);
}

TEST_CASE("delta diagnostic vanishes for an autonomous cocycle") {
  std::vector<RationalMatrix> gen = {pf_matrix(build_named_map("S"))};
  const MatrixCocycle c = make_cocycle(gen, Driver::periodic({1}));
  // Finite-push transients decay geometrically; push 20 is well past them.
  CHECK(delta_diagnostic(c, UniformPartition{9, true}, 20) < 1e-12);
  CHECK_THROWS_AS(delta_diagnostic(c, UniformPartition{9, true}, 0), IndexOutOfRange);

  const MatrixCocycle degenerate = make_cocycle(std::vector<BigMatrix>{diag3(2.0, 1.0, 1.0)}, Driver::periodic({1}));
  CHECK_THROWS_AS(delta_diagnostic(degenerate, UniformPartition{3, true}, 2), GroupMismatch);
}

TEST_CASE("group mismatch between bases is detected") {
  const MatrixCocycle c = make_cocycle(cycle_family_matrices(), Driver::periodic({1, 2, 3}));
  const OseledetsApproximation fine = pushforward_subspaces(c, 24, 12, 0);
  const OseledetsApproximation merged = pushforward_subspaces(c, 24, 12, 1, 2.0);
  CHECK_THROWS_AS(equivariance_residual(fine, merged, c), GroupMismatch);
}
