#include "doctest.h"

#include "oracle.hpp"
#include "oselab/interval_maps.hpp"
#include "oselab/met.hpp"
#include "oselab/stepfn.hpp"

using namespace oselab;

namespace {

RationalMatrix matrix_power(const RationalMatrix& m, int k) {
  RationalMatrix out = RationalMatrix::identity(m.rows());
  for (int i = 0; i < k; ++i) out = m * out;
  return out;
}

bool matrices_equal(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

const std::vector<std::string> kNineCellNames = {"T1", "T2", "T3", "T4", "T5", "T6", "S",
                                                 "S1", "S2", "S3", "S4", "S5", "S6"};

}  // namespace

TEST_CASE("uniform partition geometry") {
  UniformPartition part{9, true};
  CHECK(part.cell_width() == Rational(1, 9));
  CHECK(part.left_endpoint(0) == 0);
  CHECK(part.left_endpoint(9) == 1);
}

TEST_CASE("map constructor rejects non-expanding slopes") {
  UniformPartition part{2, true};
  CHECK_THROWS_AS(PiecewiseAffineMap(part, {Rational(0), Rational(2)}, {Rational(0), Rational(0)}),
                  NotExpanding);
  CHECK_THROWS_AS(PiecewiseAffineMap(part, {Rational(1, 2), Rational(2)}, {Rational(0), Rational(0)}),
                  NotExpanding);
  // The identity is not a rotation and not expanding.
  CHECK_THROWS_AS(PiecewiseAffineMap(part, {Rational(1), Rational(1)}, {Rational(0), Rational(0)}),
                  NotExpanding);
}

TEST_CASE("rotation carve-out") {
  PiecewiseAffineMap rho = rotation_by_thirds(1);
  CHECK(rho.is_rotation());
  CHECK(rho.evaluate(Rational(8, 9)) == Rational(2, 9));
  CHECK(rho.evaluate(Rational(0)) == Rational(1, 3));
  CHECK_THROWS_AS(rotation_by_thirds(0), NotExpanding);
  CHECK_THROWS_AS(rotation_by_thirds(3), NotExpanding);
  // Permutation transfer matrix: exactly one 1 per column.
  const RationalMatrix r = pf_matrix(rho);
  for (int j = 0; j < 9; ++j) {
    int ones = 0;
    for (int i = 0; i < 9; ++i)
      if (r(i, j) == 1) ++ones;
    CHECK(ones == 1);
  }
  CHECK(matrices_equal(matrix_power(r, 3), RationalMatrix::identity(9)));
}

TEST_CASE("hand-evaluated family values") {
  const PiecewiseAffineMap t1 = build_named_map("T1");
  CHECK(t1.evaluate(Rational(0)) == Rational(1, 3));
  const PiecewiseAffineMap s = build_named_map("S");
  CHECK(s.evaluate(Rational(1, 9)) == Rational(1, 9));
  CHECK_THROWS_AS(t1.evaluate(Rational(1)), IndexOutOfRange);
  CHECK_THROWS_AS(t1.evaluate(Rational(-1, 9)), IndexOutOfRange);
}

TEST_CASE("markov images of the nine-cell families") {
  const PiecewiseAffineMap t1 = build_named_map("T1");
  CHECK(t1.markov_image(0) == std::vector<int>{3, 4, 5});
  for (const auto& name : kNineCellNames) {
    const PiecewiseAffineMap map = build_named_map(name);
    for (int j = 0; j < 9; ++j) CHECK(map.markov_image(j).size() == 3);
  }
  CHECK_THROWS_AS(t1.markov_image(9), IndexOutOfRange);
}

TEST_CASE("misaligned offsets fail the markov check") {
  PiecewiseAffineMap t1 = build_named_map("T1");
  std::vector<Rational> slopes(9, Rational(3)), offsets(9);
  for (int j = 0; j < 9; ++j) offsets[j] = t1.offset(j) + Rational(1, 18);
  PiecewiseAffineMap shifted({9, true}, slopes, offsets);
  CHECK_THROWS_AS(shifted.markov_image(0), NotMarkov);
  CHECK_THROWS_AS(transition_matrix(shifted), NotMarkov);
}

TEST_CASE("transfer matrices are one-third scalings of the transition pattern") {
  for (const auto& name : kNineCellNames) {
    const PiecewiseAffineMap map = build_named_map(name);
    const Eigen::MatrixXi gamma = transition_matrix(map);
    const RationalMatrix p = pf_matrix(map);
    for (int j = 0; j < 9; ++j) {
      Rational col_sum = 0;
      int row_hits = 0;
      for (int i = 0; i < 9; ++i) {
        CHECK(p(i, j) == (gamma(i, j) ? Rational(1, 3) : Rational(0)));
        col_sum += p(i, j);
        if (p(j, i) != 0) ++row_hits;
      }
      CHECK(col_sum == 1);
      CHECK(row_hits == 3);
    }
    CHECK(preserves_lebesgue(map));
  }
}

TEST_CASE("a markov map that does not preserve lebesgue") {
  UniformPartition part{4, true};
  PiecewiseAffineMap map(part, std::vector<Rational>(4, Rational(2)),
                         {Rational(0), Rational(-1, 2), Rational(-3, 4), Rational(-1)});
  CHECK_FALSE(preserves_lebesgue(map));
  const RationalMatrix p = pf_matrix(map);
  for (int j = 0; j < 4; ++j) {
    Rational col_sum = 0;
    for (int i = 0; i < 4; ++i) col_sum += p(i, j);
    CHECK(col_sum == 1);
  }
}

TEST_CASE("mass ratios of the coherent intervals") {
  for (int i = 1; i <= 3; ++i) {
    const PiecewiseAffineMap map = build_named_map("T" + std::to_string(i));
    const std::set<int> from = j_family(JExample::Cycle, i);
    const std::set<int> to = j_family(JExample::Cycle, i % 3 + 1);
    CHECK(invariant_mass_ratio(map, from, to) == Rational(8, 9));
  }
  const PiecewiseAffineMap s = build_named_map("S");
  const std::set<int> j1 = j_family(JExample::Cycle, 1);
  CHECK(invariant_mass_ratio(s, j1, j1) == Rational(8, 9));
  const std::set<int> all = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(invariant_mass_ratio(s, j1, all) == 1);
  CHECK_THROWS_AS(invariant_mass_ratio(s, {}, j1), Error);
}

TEST_CASE("rotation compositions define the six-map family") {
  const PiecewiseAffineMap s = build_named_map("S");
  const PiecewiseAffineMap rho = rotation_by_thirds(1);
  auto rot = [&](const Rational& x, int k) {
    Rational y = x;
    for (int i = 0; i < k; ++i) y = rho.evaluate(y);
    return y;
  };
  // (pre-rotations, post-rotations) for S1..S6.
  const int pre[6] = {0, 2, 1, 0, 2, 1};
  const int post[6] = {1, 2, 0, 2, 0, 1};
  for (int i = 0; i < 6; ++i) {
    const PiecewiseAffineMap si = build_named_map("S" + std::to_string(i + 1));
    for (int k = 0; k < 81; ++k) {
      const Rational x(k, 81);
      CHECK(si.evaluate(x) == rot(s.evaluate(rot(x, pre[i])), post[i]));
    }
  }
  for (int i = 1; i <= 3; ++i) {
    const PiecewiseAffineMap ti = build_named_map("T" + std::to_string(i));
    const PiecewiseAffineMap ti3 = build_named_map("T" + std::to_string(i + 3));
    for (int k = 0; k < 81; ++k) {
      const Rational x(k, 81);
      CHECK(ti3.evaluate(x) == rho.evaluate(ti.evaluate(x)));
    }
  }
}

TEST_CASE("S1 and T1 have the same graph") {
  const PiecewiseAffineMap s1 = build_named_map("S1");
  const PiecewiseAffineMap t1 = build_named_map("T1");
  CHECK(s1 == t1);
  for (int k = 0; k < 81; ++k) {
    const Rational x(k, 81);
    CHECK(s1.evaluate(x) == t1.evaluate(x));
  }
}

TEST_CASE("six-map transfer matrices factor through rotations") {
  const RationalMatrix ps = pf_matrix(build_named_map("S"));
  const RationalMatrix r = pf_matrix(rotation_by_thirds(1));
  const int l[6] = {1, 2, 0, 2, 0, 1};
  const int rr[6] = {0, 2, 1, 0, 2, 1};
  for (int i = 0; i < 6; ++i) {
    const RationalMatrix psi = pf_matrix(build_named_map("S" + std::to_string(i + 1)));
    CHECK(matrices_equal(psi, matrix_power(r, l[i]) * ps * matrix_power(r, rr[i])));
  }
}

TEST_CASE("unknown map names are rejected") {
  CHECK_THROWS_AS(build_named_map("T7"), ConfigError);
  CHECK_THROWS_AS(build_named_map("Q1"), ConfigError);
  CHECK_THROWS_AS(build_family_map(MapFamily::T123, 4), IndexOutOfRange);
  CHECK_THROWS_AS(build_family_map(MapFamily::S, 2), IndexOutOfRange);
}

TEST_CASE("characteristic polynomial oracle sanity") {
  RationalMatrix m(2, 2);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 2;
  const auto coeffs = testing::char_poly(m);
  CHECK(coeffs == std::vector<Rational>{1, -4, 3});
}

TEST_CASE("one-period transition product characteristic polynomial") {
  RationalMatrix prod = RationalMatrix::identity(9);
  for (int i = 1; i <= 3; ++i) {
    const Eigen::MatrixXi gamma = transition_matrix(build_named_map("T" + std::to_string(i)));
    RationalMatrix g(9, 9);
    for (int r = 0; r < 9; ++r)
      for (int c = 0; c < 9; ++c) g(r, c) = gamma(r, c);
    prod = g * prod;
  }
  const auto coeffs = testing::char_poly(prod);
  const std::vector<Rational> expected = {1, -43, 452, -540, 0, 0, 0, 0, 0, 0};
  CHECK(coeffs == expected);
}

TEST_CASE("matrix action agrees with pointwise preimage sums") {
  for (const auto& name : {"T1", "T3", "S", "S4"}) {
    const PiecewiseAffineMap map = build_named_map(name);
    const RationalMatrix p = pf_matrix(map);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<Rational> v(9);
      for (int i = 0; i < 9; ++i) {
        const auto h = splitmix64(splitmix64(trial * 100 + i) ^ 0x5151u);
        v[i] = Rational(static_cast<int>(h % 19) - 9, 1 + static_cast<int>((h >> 8) % 4));
      }
      std::vector<Rational> pv(9, Rational(0));
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) pv[i] += p(i, j) * v[j];
      for (int k = 0; k < 4; ++k) {
        // Denominator 4000 keeps sample points off every 1/9 boundary.
        const Rational x((1 + 997 * (9 * trial + k)) % 4000, 4000);
        const int cell = static_cast<int>(to_double(x) * 9);
        CHECK(testing::pf_pointwise(map, v, x) == pv[static_cast<size_t>(cell)]);
      }
    }
  }
}

TEST_CASE("rational matrix dimension checks") {
  RationalMatrix a(2, 3), b(2, 2);
  CHECK_THROWS_AS(a * b, DimensionMismatch);
}
