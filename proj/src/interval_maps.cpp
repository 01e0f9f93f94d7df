#include "oselab/interval_maps.hpp"

#include <algorithm>

namespace oselab {

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionMismatch("rational matrix product: inner dimensions differ");
  RationalMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Eigen::MatrixXd RationalMatrix::as_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = to_double((*this)(i, j));
  return out;
}

BigMatrix RationalMatrix::as_big() const {
  BigMatrix out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = to_big((*this)(i, j));
  return out;
}

namespace {

Rational mod1(Rational x) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(x);
  const cpp_int den = boost::multiprecision::denominator(x);
  cpp_int q = num / den;
  if (num < 0 && q * den != num) --q;
  return x - Rational(q);
}

}  // namespace

PiecewiseAffineMap::PiecewiseAffineMap(UniformPartition partition, std::vector<Rational> slopes,
                                       std::vector<Rational> offsets)
    : partition_(partition), slopes_(std::move(slopes)), offsets_(std::move(offsets)) {
  if (partition_.cells < 1) throw Error("partition needs at least one cell");
  if (static_cast<int>(slopes_.size()) != partition_.cells || static_cast<int>(offsets_.size()) != partition_.cells)
    throw DimensionMismatch("slope/offset tables must have one entry per cell");
  bool all_unit = true;
  for (const Rational& a : slopes_) {
    if (a == 0) throw NotExpanding("zero slope");
    if (abs(a) < 1) throw NotExpanding("slope magnitude below 1");
    if (abs(a) != 1) all_unit = false;
  }
  if (all_unit) {
    // Unit slopes are only admitted for a pure grid rotation: identical
    // slope 1, identical offset, nonzero multiple of the cell width, on the
    // circle. The identity and everything else at |a| = 1 is rejected.
    bool rot = partition_.circle;
    for (const Rational& a : slopes_) rot = rot && (a == 1);
    for (const Rational& c : offsets_) rot = rot && (c == offsets_[0]);
    const Rational step = mod1(offsets_[0]);
    rot = rot && step != 0 && boost::multiprecision::denominator(Rational(step * partition_.cells)) == 1;
    if (!rot) throw NotExpanding("slope magnitude 1 is only allowed for grid rotations");
    rotation_ = true;
  }
}

Rational PiecewiseAffineMap::evaluate(const Rational& x) const {
  if (x < 0 || x >= 1) throw IndexOutOfRange("evaluate: x outside [0,1)");
  const Rational scaled = x * partition_.cells;
  using boost::multiprecision::cpp_int;
  const cpp_int cell_idx = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
  const int j = static_cast<int>(cell_idx);
  Rational y = slopes_[j] * x + offsets_[j];
  if (partition_.circle) y = mod1(y);
  return y;
}

std::vector<int> PiecewiseAffineMap::markov_image(int cell) const {
  const int M = partition_.cells;
  if (cell < 0 || cell >= M) throw IndexOutOfRange("markov_image: bad cell index");
  const Rational a = slopes_[cell];
  const Rational lo_x = partition_.left_endpoint(cell);
  const Rational hi_x = partition_.left_endpoint(cell + 1);
  Rational lo = a * lo_x + offsets_[cell];
  Rational hi = a * hi_x + offsets_[cell];
  if (a < 0) std::swap(lo, hi);

  const Rational span = (hi - lo) * M;
  if (boost::multiprecision::denominator(span) != 1)
    throw NotMarkov("image width is not a whole number of cells");
  const int count = static_cast<int>(boost::multiprecision::numerator(span));

  Rational start = partition_.circle ? mod1(lo) : lo;
  const Rational scaled = start * M;
  if (boost::multiprecision::denominator(scaled) != 1)
    throw NotMarkov("image endpoint falls strictly inside a cell");
  const int first = static_cast<int>(boost::multiprecision::numerator(scaled));
  if (!partition_.circle && hi > 1) throw NotMarkov("image leaves the interval");

  std::vector<int> cells;
  cells.reserve(count);
  for (int k = 0; k < count; ++k) cells.push_back(partition_.circle ? (first + k) % M : first + k);
  std::sort(cells.begin(), cells.end());
  return cells;
}

Eigen::MatrixXi transition_matrix(const PiecewiseAffineMap& map) {
  const int M = map.partition().cells;
  Eigen::MatrixXi gamma = Eigen::MatrixXi::Zero(M, M);
  for (int j = 0; j < M; ++j)
    for (int i : map.markov_image(j)) gamma(i, j) = 1;
  return gamma;
}

RationalMatrix pf_matrix(const PiecewiseAffineMap& map) {
  const int M = map.partition().cells;
  const Eigen::MatrixXi gamma = transition_matrix(map);
  RationalMatrix p(M, M);
  for (int j = 0; j < M; ++j) {
    const Rational weight = 1 / abs(map.slope(j));
    for (int i = 0; i < M; ++i)
      if (gamma(i, j)) p(i, j) = weight;
  }
  return p;
}

bool preserves_lebesgue(const PiecewiseAffineMap& map) {
  const RationalMatrix p = pf_matrix(map);
  for (int i = 0; i < p.rows(); ++i) {
    Rational row_sum = 0;
    for (int j = 0; j < p.cols(); ++j) row_sum += p(i, j);
    if (row_sum != 1) return false;
  }
  return true;
}

Rational invariant_mass_ratio(const PiecewiseAffineMap& map, const std::set<int>& source_cells,
                              const std::set<int>& target_cells) {
  if (source_cells.empty()) throw Error("invariant_mass_ratio: empty source set");
  const RationalMatrix p = pf_matrix(map);
  // m(B_j ∩ T^{-1}B_i) = p(i,j) m(B_j); uniform cells cancel the widths.
  Rational hit = 0;
  for (int j : source_cells)
    for (int i : target_cells) hit += p(i, j);
  return hit / static_cast<int>(source_cells.size());
}

namespace {

constexpr int kTripleOffsets[3][9] = {
    {6, 7, 6, 1, 3, 0, 4, 3, 0},
    {3, 6, 5, 0, 0, 8, 3, 6, 2},
    {0, 6, 7, 1, 0, 6, 3, 3, 4},
};
constexpr int kSixOffsets[9] = {3, 4, 3, 7, 0, 6, 1, 0, 6};

// Offset table in ninths for a slope-3 map with per-cell value
// 3x + (-3(j+1) + digit_j)/9 on cell j.
std::array<int, 9> ninths_from_digits(const int (&digits)[9]) {
  std::array<int, 9> out{};
  for (int j = 0; j < 9; ++j) out[j] = ((-3 * (j + 1) + digits[j]) % 9 + 9) % 9;
  return out;
}

// Post-compose with rotation by k thirds: add 3k ninths on every cell.
std::array<int, 9> rotate_after(std::array<int, 9> o, int k) {
  for (int& v : o) v = (v + 3 * k) % 9;
  return o;
}

// Pre-compose with rotation by k thirds: the slope-3 factor absorbs the
// integer part, leaving a cyclic shift of the offset table.
std::array<int, 9> rotate_before(const std::array<int, 9>& o, int k) {
  std::array<int, 9> out{};
  for (int j = 0; j < 9; ++j) out[j] = o[(j + 3 * k) % 9];
  return out;
}

PiecewiseAffineMap slope3_map(const std::array<int, 9>& ninths) {
  std::vector<Rational> slopes(9, Rational(3));
  std::vector<Rational> offsets(9);
  for (int j = 0; j < 9; ++j) offsets[j] = Rational(ninths[j], 9);
  return PiecewiseAffineMap({9, true}, std::move(slopes), std::move(offsets));
}

std::array<int, 9> six_family_offsets(int index) {
  const std::array<int, 9> base = ninths_from_digits(kSixOffsets);
  switch (index) {
    case 1:
      return rotate_after(base, 1);
    case 2:
      return rotate_after(rotate_before(base, 2), 2);
    case 3:
      return rotate_before(base, 1);
    case 4:
      return rotate_after(base, 2);
    case 5:
      return rotate_before(base, 2);
    case 6:
      return rotate_after(rotate_before(base, 1), 1);
    default:
      throw IndexOutOfRange("six-map family index must be 1..6");
  }
}

}  // namespace

PiecewiseAffineMap build_family_map(MapFamily family, int index) {
  switch (family) {
    case MapFamily::T123:
      if (index < 1 || index > 3) throw IndexOutOfRange("T123 index must be 1..3");
      return slope3_map(ninths_from_digits(kTripleOffsets[index - 1]));
    case MapFamily::T4to6:
      if (index < 4 || index > 6) throw IndexOutOfRange("T4to6 index must be 4..6");
      return slope3_map(rotate_after(ninths_from_digits(kTripleOffsets[index - 4]), 1));
    case MapFamily::S:
      if (index != 1) throw IndexOutOfRange("S is a singleton family");
      return slope3_map(ninths_from_digits(kSixOffsets));
    case MapFamily::S1to6:
      return slope3_map(six_family_offsets(index));
  }
  throw IndexOutOfRange("unknown map family");
}

PiecewiseAffineMap build_named_map(const std::string& name) {
  if (name == "S") return build_family_map(MapFamily::S, 1);
  if (name == "rho") return rotation_by_thirds(1);
  if (name.size() == 2 && (name[0] == 'T' || name[0] == 'S') && name[1] >= '1' && name[1] <= '6') {
    const int idx = name[1] - '0';
    if (name[0] == 'S') return build_family_map(MapFamily::S1to6, idx);
    return idx <= 3 ? build_family_map(MapFamily::T123, idx) : build_family_map(MapFamily::T4to6, idx);
  }
  throw ConfigError("unknown map name: " + name);
}

PiecewiseAffineMap rotation_by_thirds(int thirds) {
  const int t = ((thirds % 3) + 3) % 3;
  if (t == 0) throw NotExpanding("rotation by zero is the identity");
  return PiecewiseAffineMap({9, true}, std::vector<Rational>(9, Rational(1)),
                            std::vector<Rational>(9, Rational(t, 3)));
}

}  // namespace oselab
