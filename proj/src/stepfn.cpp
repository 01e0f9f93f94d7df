#include "oselab/stepfn.hpp"

#include <algorithm>

namespace oselab {

template <typename Scalar>
Scalar l1_norm(const StepValues<Scalar>& f) {
  Scalar acc{0};
  for (const Scalar& v : f.values) acc += v < 0 ? Scalar(-v) : v;
  return acc / f.partition.cells;
}

template <typename Scalar>
Scalar variation(const StepValues<Scalar>& f) {
  const size_t n = f.values.size();
  Scalar acc{0};
  for (size_t i = 0; i + 1 < n; ++i) {
    const Scalar d = f.values[i + 1] - f.values[i];
    acc += d < 0 ? Scalar(-d) : d;
  }
  if (f.partition.circle && n > 1) {
    const Scalar d = f.values[0] - f.values[n - 1];
    acc += d < 0 ? Scalar(-d) : d;
  }
  return acc;
}

template <typename Scalar>
Scalar bv_norm(const StepValues<Scalar>& f) {
  return std::max(l1_norm(f), variation(f));
}

template <typename Scalar>
StepValues<Scalar> project_cell_means(const StepValues<Scalar>& f, const UniformPartition& coarse) {
  if (f.partition.circle != coarse.circle || f.partition.cells % coarse.cells != 0)
    throw NotRefinement("step function grid does not refine the target partition");
  const int ratio = f.partition.cells / coarse.cells;
  StepValues<Scalar> out{coarse, std::vector<Scalar>(static_cast<size_t>(coarse.cells), Scalar{0})};
  for (int c = 0; c < coarse.cells; ++c) {
    Scalar acc{0};
    for (int k = 0; k < ratio; ++k) acc += f.values[static_cast<size_t>(c * ratio + k)];
    out.values[static_cast<size_t>(c)] = acc / ratio;
  }
  return out;
}

template double l1_norm(const StepFunction&);
template Rational l1_norm(const RationalStep&);
template double variation(const StepFunction&);
template Rational variation(const RationalStep&);
template double bv_norm(const StepFunction&);
template Rational bv_norm(const RationalStep&);
template StepFunction project_cell_means(const StepFunction&, const UniformPartition&);
template RationalStep project_cell_means(const RationalStep&, const UniformPartition&);

RationalStep pf_apply_exact(const PiecewiseAffineMap& map, const RationalStep& f) {
  const int K = f.partition.cells;
  const int M = map.partition().cells;
  if (f.partition.circle != map.partition().circle || K % M != 0)
    throw NotRefinement("step function grid does not refine the map partition");
  const int ratio = K / M;

  RationalStep out{f.partition, std::vector<Rational>(static_cast<size_t>(K), Rational(0))};
  for (int g = 0; g < K; ++g) {
    if (f.values[static_cast<size_t>(g)] == 0) continue;
    const int j = g / ratio;  // map cell containing this grid cell
    const Rational a = map.slope(j);
    const Rational lo_x = Rational(g, K);
    Rational lo = a * lo_x + map.offset(j);
    if (a < 0) lo -= abs(a) / K;
    const Rational scaled = lo * K;
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(scaled);
    const cpp_int den = boost::multiprecision::denominator(scaled);
    if (den != 1) throw RefinementTooCoarse("branch image endpoint falls inside a grid cell");
    const Rational abs_a = abs(a);
    const cpp_int abs_a_num = boost::multiprecision::numerator(abs_a);
    if (boost::multiprecision::denominator(abs_a) != 1)
      throw RefinementTooCoarse("fractional slope image is not grid aligned");
    const int span = static_cast<int>(abs_a_num);
    const Rational weight = f.values[static_cast<size_t>(g)] / abs(a);
    long long first = static_cast<long long>(num % K);
    if (first < 0) first += K;
    for (int k = 0; k < span; ++k)
      out.values[static_cast<size_t>((first + k) % K)] += weight;
  }
  return out;
}

DecayCheck decay_check(const RationalStep& f, const MapCocycle& cocycle, int n, std::int64_t base) {
  if (n < 1) throw IndexOutOfRange("decay_check needs n >= 1");
  const UniformPartition& coarse = cocycle.generators.front().partition();
  const RationalStep means = project_cell_means(f, coarse);
  for (const Rational& m : means.values)
    if (m != 0) throw NotInF("step function has a nonzero cell mean");

  Rational slope = abs(cocycle.generators.front().slope(0));
  for (const auto& map : cocycle.generators)
    for (int j = 0; j < map.partition().cells; ++j)
      if (abs(map.slope(j)) != slope) throw ConstantSlopeRequired("decay bound needs one common slope magnitude");

  RationalStep g = f;
  Rational slope_product = 1;
  for (int k = 0; k < n; ++k) {
    g = pf_apply_exact(cocycle.generator_at(base + k), g);
    slope_product *= slope;
  }
  // The transfer cocycle acts on the quotient modulo coarse step functions;
  // the image's representative is its projection back to zero cell means.
  const RationalStep image_means = project_cell_means(g, coarse);
  const size_t ratio = g.values.size() / static_cast<size_t>(coarse.cells);
  for (size_t i = 0; i < g.values.size(); ++i) g.values[i] -= image_means.values[i / ratio];
  return DecayCheck{variation(g), variation(f) * slope / slope_product};
}

double coherent_overlap(const StepFunction& w, const std::set<int>& cells) {
  double total = 0, hit = 0;
  for (size_t i = 0; i < w.values.size(); ++i) {
    const double pos = std::max(w.values[i], 0.0);
    total += pos;
    if (cells.count(static_cast<int>(i))) hit += pos;
  }
  if (total == 0) throw NoPositivePart("step function has no positive part");
  return hit / total;
}

std::set<int> j_family(JExample example, int symbol) {
  const int limit = example == JExample::Cycle ? 3 : 6;
  if (symbol < 1 || symbol > limit) throw IndexOutOfRange("symbol outside the example alphabet");
  const int block = (symbol - 1) % 3;
  return {3 * block, 3 * block + 1, 3 * block + 2};
}

}  // namespace oselab
