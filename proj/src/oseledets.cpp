#include "oselab/oseledets.hpp"

#include <algorithm>
#include <cmath>

namespace oselab {

namespace {

void fix_column_signs(BigMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index peak = 0;
    BigFloat best = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (abs(m(r, c)) > best) {
        best = abs(m(r, c));
        peak = r;
      }
    if (m(peak, c) < 0) m.col(c) = -m.col(c);
  }
}

}  // namespace

SubspaceBasis orthonormalize(const BigMatrix& frame) {
  Eigen::HouseholderQR<BigMatrix> qr(frame);
  BigMatrix thin = BigMatrix::Identity(frame.rows(), frame.cols());
  thin = qr.householderQ() * thin;
  return SubspaceBasis{std::move(thin)};
}

std::vector<EigenGroup> eigenspace_groups(const BigMatrix& psi, double gap_tol) {
  if (psi.rows() != psi.cols()) throw NotSymmetric("matrix is not square");
  const BigFloat scale = psi.cwiseAbs().maxCoeff();
  if ((psi - BigMatrix(psi.transpose())).cwiseAbs().maxCoeff() > BigFloat(1e-10) * std::max<BigFloat>(scale, 1))
    throw NotSymmetric("matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<BigMatrix> solver(psi);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  const int d = static_cast<int>(psi.rows());

  // Solver returns ascending order; work in descending.
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = d - 1 - i;

  std::vector<EigenGroup> groups;
  int start = 0;
  auto val = [&](int k) { return solver.eigenvalues()(order[k]); };
  // Reassembling a truncated decomposition leaves noise at working
  // precision in the killed directions; treat those as exact zeros.
  const BigFloat peak = val(0);
  auto is_dead = [&](const BigFloat& x) {
    return x <= 0 || (peak > 0 && x < peak * zero_cutoff_rel());
  };
  auto flush = [&](int end) {
    BigMatrix basis(d, end - start);
    for (int k = start; k < end; ++k) basis.col(k - start) = solver.eigenvectors().col(order[k]);
    fix_column_signs(basis);
    const double value = is_dead(val(start)) ? 0.0 : to_double(val(start));
    groups.push_back(EigenGroup{value, SubspaceBasis{std::move(basis)}});
    start = end;
  };
  for (int k = 1; k <= d; ++k) {
    if (k == d) {
      flush(d);
      break;
    }
    const BigFloat a = val(start), b = val(k);
    const bool dead_a = is_dead(a), dead_b = is_dead(b);
    if (dead_a != dead_b || (!dead_a && to_double(log(a) - log(b)) > gap_tol)) flush(k);
  }
  return groups;
}

int OseledetsApproximation::dimension() const {
  int d = 0;
  for (const auto& g : groups) d += g.multiplicity;
  return d;
}

SubspaceBasis OseledetsApproximation::flag_space(int j) const {
  if (j < 0 || j >= static_cast<int>(groups.size())) throw IndexOutOfRange("flag index outside group range");
  const int d = groups.front().basis.ambient_dim();
  int cols = 0;
  for (size_t k = j; k < groups.size(); ++k) cols += groups[k].multiplicity;
  BigMatrix stacked(d, cols);
  int at = 0;
  for (size_t k = j; k < groups.size(); ++k) {
    stacked.middleCols(at, groups[k].multiplicity) = groups[k].basis.columns;
    at += groups[k].multiplicity;
  }
  return orthonormalize(stacked);
}

OseledetsApproximation pushforward_subspaces(const MatrixCocycle& cocycle, int depth, int push,
                                             std::int64_t base, double gap_tol) {
  if (depth < push || push < 0) throw IndexOutOfRange("need depth >= push >= 0");
  const std::int64_t shifted = base - push;
  const BigMatrix psi = gram_root(cocycle, depth, shifted);
  const std::vector<EigenGroup> groups = eigenspace_groups(psi, gap_tol);
  const ScaledMatrix forward = scaled_product(cocycle, push, shifted);
  const int d = cocycle.dimension;

  OseledetsApproximation out;
  out.depth = depth;
  out.push = push;
  out.base = base;

  int finite_cols = 0;
  for (const auto& g : groups) {
    if (g.value <= 0) continue;  // bottom cluster handled below
    OseledetsGroup og;
    og.exponent = std::log(g.value);
    og.multiplicity = g.basis.dim();
    BigMatrix pushed = forward.matrix * g.basis.columns;
    Eigen::JacobiSVD<BigMatrix> svd(pushed);
    const BigFloat top = svd.singularValues()(0);
    const BigFloat bottom = svd.singularValues()(svd.singularValues().size() - 1);
    if (top <= 0 || bottom / top < BigFloat("1e-100"))
      throw RankCollapse("pushed frame lost rank");
    og.conditioning = to_double(bottom / top);
    og.basis = orthonormalize(pushed);
    fix_column_signs(og.basis.columns);
    finite_cols += og.multiplicity;
    out.groups.push_back(std::move(og));
  }

  if (finite_cols < d) {
    OseledetsGroup og;
    og.exponent = kBottomExponent;
    og.multiplicity = d - finite_cols;
    BigMatrix complement;
    if (finite_cols == 0) {
      complement = BigMatrix::Identity(d, d);
    } else {
      BigMatrix stacked(d, finite_cols);
      int at = 0;
      for (const auto& g : out.groups) {
        stacked.middleCols(at, g.multiplicity) = g.basis.columns;
        at += g.multiplicity;
      }
      Eigen::JacobiSVD<BigMatrix> svd(stacked, Eigen::ComputeFullU);
      complement = svd.matrixU().rightCols(d - finite_cols);
    }
    fix_column_signs(complement);
    og.basis = SubspaceBasis{std::move(complement)};
    out.groups.push_back(std::move(og));
  }
  return out;
}

double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim())
    throw DimensionMismatch("subspace distance needs equal dimensions");
  const BigMatrix overlap = a.columns.transpose() * b.columns;
  Eigen::JacobiSVD<BigMatrix> svd(overlap);
  BigFloat cos_min = svd.singularValues()(svd.singularValues().size() - 1);
  if (cos_min > 1) cos_min = 1;
  if (cos_min < -1) cos_min = -1;
  const BigFloat theta = acos(cos_min);
  return to_double(2 * sin(theta / 2));
}

namespace {

BigVector second_group_vector(const MatrixCocycle& cocycle, int push, std::int64_t base, int cells) {
  OseledetsApproximation approx = pushforward_subspaces(cocycle, 2 * push, push, base);
  if (approx.groups.size() < 2 || approx.groups[1].multiplicity != 1)
    throw GroupMismatch("second group is not one-dimensional");
  BigVector v = approx.groups[1].basis.columns.col(0);
  BigFloat l1 = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) l1 += abs(v(i));
  l1 /= cells;
  return v / l1;
}

}  // namespace

double delta_diagnostic(const MatrixCocycle& cocycle, const UniformPartition& geometry, int push,
                        std::int64_t base) {
  if (push < 1) throw IndexOutOfRange("delta diagnostic needs push >= 1");
  const int cells = geometry.cells;
  const BigVector here = second_group_vector(cocycle, push, base, cells);
  const BigVector next = second_group_vector(cocycle, push, base + 1, cells);
  BigVector carried = cocycle.generator_at(base) * here;
  BigFloat l1 = 0;
  for (Eigen::Index i = 0; i < carried.size(); ++i) l1 += abs(carried(i));
  l1 /= cells;
  carried /= l1;
  BigFloat diff = 0, sum = 0;
  for (Eigen::Index i = 0; i < carried.size(); ++i) {
    diff += abs(next(i) - carried(i));
    sum += abs(next(i) + carried(i));
  }
  return to_double(std::min(diff, sum) / cells);
}

std::vector<double> equivariance_residual(const OseledetsApproximation& at_base,
                                          const OseledetsApproximation& at_next,
                                          const MatrixCocycle& cocycle) {
  if (at_base.groups.size() != at_next.groups.size())
    throw GroupMismatch("group counts differ between bases");
  for (size_t j = 0; j < at_base.groups.size(); ++j)
    if (at_base.groups[j].multiplicity != at_next.groups[j].multiplicity)
      throw GroupMismatch("group multiplicities differ between bases");

  const BigMatrix& step = cocycle.generator_at(at_base.base);
  std::vector<double> residuals;
  for (size_t j = 0; j < at_base.groups.size(); ++j) {
    if (is_bottom(at_base.groups[j].exponent)) continue;
    const SubspaceBasis pushed = orthonormalize(step * at_base.groups[j].basis.columns);
    residuals.push_back(subspace_distance(pushed, at_next.groups[j].basis));
  }
  return residuals;
}

}  // namespace oselab
