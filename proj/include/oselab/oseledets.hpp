#pragma once

#include <cstdint>
#include <vector>

#include "oselab/cocycle.hpp"

namespace oselab {

// Orthonormal column basis of a subspace, kept at working precision so
// that distances between nearly identical subspaces are resolvable.
struct SubspaceBasis {
  BigMatrix columns;

  int ambient_dim() const { return static_cast<int>(columns.rows()); }
  int dim() const { return static_cast<int>(columns.cols()); }
  Eigen::MatrixXd as_double() const { return to_double(columns); }
};

struct EigenGroup {
  double value = 0.0;  // representative eigenvalue of the cluster
  SubspaceBasis basis;
};

// Eigen-decomposition of a symmetric PSD matrix, clustered by relative
// gap on log scale; zero eigenvalues form a trailing cluster. Column
// signs follow a fixed convention (largest component positive).
std::vector<EigenGroup> eigenspace_groups(const BigMatrix& psi, double gap_tol = 1e-6);

struct OseledetsGroup {
  double exponent = 0.0;  // kBottomExponent for the killed directions
  int multiplicity = 0;
  SubspaceBasis basis;
  double conditioning = 1.0;  // sigma_min/sigma_max of the raw pushed frame
};

struct OseledetsApproximation {
  std::vector<OseledetsGroup> groups;  // exponents strictly decreasing
  int depth = 0;
  int push = 0;
  std::int64_t base = 0;

  int dimension() const;
  // V_j = span of groups j..end (flag spaces, derived).
  SubspaceBasis flag_space(int j) const;
};

// Eigenspaces of the Gram root at base - push, carried forward through the
// push-step product. The bottom group is reported as the orthogonal
// complement of the pushed finite groups at the current base.
OseledetsApproximation pushforward_subspaces(const MatrixCocycle& cocycle, int depth, int push,
                                             std::int64_t base, double gap_tol = 1e-6);

// Principal-angle metric 2*sin(theta_max/2); 0 iff equal spans, 2 for
// orthogonal lines.
double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b);

// One-step L1 defect of the second-group vector: compare its push through
// the next generator against the second-group vector computed at the next
// base, minimized over sign.
double delta_diagnostic(const MatrixCocycle& cocycle, const UniformPartition& geometry, int push,
                        std::int64_t base = 0);

// Per finite group: distance between the pushed group at `base` and the
// matching group at `base + 1`.
std::vector<double> equivariance_residual(const OseledetsApproximation& at_base,
                                          const OseledetsApproximation& at_next,
                                          const MatrixCocycle& cocycle);

// Orthonormalize the columns of a frame (thin QR at working precision).
SubspaceBasis orthonormalize(const BigMatrix& frame);

}  // namespace oselab
