#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <limits>

#include <Eigen/Core>

namespace oselab {

// Internal working precision. Deep cocycle products have singular value
// ratios far below double range (sigma_3/sigma_1 ~ 1e-18 already at depth
// 40), and defective zero eigenvalues perturb like eps^(1/k), so spectra
// and Gram roots are computed at 300 decimal digits and rounded on output.
using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<300>>;

// Relative cutoff below which a singular value of a product is treated as
// an exact zero (the arithmetic noise floor sits near 1e-300 relative).
inline const BigFloat& zero_cutoff_rel() {
  static const BigFloat c{"1e-250"};
  return c;
}

inline double to_double(const BigFloat& x) { return static_cast<double>(x); }

}  // namespace oselab

namespace Eigen {

template <>
struct NumTraits<oselab::BigFloat> : GenericNumTraits<oselab::BigFloat> {
  using Real = oselab::BigFloat;
  using NonInteger = oselab::BigFloat;
  using Nested = oselab::BigFloat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 30,
    MulCost = 60,
  };
  static inline Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static inline Real dummy_precision() { return Real{"1e-280"}; }
  static inline Real highest() { return (std::numeric_limits<Real>::max)(); }
  static inline Real lowest() { return (std::numeric_limits<Real>::lowest)(); }
  static inline Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static inline Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static inline int digits() { return std::numeric_limits<Real>::digits; }
  static inline int digits10() { return std::numeric_limits<Real>::digits10; }
  static inline int min_exponent() { return std::numeric_limits<Real>::min_exponent; }
  static inline int max_exponent() { return std::numeric_limits<Real>::max_exponent; }
};

}  // namespace Eigen

#include <Eigen/Dense>

namespace oselab {

using BigMatrix = Eigen::Matrix<BigFloat, Eigen::Dynamic, Eigen::Dynamic>;
using BigVector = Eigen::Matrix<BigFloat, Eigen::Dynamic, 1>;

inline Eigen::MatrixXd to_double(const BigMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

inline BigMatrix to_big(const Eigen::MatrixXd& m) {
  BigMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = BigFloat(m(i, j));
  return out;
}

}  // namespace oselab
