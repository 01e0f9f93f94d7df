#include "oselab/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace oselab {

const BigMatrix& MatrixCocycle::generator_at(std::int64_t i) const {
  const int sym = driver.symbol_at(i);
  if (sym < 1 || sym > static_cast<int>(generators.size()))
    throw IndexOutOfRange("driver emitted a symbol without a generator");
  return generators[static_cast<size_t>(sym - 1)];
}

const PiecewiseAffineMap& MapCocycle::generator_at(std::int64_t i) const {
  const int sym = driver.symbol_at(i);
  if (sym < 1 || sym > static_cast<int>(generators.size()))
    throw IndexOutOfRange("driver emitted a symbol without a generator");
  return generators[static_cast<size_t>(sym - 1)];
}

MatrixCocycle MapCocycle::matrix_cocycle() const {
  std::vector<RationalMatrix> mats;
  mats.reserve(generators.size());
  for (const auto& g : generators) mats.push_back(pf_matrix(g));
  return make_cocycle(std::move(mats), driver);
}

namespace {

void check_generators(const std::vector<BigMatrix>& gens, const Driver& driver) {
  if (gens.empty()) throw Error("cocycle needs at least one generator");
  const Eigen::Index d = gens.front().rows();
  for (const auto& g : gens)
    if (g.rows() != d || g.cols() != d) throw DimensionMismatch("generators must be square and equally sized");
  if (driver.alphabet() > static_cast<int>(gens.size()))
    throw DimensionMismatch("generator table does not cover the driver alphabet");
}

}  // namespace

MatrixCocycle make_cocycle(std::vector<BigMatrix> generators, Driver driver) {
  check_generators(generators, driver);
  MatrixCocycle c{std::move(generators), std::move(driver), 0};
  c.dimension = static_cast<int>(c.generators.front().rows());
  return c;
}

MatrixCocycle make_cocycle(std::vector<RationalMatrix> generators, Driver driver) {
  std::vector<BigMatrix> big;
  big.reserve(generators.size());
  for (const auto& g : generators) big.push_back(g.as_big());
  return make_cocycle(std::move(big), std::move(driver));
}

MatrixCocycle make_cocycle(std::vector<Eigen::MatrixXd> generators, Driver driver) {
  std::vector<BigMatrix> big;
  big.reserve(generators.size());
  for (const auto& g : generators) big.push_back(to_big(g));
  return make_cocycle(std::move(big), std::move(driver));
}

ScaledMatrix scaled_product(const MatrixCocycle& cocycle, int n, std::int64_t base) {
  if (n < 0) throw IndexOutOfRange("product length must be nonnegative");
  ScaledMatrix acc{BigMatrix::Identity(cocycle.dimension, cocycle.dimension), 0.0};
  for (int k = 0; k < n; ++k) {
    acc.matrix = cocycle.generator_at(base + k) * acc.matrix;
    if ((k + 1) % 32 == 0) {
      const BigFloat peak = acc.matrix.cwiseAbs().maxCoeff();
      if (peak > 0) {
        acc.matrix /= peak;
        acc.log_scale += to_double(log(peak));
      }
    }
  }
  return acc;
}

Eigen::MatrixXd product(const MatrixCocycle& cocycle, int n, std::int64_t base) {
  const ScaledMatrix p = scaled_product(cocycle, n, base);
  return to_double(p.matrix) * std::exp(p.log_scale);
}

BigMatrix gram_root(const MatrixCocycle& cocycle, int depth, std::int64_t base, double underflow_floor) {
  if (depth < 1) throw IndexOutOfRange("gram_root depth must be positive");
  const ScaledMatrix p = scaled_product(cocycle, depth, base);
  Eigen::JacobiSVD<BigMatrix> svd(p.matrix, Eigen::ComputeFullV);
  const BigVector& sigma = svd.singularValues();
  const BigFloat peak = sigma(0);
  const BigFloat floor_abs = BigFloat(underflow_floor) * exp(BigFloat(-p.log_scale));
  BigVector roots(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const bool dead = sigma(i) <= 0 || sigma(i) < floor_abs || (peak > 0 && sigma(i) < peak * zero_cutoff_rel());
    roots(i) = dead ? BigFloat(0) : exp((log(sigma(i)) + BigFloat(p.log_scale)) / depth);
  }
  const BigMatrix v = svd.matrixV();
  return v * roots.asDiagonal() * v.transpose();
}

namespace {

SpectrumReport spectrum_from_complex(std::vector<std::complex<double>> eigs, double group_tol) {
  std::sort(eigs.begin(), eigs.end(),
            [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  SpectrumReport report;
  report.eigenvalues = std::move(eigs);
  for (const auto& e : report.eigenvalues) report.moduli.push_back(std::abs(e));
  size_t start = 0;
  for (size_t i = 1; i <= report.moduli.size(); ++i) {
    if (i == report.moduli.size() || report.moduli[start] - report.moduli[i] > group_tol) {
      report.multiplicities.push_back(static_cast<int>(i - start));
      start = i;
    }
  }
  return report;
}

}  // namespace

SpectrumReport matrix_spectrum(const BigMatrix& m, double group_tol) {
  Eigen::EigenSolver<BigMatrix> solver;
  solver.setMaxIterations(200 * static_cast<int>(m.rows()) * static_cast<int>(m.rows()));
  solver.compute(m, false);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  std::vector<std::complex<double>> eigs;
  eigs.reserve(static_cast<size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    eigs.emplace_back(to_double(solver.eigenvalues()(i).real()), to_double(solver.eigenvalues()(i).imag()));
  return spectrum_from_complex(std::move(eigs), group_tol);
}

SpectrumReport matrix_spectrum(const RationalMatrix& m, double group_tol) {
  return matrix_spectrum(m.as_big(), group_tol);
}

LyapunovEstimate lyapunov_spectrum(const MatrixCocycle& cocycle, int depth, std::int64_t base, double gap_tol) {
  const BigMatrix psi = gram_root(cocycle, depth, base);
  Eigen::SelfAdjointEigenSolver<BigMatrix> solver(psi);
  if (solver.info() != Eigen::Success) throw Error("gram root eigensolver did not converge");

  std::vector<BigFloat> vals(solver.eigenvalues().data(), solver.eigenvalues().data() + cocycle.dimension);
  std::sort(vals.begin(), vals.end(), std::greater<BigFloat>());

  LyapunovEstimate est;
  est.depth = depth;
  est.base = base;
  int bottom = 0;
  std::vector<double> lambdas;
  // Same zero rule as the gram root itself: eigensolver noise in the
  // killed directions sits at working precision below the peak.
  const BigFloat peak = vals.empty() ? BigFloat(0) : vals.front();
  for (const BigFloat& v : vals) {
    if (v <= 0 || (peak > 0 && v < peak * zero_cutoff_rel()))
      ++bottom;
    else
      lambdas.push_back(to_double(log(v)));
  }
  size_t start = 0;
  for (size_t i = 1; i <= lambdas.size(); ++i) {
    if (i == lambdas.size() || lambdas[start] - lambdas[i] > gap_tol) {
      double mean = 0;
      for (size_t k = start; k < i; ++k) mean += lambdas[k];
      est.exponents.push_back(mean / static_cast<double>(i - start));
      est.multiplicities.push_back(static_cast<int>(i - start));
      start = i;
    }
  }
  if (bottom > 0) {
    est.exponents.push_back(kBottomExponent);
    est.multiplicities.push_back(bottom);
  }
  return est;
}

PeriodicExponents periodic_exponents(const MatrixCocycle& cocycle, int period) {
  if (period < 1) throw IndexOutOfRange("period must be positive");
  BigMatrix prod = BigMatrix::Identity(cocycle.dimension, cocycle.dimension);
  for (int k = 0; k < period; ++k) prod = cocycle.generator_at(k) * prod;

  PeriodicExponents out;
  out.spectrum = matrix_spectrum(prod);
  // Moduli below the Jordan-block noise level of the working precision are
  // genuine zeros of the product.
  constexpr double kZeroTol = 1e-12;
  std::vector<double> finite;
  int bottom = 0;
  for (double m : out.spectrum.moduli) {
    if (m < kZeroTol)
      ++bottom;
    else
      finite.push_back(std::log(m) / period);
  }
  std::sort(finite.begin(), finite.end(), std::greater<double>());
  size_t start = 0;
  for (size_t i = 1; i <= finite.size(); ++i) {
    if (i == finite.size() || finite[start] - finite[i] > 1e-9) {
      out.exponents.push_back(finite[start]);
      out.multiplicities.push_back(static_cast<int>(i - start));
      start = i;
    }
  }
  if (bottom > 0) {
    out.exponents.push_back(kBottomExponent);
    out.multiplicities.push_back(bottom);
  }
  return out;
}

double essential_bound(const MapCocycle& cocycle, int n_window, std::int64_t base) {
  if (n_window < 1) throw IndexOutOfRange("window must be positive");
  double acc = 0;
  for (int k = 0; k < n_window; ++k) {
    const PiecewiseAffineMap& map = cocycle.generator_at(base + k);
    const Rational s0 = abs(map.slope(0));
    for (int j = 1; j < map.partition().cells; ++j)
      if (abs(map.slope(j)) != s0)
        throw ConstantSlopeRequired("map has mixed slope magnitudes across cells");
    acc += std::log(to_double(s0));
  }
  return -acc / n_window;
}

std::vector<double> exceptional_exponents(const LyapunovEstimate& estimate, double theta) {
  std::vector<double> out;
  for (double lambda : estimate.exponents)
    if (!is_bottom(lambda) && lambda > theta && lambda < 0) out.push_back(lambda);
  return out;
}

}  // namespace oselab
