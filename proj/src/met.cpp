#include "oselab/met.hpp"

#include <algorithm>
#include <cmath>

namespace oselab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

double unit_double(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

Eigen::MatrixXd drop_smallest_singular_value(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  s(s.size() - 1) = 0.0;
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace

MatrixCocycle generate_random_cocycle(const RandomCocycleSpec& spec) {
  if (spec.dimension < 2) throw IndexOutOfRange("random cocycle needs dimension >= 2");
  if (spec.singular_count < 0 || spec.singular_count > spec.generator_count)
    throw IndexOutOfRange("singular generator count outside 0..K");
  const int d = spec.dimension;
  std::vector<Eigen::MatrixXd> gens;
  for (int g = 0; g < spec.generator_count; ++g) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const std::uint64_t h =
            splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(g * d * d + i * d + j) + 1));
        m(i, j) = spec.entry_low + unit_double(h) * (spec.entry_high - spec.entry_low);
      }
    if (g < spec.singular_count) m = drop_smallest_singular_value(m);
    gens.push_back(std::move(m));
  }
  const std::uint64_t seed = spec.seed;
  const int K = spec.generator_count;
  Driver driver = Driver::explicit_function(
      [seed, K](std::int64_t i) {
        return 1 + static_cast<int>(splitmix64(seed ^ (0xA5A5A5A5A5A5A5A5ull + splitmix64(static_cast<std::uint64_t>(i)))) %
                                    static_cast<std::uint64_t>(K));
      },
      K);
  return make_cocycle(std::move(gens), std::move(driver));
}

std::vector<double> qr_exponent_oracle(const MatrixCocycle& cocycle, int n_steps, std::int64_t base) {
  const int d = cocycle.dimension;
  if (n_steps < d) throw IndexOutOfRange("oracle needs at least d steps");
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& g : cocycle.generators) gens.push_back(to_double(g));

  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, d);
  std::vector<double> sums(d, 0.0);
  std::vector<int> collapses(d, 0);
  for (int k = 0; k < n_steps; ++k) {
    const int sym = cocycle.driver.symbol_at(base + k);
    const Eigen::MatrixXd z = gens[static_cast<size_t>(sym - 1)] * q;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
      const double diag = std::abs(r(i, i));
      const double col = z.col(i).norm();
      if (diag <= 0 || (col > 0 && diag < 1e-12 * col))
        ++collapses[i];
      else
        sums[i] += std::log(diag);
    }
  }
  std::vector<double> out;
  const int persistent = std::max(2, n_steps / 1000);
  for (int i = 0; i < d; ++i)
    out.push_back(collapses[i] >= persistent ? kBottomExponent : sums[i] / n_steps);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

namespace {

double stacked_condition(const OseledetsApproximation& approx) {
  const int d = approx.groups.front().basis.ambient_dim();
  BigMatrix stacked(d, approx.dimension());
  int at = 0;
  for (const auto& g : approx.groups) {
    stacked.middleCols(at, g.multiplicity) = g.basis.columns;
    at += g.multiplicity;
  }
  Eigen::JacobiSVD<BigMatrix> svd(stacked);
  const BigFloat lo = svd.singularValues()(svd.singularValues().size() - 1);
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return to_double(svd.singularValues()(0) / lo);
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t m = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// Per-group growth-rate regression against the matching singular values.
//
// The frame stacking the finite groups in order spans the fast flag; its
// leading j-column volume under the cocycle is the top direction of the
// j-th exterior power, so its increments share the finite-window
// fluctuations of sigma_1..sigma_j exactly. Regressing each group's mean
// QR-diagonal log against the matching mean log sigma therefore isolates
// the rate itself: a wrong-exponent hypothesis fails by the spectral gap
// while the correct one agrees to the alignment transient.
std::vector<double> group_growth_deviations(const MatrixCocycle& cocycle,
                                            const OseledetsApproximation& approx, std::int64_t base,
                                            int n_low, int n_high, int stride) {
  const int d = cocycle.dimension;
  std::vector<int> mults;
  int finite = 0;
  for (const auto& g : approx.groups) {
    if (is_bottom(g.exponent)) break;  // finite groups come first
    mults.push_back(g.multiplicity);
    finite += g.multiplicity;
  }
  if (finite == 0) return {};

  BigMatrix frame(d, finite);
  int at = 0;
  for (const auto& g : approx.groups) {
    if (is_bottom(g.exponent)) break;
    frame.middleCols(at, g.multiplicity) = g.basis.columns;
    at += g.multiplicity;
  }

  ScaledMatrix acc{BigMatrix::Identity(d, d), 0.0};
  BigMatrix w = frame;
  double w_scale = 0;
  std::vector<double> xs;
  std::vector<std::vector<double>> ys(mults.size()), ts(mults.size());
  for (int n = 1; n <= n_high; ++n) {
    acc.matrix = cocycle.generator_at(base + n - 1) * acc.matrix;
    BigFloat peak = acc.matrix.cwiseAbs().maxCoeff();
    if (peak > 0) {
      acc.matrix /= peak;
      acc.log_scale += to_double(log(peak));
    }
    w = cocycle.generator_at(base + n - 1) * w;
    peak = w.cwiseAbs().maxCoeff();
    if (peak > 0) {
      w /= peak;
      w_scale += to_double(log(peak));
    }
    if (n >= n_low && (n - n_low) % stride == 0) {
      xs.push_back(n);
      Eigen::JacobiSVD<BigMatrix> svd(acc.matrix);
      Eigen::HouseholderQR<BigMatrix> qr(w);
      int col = 0;
      for (size_t g = 0; g < mults.size(); ++g) {
        double vol = 0, sv = 0;
        for (int k = 0; k < mults[g]; ++k, ++col) {
          vol += to_double(log(abs(qr.matrixQR()(col, col))));
          sv += to_double(log(svd.singularValues()(col)));
        }
        ys[g].push_back(vol / mults[g] + w_scale);
        ts[g].push_back(sv / mults[g] + acc.log_scale);
      }
    }
  }

  std::vector<double> deviations;
  for (size_t g = 0; g < mults.size(); ++g)
    deviations.push_back(std::abs(least_squares_slope(xs, ys[g]) - least_squares_slope(xs, ts[g])));
  return deviations;
}

void worsen(PropertyCheck& check, bool pass, double value, std::int64_t base) {
  if (std::abs(value) > std::abs(check.margin) || (check.pass && !pass)) {
    check.margin = value;
    check.worst_base = base;
  }
  check.pass = check.pass && pass;
}

}  // namespace

SplittingReport verify_splitting(const MatrixCocycle& cocycle, int depth, int push, int window,
                                 std::int64_t base, const SplittingTolerances& tol) {
  if (window < 1) throw IndexOutOfRange("window must cover at least one base");
  SplittingReport report;
  const int d = cocycle.dimension;

  std::vector<OseledetsApproximation> approx;
  for (int w = 0; w < window; ++w) approx.push_back(pushforward_subspaces(cocycle, depth, push, base + w));

  for (int w = 0; w < window; ++w) {
    const std::int64_t b = base + w;
    std::vector<int> mults;
    int total = 0;
    for (const auto& g : approx[w].groups) {
      mults.push_back(g.multiplicity);
      total += g.multiplicity;
    }
    report.multiplicities.push_back(mults);
    worsen(report.dimension_sum, total == d, std::abs(total - d), b);
    worsen(report.multiplicity_stable, mults == report.multiplicities.front(),
           mults == report.multiplicities.front() ? 0.0 : 1.0, b);
    worsen(report.direct_sum, stacked_condition(approx[w]) < tol.direct_sum_condition,
           stacked_condition(approx[w]), b);

    if (w + 1 < window && approx[w].groups.size() == approx[w + 1].groups.size()) {
      bool same = true;
      for (size_t j = 0; j < approx[w].groups.size(); ++j)
        same = same && approx[w].groups[j].multiplicity == approx[w + 1].groups[j].multiplicity;
      if (same) {
        const std::vector<double> res = equivariance_residual(approx[w], approx[w + 1], cocycle);
        for (double r : res) worsen(report.equivariance, r < tol.equivariance, r, b);
      }
    }

    // Regression window: past the early alignment transients, short of
    // n = push where the pushed frame's residual error catches up.
    const int n_low = std::max(4, push / 3);
    const int n_high = std::max(n_low + 4, 2 * push / 3);
    const int stride = std::max(1, (n_high - n_low) / 12);
    const std::vector<double> devs = group_growth_deviations(cocycle, approx[w], b, n_low, n_high, stride);
    for (double dev : devs) worsen(report.growth_rates, dev < tol.growth_rate, dev, b);
  }
  return report;
}

BackwardCheck backward_singular_check(const MatrixCocycle& cocycle, const std::vector<int>& depths,
                                      std::int64_t base) {
  if (depths.empty()) throw IndexOutOfRange("need at least one depth");
  for (size_t i = 1; i < depths.size(); ++i)
    if (depths[i] <= depths[i - 1]) throw IndexOutOfRange("depths must increase");

  BackwardCheck out;
  for (int n : depths) {
    const ScaledMatrix p = scaled_product(cocycle, n, base - n);
    Eigen::JacobiSVD<BigMatrix> svd(p.matrix);
    const BigVector& sigma = svd.singularValues();
    BackwardRow row{n, {}};
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      const bool dead = sigma(i) <= 0 || sigma(i) < sigma(0) * zero_cutoff_rel();
      row.exponents.push_back(dead ? kBottomExponent
                                   : to_double((log(sigma(i)) + BigFloat(p.log_scale)) / n));
    }
    std::sort(row.exponents.begin(), row.exponents.end(), std::greater<double>());
    out.rows.push_back(std::move(row));
  }

  const LyapunovEstimate forward = lyapunov_spectrum(cocycle, depths.back(), base);
  for (size_t g = 0; g < forward.exponents.size(); ++g)
    for (int k = 0; k < forward.multiplicities[g]; ++k) out.forward_exponents.push_back(forward.exponents[g]);

  auto sup_gap = [](const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (is_bottom(a[i]) || is_bottom(b[i])) continue;
      worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
  };
  for (size_t i = 1; i < out.rows.size(); ++i)
    out.successive_gaps.push_back(sup_gap(out.rows[i - 1].exponents, out.rows[i].exponents));
  out.final_gap_to_forward = sup_gap(out.rows.back().exponents, out.forward_exponents);
  return out;
}

}  // namespace oselab
