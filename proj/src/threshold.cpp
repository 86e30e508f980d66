#include "mixcomp/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixcomp/error.hpp"

namespace mixcomp {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::BadDelta, "delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

// u - log(1 + u) without cancellation for small u.
double u_minus_log1p(double u) {
  if (std::abs(u) < 1e-4) {
    return u * u * (0.5 - u * (1.0 / 3.0 - u * (0.25 - u / 5.0)));
  }
  return u - std::log1p(u);
}

}  // namespace

ConcentrationStats concentration_stats_from_grams(const Eigen::MatrixXd& W1,
                                                  const Eigen::MatrixXd& W2, double delta) {
  check_delta(delta);
  const Eigen::Index n = W1.rows();
  if (W2.rows() != n || W1.cols() != n || W2.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Gram matrices differ in size");
  }
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "concentration statistics need N >= 2");

  double max_sq = 0.0;
  // Fixed column-major order; per-column partial sums keep the total well conditioned.
  long double total = 0.0L;
  for (Eigen::Index j = 1; j < n; ++j) {
    const double self_j = W1(j, j) * W2(j, j);
    double column = 0.0;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double d2 = std::max(0.0, W1(i, i) * W2(i, i) + self_j - 2.0 * W1(i, j) * W2(i, j));
      column += d2;
      max_sq = std::max(max_sq, d2);
    }
    total += column;
  }
  if (!(max_sq > 0.0)) {
    throw Error(ErrorCode::DegenerateSample, "all observations coincide; HS spread is zero");
  }
  ConcentrationStats stats;
  stats.L_hat = std::sqrt(max_sq);
  const auto nn = static_cast<long double>(n);
  // sum over ordered pairs i != j is twice the sum over i < j.
  stats.sigma2_hat = static_cast<double>(total / (nn * (nn - 1.0L)));
  stats.n = static_cast<std::size_t>(n);
  stats.delta = delta;
  return stats;
}

ConcentrationStats concentration_stats(const PairData& pair, const KernelSpec& k1,
                                       const KernelSpec& k2, double delta) {
  check_delta(delta);
  validate(k1);
  validate(k2);
  const std::size_t n = pair.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "concentration statistics need N >= 2");
  double max_sq = 0.0;
  long double total = 0.0L;
  for (std::size_t j = 1; j < n; ++j) {
    double column = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double d2 = hs_dist_sq(k1, k2, pair.observation(i), pair.observation(j));
      column += d2;
      max_sq = std::max(max_sq, d2);
    }
    total += column;
  }
  if (!(max_sq > 0.0)) {
    throw Error(ErrorCode::DegenerateSample, "all observations coincide; HS spread is zero");
  }
  const auto nn = static_cast<long double>(n);
  return {std::sqrt(max_sq), static_cast<double>(total / (nn * (nn - 1.0L))), n, delta};
}

double threshold_rhs(double tau, double L, double s2, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double u = tau * L / s2;
  const double log_term = std::log1p(u);
  // 1 + tau/L - (s2/L^2) ln(1+u) = 1 + (s2/L^2) (u - ln(1+u))
  const double inner = (s2 / (L * L)) * u_minus_log1p(u);
  return -(tau * nd / L) * log_term + nd * std::log1p(inner);
}

double threshold_variance(const ConcentrationStats& stats, VarianceTerm variant) {
  if (variant == VarianceTerm::dropped) return stats.sigma2_hat;
  const double nd = static_cast<double>(stats.n);
  return stats.sigma2_hat +
         0.5 * stats.L_hat * stats.L_hat * std::sqrt(std::log(1.0 / stats.delta) / nd);
}

double solve_threshold(const ConcentrationStats& stats, VarianceTerm variant) {
  const double L = stats.L_hat;
  const double s2 = threshold_variance(stats, variant);
  if (!(L > 0.0) || !(s2 > 0.0) || stats.n < 2 || !std::isfinite(L) || !std::isfinite(s2)) {
    throw Error(ErrorCode::DegenerateStats, "threshold needs L_hat > 0, sigma2_hat > 0, N >= 2");
  }
  check_delta(stats.delta);
  const double target = std::log(stats.delta / 2.0);
  auto residual = [&](double tau) { return threshold_rhs(tau, L, s2, stats.n) - target; };

  double lo = 0.0;
  double hi = s2 / L;
  int doublings = 0;
  while (residual(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200 || !std::isfinite(hi)) {
      throw Error(ErrorCode::NoBracket, "bound never reaches ln(delta/2)");
    }
  }
  // residual(lo) >= 0 > residual(hi)
  constexpr double kTauTol = 1e-12;
  constexpr double kResidualTol = 1e-10;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = residual(mid);
    if (r >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= kTauTol && std::abs(r) <= kResidualTol) break;
  }
  return std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
}

double closed_form_threshold(double L, double S, std::size_t n, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::BadDelta, "closed-form threshold needs delta in (0, 1/2), got " +
                                         std::to_string(delta));
  }
  if (!(L > 0.0) || S < 0.0 || n < 1) {
    throw Error(ErrorCode::InvalidArgument, "closed-form threshold needs L > 0, S >= 0, N >= 1");
  }
  const double nd = static_cast<double>(n);
  const double log2d = std::log(2.0 / delta);
  return 2.0 * L * log2d / nd +
         std::sqrt((log2d / nd) * (S + L * L * std::sqrt(std::log(1.0 / delta) / nd)));
}

}  // namespace mixcomp
