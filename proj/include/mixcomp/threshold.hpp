#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "mixcomp/kernels.hpp"
#include "mixcomp/operator_estimate.hpp"

namespace mixcomp {

// Sample concentration statistics of the rank-one observation operators T_{h,X_i}.
struct ConcentrationStats {
  double L_hat = 0.0;       // max_{i != j} ||T_i - T_j||_HS
  double sigma2_hat = 0.0;  // (1 / (2N(N-1))) sum_{i != j} ||T_i - T_j||^2_HS
  std::size_t n = 0;
  double delta = 0.05;
};

// O(N^2) pass over distinct pairs. Throws DegenerateSample when every observation
// coincides (L_hat == 0) and InvalidArgument for N < 2 or delta outside (0, 1).
ConcentrationStats concentration_stats(const PairData& pair, const KernelSpec& k1,
                                       const KernelSpec& k2, double delta);

// Same statistics read off precomputed Gram matrices (W[i][j] = phi^d(x_i, x_j)).
ConcentrationStats concentration_stats_from_grams(const Eigen::MatrixXd& W1,
                                                  const Eigen::MatrixXd& W2, double delta);

enum class VarianceTerm {
  // sigma2_hat as is (lower-order term dropped).
  dropped,
  // sigma2_hat + L_hat^2 / 2 * sqrt(ln(1/delta) / N).
  undropped,
};

// Log of the Bennett-type tail bound (without the factor 2):
//   -(tau N / L) ln(1 + tau L / s2) + N ln(1 + tau / L - (s2 / L^2) ln(1 + tau L / s2))
double threshold_rhs(double tau, double L, double s2, std::size_t n);

// Variance entering the solved threshold for the given variant.
double threshold_variance(const ConcentrationStats& stats, VarianceTerm variant);

// tau > 0 with threshold_rhs(tau) = ln(delta / 2). Doubling bracket from sigma2/L,
// then bisection. Throws DegenerateStats / NoBracket.
double solve_threshold(const ConcentrationStats& stats, VarianceTerm variant = VarianceTerm::dropped);

// Closed-form bound, valid for 0 < delta < 1/2:
//   2 L ln(2/delta) / N + sqrt( ln(2/delta)/N * (S + L^2 sqrt(ln(1/delta)/N)) )
// where S is the (unhalved) mean squared pairwise HS distance.
double closed_form_threshold(double L, double S, std::size_t n, double delta);

}  // namespace mixcomp
