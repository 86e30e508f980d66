#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mixcomp {

// Singular values (descending) of some operator together with their tail norms
// r_j = sqrt(sum_{i >= j} sigma_i^2).
struct Spectrum {
  std::vector<double> sigmas;
  std::vector<double> tail_norms;
};

// Builds a Spectrum from descending, nonnegative singular values.
Spectrum make_spectrum(std::vector<double> sigmas);

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns; empty when not requested
};

// Dense symmetric eigendecomposition. Only the lower triangle is read.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& S, bool want_vectors);

// Symmetric square root of a numerically PSD matrix. Eigenvalues below
// n * lambda_max * eps are treated as zero; anything below ten times the negated
// cutoff is rejected as NotPSD.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& S);

// min(n, m) singular values, descending (divide-and-conquer SVD, values only).
std::vector<double> singular_values(const Eigen::MatrixXd& A);

// r_j = sqrt(sum_{i >= j} sigma_i^2), accumulated from the smallest sigma up.
std::vector<double> tail_norms(std::span<const double> sigmas);

// Greedy diagonally pivoted Cholesky: returns F (n x r) with F F^T = S up to a
// Schur-complement residual whose largest diagonal entry is at most n * eps * max diag(S).
// Rows of F follow the rows of S (no permutation to undo).
Eigen::MatrixXd pivoted_cholesky(const Eigen::MatrixXd& S);

// Largest singular value.
double operator_norm(const Eigen::MatrixXd& A);

}  // namespace mixcomp
