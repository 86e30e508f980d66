#include "mixcomp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixcomp/error.hpp"

namespace mixcomp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const Eigen::MatrixXd& A, const char* what) {
  if (!A.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

void require_symmetric(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  }
  const double scale = S.cwiseAbs().maxCoeff();
  const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, std::numeric_limits<double>::min())) {
    throw Error(ErrorCode::NotSymmetric, "max |S - S^T| = " + std::to_string(asym));
  }
}

}  // namespace

Spectrum make_spectrum(std::vector<double> sigmas) {
  Spectrum out;
  out.tail_norms = tail_norms(sigmas);
  out.sigmas = std::move(sigmas);
  return out;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& S, bool want_vectors) {
  require_finite(S, "symmetric input");
  SymmetricEigen out;
  if (S.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      S, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigensolver did not converge");
  }
  out.values = solver.eigenvalues();
  if (want_vectors) out.vectors = solver.eigenvectors();
  return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& S) {
  require_finite(S, "psd_sqrt input");
  require_symmetric(S);
  const Eigen::Index n = S.rows();
  if (n == 0) return S;
  SymmetricEigen eig = symmetric_eigen(S, true);
  const double lambda_max = eig.values.cwiseAbs().maxCoeff();
  const double cutoff = static_cast<double>(n) * lambda_max * kEps;
  if (eig.values(0) < -10.0 * cutoff) {
    throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(eig.values(0)));
  }
  Eigen::VectorXd roots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    roots(i) = eig.values(i) < cutoff ? 0.0 : std::sqrt(eig.values(i));
  }
  Eigen::MatrixXd scaled = eig.vectors * roots.asDiagonal();
  Eigen::MatrixXd root = scaled * eig.vectors.transpose();
  // Symmetrize roundoff.
  return 0.5 * (root + root.transpose());
}

std::vector<double> singular_values(const Eigen::MatrixXd& A) {
  require_finite(A, "singular_values input");
  const Eigen::Index k = std::min(A.rows(), A.cols());
  std::vector<double> sv(static_cast<std::size_t>(k));
  if (k == 0) return sv;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "SVD did not converge");
  }
  const Eigen::VectorXd& values = svd.singularValues();
  for (Eigen::Index i = 0; i < k; ++i) sv[static_cast<std::size_t>(i)] = values(i);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::vector<double> tail_norms(std::span<const double> sigmas) {
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] >= 0.0)) throw Error(ErrorCode::NotSorted, "singular values must be >= 0");
    if (i > 0 && sigmas[i] > sigmas[i - 1]) {
      throw Error(ErrorCode::NotSorted, "singular values must be descending at index " + std::to_string(i));
    }
  }
  std::vector<double> out(sigmas.size());
  double acc = 0.0;
  for (std::size_t i = sigmas.size(); i-- > 0;) {
    acc += sigmas[i] * sigmas[i];
    out[i] = std::sqrt(acc);
  }
  return out;
}

Eigen::MatrixXd pivoted_cholesky(const Eigen::MatrixXd& S) {
  require_finite(S, "pivoted_cholesky input");
  require_symmetric(S);
  const Eigen::Index n = S.rows();
  Eigen::VectorXd residual = S.diagonal();
  const double max_diag = n > 0 ? residual.maxCoeff() : 0.0;
  const double tol = static_cast<double>(n) * kEps * max_diag;

  Eigen::Index capacity = std::min<Eigen::Index>(n, 64);
  Eigen::MatrixXd factor(n, capacity);
  Eigen::Index rank = 0;
  while (rank < n) {
    Eigen::Index pivot = 0;
    const double d = residual.maxCoeff(&pivot);
    if (!(d > tol)) break;
    if (rank == capacity) {
      capacity = std::min<Eigen::Index>(n, 2 * capacity);
      factor.conservativeResize(Eigen::NoChange, capacity);
    }
    Eigen::VectorXd col = S.col(pivot);
    if (rank > 0) {
      col.noalias() -= factor.leftCols(rank) * factor.row(pivot).head(rank).transpose();
    }
    col /= std::sqrt(d);
    residual -= col.cwiseAbs2();
    residual(pivot) = 0.0;
    factor.col(rank) = col;
    ++rank;
  }
  factor.conservativeResize(Eigen::NoChange, rank);
  return factor;
}

double operator_norm(const Eigen::MatrixXd& A) {
  const auto sv = singular_values(A);
  return sv.empty() ? 0.0 : sv.front();
}

}  // namespace mixcomp
