#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixcomp/linalg.hpp"
#include "mixcomp/operator_estimate.hpp"

namespace mixcomp {

// Cells (-inf, e_1], (e_1, e_2], ..., (e_{M0-1}, +inf) from strictly increasing edges.
struct Partition1D {
  std::vector<double> edges;

  std::size_t cell_count() const { return edges.size() + 1; }
  std::size_t cell_of(double x) const;
};

// Edges at the right-continuous empirical quantiles k/M0, k = 1..M0-1: the smallest
// order statistic whose ECDF value reaches k/M0. TooFewPoints when N < M0 or ties
// collapse two edges.
Partition1D equiprobable_edges(std::span<const double> values, std::size_t m0);

// Empirical cell probabilities of (X^1, X^2) over the rectangular partition p1 x p2.
Eigen::MatrixXd build_pdelta_hat(const PairData& pair, const Partition1D& p1, const Partition1D& p2);

Spectrum pdelta_spectrum(const Eigen::MatrixXd& P);

}  // namespace mixcomp
