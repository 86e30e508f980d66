#include "mixcomp/pdelta.hpp"

#include <algorithm>
#include <string>

#include "mixcomp/error.hpp"

namespace mixcomp {

std::size_t Partition1D::cell_of(double x) const {
  return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
}

Partition1D equiprobable_edges(std::span<const double> values, std::size_t m0) {
  if (m0 < 2) throw Error(ErrorCode::InvalidArgument, "need at least two cells");
  const std::size_t n = values.size();
  if (n < m0) {
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(n) + " points cannot fill " + std::to_string(m0) + " cells");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Partition1D out;
  for (std::size_t k = 1; k < m0; ++k) {
    // ECDF(x_(i)) >= k/M0  <=>  i >= ceil(k N / M0), 1-based.
    const std::size_t idx = (k * n + m0 - 1) / m0;
    const double edge = sorted[idx - 1];
    if (!out.edges.empty() && !(edge > out.edges.back())) {
      throw Error(ErrorCode::TooFewPoints, "tied values collapse cell " + std::to_string(k));
    }
    out.edges.push_back(edge);
  }
  if (!(out.edges.back() < sorted.back())) {
    throw Error(ErrorCode::TooFewPoints, "tied values leave the last cell empty");
  }
  return out;
}

Eigen::MatrixXd build_pdelta_hat(const PairData& pair, const Partition1D& p1, const Partition1D& p2) {
  if (pair.left.dim() != 1 || pair.right.dim() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "P_Delta needs scalar components");
  }
  const std::size_t n = pair.size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p1.cell_count()),
                                                 static_cast<Eigen::Index>(p2.cell_count()));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = p1.cell_of(pair.left.row(i)[0]);
    const auto c = p2.cell_of(pair.right.row(i)[0]);
    counts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += 1.0;
  }
  return counts / static_cast<double>(n);
}

Spectrum pdelta_spectrum(const Eigen::MatrixXd& P) { return make_spectrum(singular_values(P)); }

}  // namespace mixcomp
