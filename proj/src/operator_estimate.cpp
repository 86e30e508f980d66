#include "mixcomp/operator_estimate.hpp"

#include <algorithm>
#include <string>

#include "mixcomp/error.hpp"

namespace mixcomp {

ComponentSample::ComponentSample(ObservationMatrix values, DataKind kind)
    : values_(std::move(values)), kind_(kind) {
  if (values_.cols() < 1) throw Error(ErrorCode::InvalidArgument, "component dimension must be >= 1");
  if (values_.rows() < 1) throw Error(ErrorCode::InvalidArgument, "component needs at least one observation");
  if (!values_.allFinite()) throw Error(ErrorCode::NonFinite, "component sample has NaN/Inf values");
}

PairData::PairData(ComponentSample l, ComponentSample r) : left(std::move(l)), right(std::move(r)) {
  if (left.size() != right.size()) {
    throw Error(ErrorCode::DimensionMismatch, "paired components have " + std::to_string(left.size()) +
                                                  " and " + std::to_string(right.size()) + " observations");
  }
}

Sample::Sample(std::vector<ComponentSample> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "sample has no components");
  for (const auto& c : components_) {
    if (c.size() != components_.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, "components differ in number of observations");
    }
  }
}

ComponentSample merge_components(const Sample& sample, std::span<const int> indices) {
  if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "empty component block");
  Eigen::Index cols = 0;
  bool all_discrete = true;
  for (int k : indices) {
    const auto& c = sample.component(static_cast<std::size_t>(k));
    cols += c.dim();
    all_discrete = all_discrete && c.kind() == DataKind::discrete;
  }
  if (indices.size() == 1) return sample.component(static_cast<std::size_t>(indices[0]));
  ObservationMatrix merged(static_cast<Eigen::Index>(sample.size()), cols);
  Eigen::Index offset = 0;
  for (int k : indices) {
    const auto& c = sample.component(static_cast<std::size_t>(k));
    merged.middleCols(offset, c.dim()) = c.values();
    offset += c.dim();
  }
  return {std::move(merged), all_discrete ? DataKind::discrete : DataKind::continuous};
}

Eigen::MatrixXd build_gram(const ComponentSample& comp, const KernelSpec& spec) {
  validate(spec);
  if (spec.dim != comp.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel dim " + std::to_string(spec.dim) +
                                                  " vs component dim " + std::to_string(comp.dim()));
  }
  const auto n = static_cast<Eigen::Index>(comp.size());
  Eigen::MatrixXd W(n, n);
  const double diag = phi_diag(spec);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto xj = comp.row(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < j; ++i) {
      W(i, j) = phi_vec(spec, comp.row(static_cast<std::size_t>(i)), xj);
    }
    W(j, j) = diag;
  }
  W.triangularView<Eigen::StrictlyLower>() = W.transpose();
  return W;
}

Eigen::MatrixXd build_ahat(const Eigen::MatrixXd& W1, const Eigen::MatrixXd& W2) {
  if (W1.rows() != W2.rows() || W1.cols() != W2.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Gram matrices differ in size");
  }
  const double n = static_cast<double>(W1.rows());
  Eigen::MatrixXd A = psd_sqrt(W2) * psd_sqrt(W1);
  A /= n;
  return A;
}

PreparedComponent prepare_component(const ComponentSample& comp, const KernelSpec& spec,
                                    SpectrumMethod method) {
  PreparedComponent out{spec, build_gram(comp, spec), {}};
  if (method == SpectrumMethod::factored) out.factor = pivoted_cholesky(out.gram);
  return out;
}

Spectrum spectrum_from_prepared(const PreparedComponent& left, const PreparedComponent& right,
                                SpectrumMethod method) {
  const Eigen::Index n = left.gram.rows();
  if (right.gram.rows() != n) throw Error(ErrorCode::DimensionMismatch, "Gram matrices differ in size");
  std::vector<double> sigmas;
  if (method == SpectrumMethod::dense) {
    sigmas = singular_values(build_ahat(left.gram, right.gram));
  } else {
    if (left.factor.rows() != n || right.factor.rows() != n) {
      throw Error(ErrorCode::InvalidArgument, "component was prepared without a factor");
    }
    const Eigen::MatrixXd cross = right.factor.transpose() * left.factor;
    sigmas = singular_values(cross);
    for (double& s : sigmas) s /= static_cast<double>(n);
    sigmas.resize(static_cast<std::size_t>(n), 0.0);
  }
  return make_spectrum(std::move(sigmas));
}

Spectrum spectrum(const PairData& pair, const KernelSpec& k1, const KernelSpec& k2,
                  SpectrumMethod method) {
  const auto left = prepare_component(pair.left, k1, method);
  const auto right = prepare_component(pair.right, k2, method);
  return spectrum_from_prepared(left, right, method);
}

}  // namespace mixcomp
