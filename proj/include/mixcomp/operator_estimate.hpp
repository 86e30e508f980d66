#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixcomp/kernels.hpp"
#include "mixcomp/linalg.hpp"

namespace mixcomp {

using ObservationMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class DataKind { continuous, discrete };

// N observations of one (possibly multivariate) component, one row per observation.
// Discrete categories are carried as their 0-indexed integer codes.
class ComponentSample {
 public:
  ComponentSample(ObservationMatrix values, DataKind kind = DataKind::continuous);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  int dim() const { return static_cast<int>(values_.cols()); }
  DataKind kind() const { return kind_; }
  const ObservationMatrix& values() const { return values_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * values_.cols(), static_cast<std::size_t>(values_.cols())};
  }

 private:
  ObservationMatrix values_;
  DataKind kind_;
};

// Paired observations (X^1_i, X^2_i), i = 1..N.
struct PairData {
  ComponentSample left;
  ComponentSample right;

  PairData(ComponentSample l, ComponentSample r);
  std::size_t size() const { return left.size(); }
  ObservationRef observation(std::size_t i) const { return {left.row(i), right.row(i)}; }
};

// Full K-component sample: every component observed on the same N units.
class Sample {
 public:
  explicit Sample(std::vector<ComponentSample> components);

  std::size_t size() const { return components_.front().size(); }
  std::size_t num_components() const { return components_.size(); }
  const ComponentSample& component(std::size_t k) const { return components_.at(k); }
  const std::vector<ComponentSample>& components() const { return components_; }

 private:
  std::vector<ComponentSample> components_;
};

// Concatenates the columns of the listed components into one multivariate block.
// The block is discrete only if every member is.
ComponentSample merge_components(const Sample& sample, std::span<const int> indices);

// W[i][j] = phi^d_h(x_i, x_j). Upper triangle computed, lower mirrored.
Eigen::MatrixXd build_gram(const ComponentSample& comp, const KernelSpec& spec);

// A_h = W2^{1/2} W1^{1/2} / N.
Eigen::MatrixXd build_ahat(const Eigen::MatrixXd& W1, const Eigen::MatrixXd& W2);

enum class SpectrumMethod {
  // Singular values of F2^T F1 / N with W = F F^T from pivoted Cholesky.
  factored,
  // Explicit psd square roots, A_h, then a full SVD.
  dense,
};

// Gram matrix and (for the factored route) its Cholesky factor.
struct PreparedComponent {
  KernelSpec spec;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd factor;
};

PreparedComponent prepare_component(const ComponentSample& comp, const KernelSpec& spec,
                                    SpectrumMethod method);

// Spectrum of A_h built from prepared Gram matrices; sigmas has length N
// (zero-padded past the numerical rank on the factored route).
Spectrum spectrum_from_prepared(const PreparedComponent& left, const PreparedComponent& right,
                                SpectrumMethod method);

Spectrum spectrum(const PairData& pair, const KernelSpec& k1, const KernelSpec& k2,
                  SpectrumMethod method = SpectrumMethod::factored);

}  // namespace mixcomp
