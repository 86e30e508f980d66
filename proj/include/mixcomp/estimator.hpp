#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "mixcomp/kernels.hpp"
#include "mixcomp/linalg.hpp"
#include "mixcomp/operator_estimate.hpp"
#include "mixcomp/threshold.hpp"

namespace mixcomp {

// h = constant * (mean per-coordinate sample sd) * N^{-1/6}
struct SilvermanBandwidth {
  double constant = 1.06;
};

struct FixedBandwidth {
  double h = 1.0;
};

using BandwidthRule = std::variant<SilvermanBandwidth, FixedBandwidth>;

enum class Strategy { pairs, bipartitions };
enum class ThresholdForm { solved, closed_form };

struct EstimatorConfig {
  double delta = 0.05;
  KernelFamily kernel = KernelFamily::gaussian;
  BandwidthRule bandwidth = SilvermanBandwidth{};
  Strategy strategy = Strategy::pairs;
  ThresholdForm threshold = ThresholdForm::solved;
  VarianceTerm variance = VarianceTerm::dropped;
  std::size_t max_partitions = 256;
  SpectrumMethod spectrum_method = SpectrumMethod::factored;
};

// Throws InvalidArgument / BadDelta on an unusable configuration.
void validate(const EstimatorConfig& cfg);

double silverman_bandwidth(const ComponentSample& comp, std::size_t n, double constant = 1.06);

// Bandwidth the config assigns to a component.
double select_bandwidth(const ComponentSample& comp, const BandwidthRule& rule);

struct PairEstimate {
  std::size_t m_hat = 0;
  Spectrum spectrum;
  double tau = 0.0;
  double h_left = 0.0;
  double h_right = 0.0;
  ConcentrationStats stats;
  std::vector<int> left_indices;
  std::vector<int> right_indices;
};

struct Estimate {
  std::size_t m_hat = 0;
  Strategy strategy = Strategy::pairs;
  std::vector<PairEstimate> per_unit;
  std::vector<std::string> warnings;
};

// #{j : r_j >= tau}; tail norms are nonincreasing so this is a prefix length.
std::size_t count_at_or_above(std::span<const double> tail_norms, double tau);

// Threshold for given statistics under the configured form.
double threshold_for(const ConcentrationStats& stats, const KernelSpec& k1, const KernelSpec& k2,
                     const EstimatorConfig& cfg);

PairEstimate estimate_pair(const PairData& pair, const EstimatorConfig& cfg);

// Nontrivial bipartitions of {0..K-1}, each given by its smaller block (the block holding
// index 0 when both halves have K/2 members). Ordered by block size, then lexicographically;
// at most max_count are produced.
std::vector<std::vector<int>> enumerate_bipartitions(int num_components, std::size_t max_count);

Estimate estimate(const Sample& sample, const EstimatorConfig& cfg);

std::string to_string(Strategy s);
std::string to_string(ThresholdForm f);
std::string to_string(KernelFamily f);
std::string to_string(SpectrumMethod m);
std::string to_string(VarianceTerm v);

}  // namespace mixcomp
