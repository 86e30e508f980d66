#include "mixcomp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "mixcomp/error.hpp"

namespace mixcomp {

void validate(const EstimatorConfig& cfg) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw Error(ErrorCode::BadDelta, "delta must lie in (0, 1), got " + std::to_string(cfg.delta));
  }
  if (cfg.threshold == ThresholdForm::closed_form && !(cfg.delta < 0.5)) {
    throw Error(ErrorCode::BadDelta, "closed-form threshold needs delta < 1/2");
  }
  if (const auto* fixed = std::get_if<FixedBandwidth>(&cfg.bandwidth)) {
    if (!(fixed->h > 0.0) || !std::isfinite(fixed->h)) {
      throw Error(ErrorCode::InvalidArgument, "fixed bandwidth must be positive");
    }
  } else if (!(std::get<SilvermanBandwidth>(cfg.bandwidth).constant > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Silverman constant must be positive");
  }
  if (cfg.max_partitions == 0) {
    throw Error(ErrorCode::TooManyPartitions, "max_partitions must be at least 1");
  }
}

double silverman_bandwidth(const ComponentSample& comp, std::size_t n, double constant) {
  const auto& x = comp.values();
  if (x.rows() < 2 || n < 2) {
    throw Error(ErrorCode::InvalidArgument, "Silverman bandwidth needs N >= 2");
  }
  const double rows = static_cast<double>(x.rows());
  double sd_sum = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double mean = x.col(c).mean();
    const double ss = (x.col(c).array() - mean).square().sum();
    sd_sum += std::sqrt(ss / (rows - 1.0));
  }
  const double sd = sd_sum / static_cast<double>(x.cols());
  if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateSample, "component has zero spread");
  return constant * sd * std::pow(static_cast<double>(n), -1.0 / 6.0);
}

double select_bandwidth(const ComponentSample& comp, const BandwidthRule& rule) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&rule)) return fixed->h;
  return silverman_bandwidth(comp, comp.size(), std::get<SilvermanBandwidth>(rule).constant);
}

std::size_t count_at_or_above(std::span<const double> tail_norms, double tau) {
  std::size_t count = 0;
  while (count < tail_norms.size() && tail_norms[count] >= tau) ++count;
  return count;
}

double threshold_for(const ConcentrationStats& stats, const KernelSpec& k1, const KernelSpec& k2,
                     const EstimatorConfig& cfg) {
  if (cfg.threshold == ThresholdForm::solved) return solve_threshold(stats, cfg.variance);
  // The closed form takes the unhalved mean of squared distances and the distribution-free L.
  return closed_form_threshold(analytic_L(k1, k2), 2.0 * stats.sigma2_hat, stats.n, stats.delta);
}

namespace {

PreparedComponent prepare(const ComponentSample& comp, const EstimatorConfig& cfg) {
  const KernelSpec spec{cfg.kernel, select_bandwidth(comp, cfg.bandwidth), comp.dim()};
  return prepare_component(comp, spec, cfg.spectrum_method);
}

PairEstimate estimate_prepared(const PreparedComponent& left, const PreparedComponent& right,
                               const EstimatorConfig& cfg) {
  PairEstimate out;
  out.h_left = left.spec.h;
  out.h_right = right.spec.h;
  out.stats = concentration_stats_from_grams(left.gram, right.gram, cfg.delta);
  out.tau = threshold_for(out.stats, left.spec, right.spec, cfg);
  out.spectrum = spectrum_from_prepared(left, right, cfg.spectrum_method);
  out.m_hat = count_at_or_above(out.spectrum.tail_norms, out.tau);
  return out;
}

}  // namespace

PairEstimate estimate_pair(const PairData& pair, const EstimatorConfig& cfg) {
  validate(cfg);
  if (pair.size() < 2) throw Error(ErrorCode::InvalidArgument, "estimation needs N >= 2");
  auto out = estimate_prepared(prepare(pair.left, cfg), prepare(pair.right, cfg), cfg);
  out.left_indices = {0};
  out.right_indices = {1};
  return out;
}

std::vector<std::vector<int>> enumerate_bipartitions(int num_components, std::size_t max_count) {
  if (num_components < 2) {
    throw Error(ErrorCode::InvalidArgument, "bipartitions need at least two components");
  }
  if (max_count == 0) throw Error(ErrorCode::TooManyPartitions, "partition cap is zero");
  std::vector<std::vector<int>> out;
  const int K = num_components;
  for (int size = 1; size <= K / 2 && out.size() < max_count; ++size) {
    // Lexicographic walk over size-element combinations of {0..K-1}.
    std::vector<int> combo(static_cast<std::size_t>(size));
    std::iota(combo.begin(), combo.end(), 0);
    while (out.size() < max_count) {
      const bool half_split = 2 * size == K;
      if (!half_split || combo.front() == 0) out.push_back(combo);
      int i = size - 1;
      while (i >= 0 && combo[static_cast<std::size_t>(i)] == K - size + i) --i;
      if (i < 0) break;
      ++combo[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) {
        combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return out;
}

Estimate estimate(const Sample& sample, const EstimatorConfig& cfg) {
  validate(cfg);
  const int K = static_cast<int>(sample.num_components());
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "estimation needs at least two components");
  if (sample.size() < 2) throw Error(ErrorCode::InvalidArgument, "estimation needs N >= 2");

  Estimate out;
  out.strategy = cfg.strategy;
  if (cfg.strategy == Strategy::pairs) {
    // Bandwidths depend only on the component, so each Gram matrix is built once.
    std::vector<std::optional<PreparedComponent>> prepared(static_cast<std::size_t>(K));
    for (std::size_t k = 0; k < prepared.size(); ++k) {
      prepared[k] = prepare(sample.component(k), cfg);
    }
    for (int i = 0; i < K; ++i) {
      for (int j = i + 1; j < K; ++j) {
        auto unit = estimate_prepared(*prepared[static_cast<std::size_t>(i)],
                                      *prepared[static_cast<std::size_t>(j)], cfg);
        unit.left_indices = {i};
        unit.right_indices = {j};
        out.per_unit.push_back(std::move(unit));
      }
    }
  } else {
    const auto blocks = enumerate_bipartitions(K, cfg.max_partitions);
    const auto total = (K >= 63) ? ~std::size_t{0} : (std::size_t{1} << (K - 1)) - 1;
    if (blocks.size() < total) {
      out.warnings.push_back("bipartitions truncated to " + std::to_string(blocks.size()) + " of " +
                             std::to_string(total));
    }
    for (const auto& alpha : blocks) {
      std::vector<int> rest;
      for (int k = 0; k < K; ++k) {
        if (!std::binary_search(alpha.begin(), alpha.end(), k)) rest.push_back(k);
      }
      auto unit = estimate_prepared(prepare(merge_components(sample, alpha), cfg),
                                    prepare(merge_components(sample, rest), cfg), cfg);
      unit.left_indices = alpha;
      unit.right_indices = std::move(rest);
      out.per_unit.push_back(std::move(unit));
    }
  }
  for (const auto& unit : out.per_unit) out.m_hat = std::max(out.m_hat, unit.m_hat);
  if (out.m_hat == 0) {
    out.warnings.push_back("m_hat = 0: threshold exceeds every tail norm (r_1 < tau)");
  }
  return out;
}

std::string to_string(Strategy s) { return s == Strategy::pairs ? "pairs" : "bipartitions"; }
std::string to_string(ThresholdForm f) { return f == ThresholdForm::solved ? "solved" : "closed_form"; }
std::string to_string(KernelFamily f) { return f == KernelFamily::gaussian ? "gaussian" : "uniform"; }
std::string to_string(SpectrumMethod m) { return m == SpectrumMethod::factored ? "factored" : "dense"; }
std::string to_string(VarianceTerm v) { return v == VarianceTerm::dropped ? "dropped" : "undropped"; }

}  // namespace mixcomp
