#include <algorithm>
#include <cmath>

#include "mixcomp/cli.hpp"

namespace mixcomp::cli {

using nlohmann::json;

namespace {

json truncated(const std::vector<double>& v, bool full) {
  const auto count = full ? v.size() : std::min(v.size(), kSigmaTruncation);
  return json(std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(count)));
}

}  // namespace

json config_to_json(const EstimatorConfig& cfg) {
  json bw;
  if (const auto* fixed = std::get_if<FixedBandwidth>(&cfg.bandwidth)) {
    bw = {{"rule", "fixed"}, {"h", fixed->h}};
  } else {
    bw = {{"rule", "silverman"}, {"constant", std::get<SilvermanBandwidth>(cfg.bandwidth).constant}};
  }
  return {{"delta", cfg.delta},
          {"kernel", to_string(cfg.kernel)},
          {"bandwidth", bw},
          {"strategy", to_string(cfg.strategy)},
          {"threshold", to_string(cfg.threshold)},
          {"variance", to_string(cfg.variance)},
          {"max_partitions", cfg.max_partitions},
          {"spectrum_method", to_string(cfg.spectrum_method)}};
}

json spectrum_to_json(const Spectrum& s, bool full) {
  return {{"sigmas", truncated(s.sigmas, full)},
          {"tail_norms", truncated(s.tail_norms, full)},
          {"length", s.sigmas.size()},
          {"truncated", !full && s.sigmas.size() > kSigmaTruncation}};
}

json estimate_to_json(const Estimate& est, const EstimatorConfig& cfg, std::size_t n,
                      bool full_spectrum) {
  json units = json::array();
  for (const auto& u : est.per_unit) {
    json unit = {{"indices", {{"left", u.left_indices}, {"right", u.right_indices}}},
                 {"m_hat", u.m_hat},
                 {"tau", u.tau},
                 {"h", {u.h_left, u.h_right}},
                 {"L_hat", u.stats.L_hat},
                 {"sigma2_hat", u.stats.sigma2_hat}};
    unit.update(spectrum_to_json(u.spectrum, full_spectrum));
    units.push_back(std::move(unit));
  }
  return {{"command", "estimate"},
          {"m_hat", est.m_hat},
          {"strategy", to_string(est.strategy)},
          {"n", n},
          {"per_unit", units},
          {"config", config_to_json(cfg)},
          {"warnings", est.warnings}};
}

json frequency_table_to_json(const FrequencyTable& t) {
  json counts = json::object();
  json freqs = json::object();
  for (const auto& [m, c] : t.counts) {
    counts[std::to_string(m)] = c;
    freqs[std::to_string(m)] = t.frequency(m);
  }
  json failures = json::array();
  for (const auto& f : t.failures) failures.push_back({{"replicate", f.replicate}, {"message", f.message}});
  return {{"command", "montecarlo"},
          {"design", t.design},
          {"n", t.n},
          {"reps", t.reps},
          {"base_seed", t.base_seed},
          {"config", config_to_json(t.config)},
          {"counts", counts},
          {"frequencies", freqs},
          {"failures", failures},
          {"per_replicate", t.per_replicate}};
}

}  // namespace mixcomp::cli
