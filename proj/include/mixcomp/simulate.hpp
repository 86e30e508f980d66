#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mixcomp/estimator.hpp"
#include "mixcomp/operator_estimate.hpp"

namespace mixcomp {

// One-dimensional conditional law of a single coordinate.
struct Law1D {
  enum class Kind { normal, uniform };
  Kind kind = Kind::normal;
  double a = 0.0;  // normal: mean;  uniform: lower end
  double b = 1.0;  // normal: sd;    uniform: upper end

  static Law1D normal(double mean, double sd) { return {Kind::normal, mean, sd}; }
  static Law1D uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
};

// Finite mixture with conditionally independent components:
//   P(Theta = m) = weights[m];  coordinate c of component k | Theta = m ~ laws[m][k][c].
struct MixtureDesign {
  std::string name;
  std::vector<double> weights;
  std::vector<std::vector<std::vector<Law1D>>> laws;

  std::size_t num_mixture_components() const { return weights.size(); }
  std::size_t num_components() const { return laws.empty() ? 0 : laws.front().size(); }
};

// Throws BadDesign on invalid weights, ragged law tables or bad law parameters.
void validate(const MixtureDesign& design);

// Builtin designs 1-5 (three- and five-component normal and uniform mixtures).
MixtureDesign builtin_design(int number);

struct GeneratedSample {
  Sample sample;
  std::vector<int> labels;
};

// N i.i.d. draws. RNG: MT19937-64 streams seeded through SplitMix64; stream 0 draws labels,
// stream 1+k draws component k. Uniforms take the top 53 bits; normals use Box-Muller with
// two uniforms each. Observation i depends only on draws 0..i of each stream, so a sample
// of size N is a prefix of any larger sample with the same seed.
GeneratedSample generate(const MixtureDesign& design, std::size_t n, std::uint64_t seed);

struct ReplicateFailure {
  std::size_t replicate = 0;
  std::string message;
};

struct FrequencyTable {
  std::string design;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t base_seed = 0;
  EstimatorConfig config;
  std::map<std::size_t, std::size_t> counts;  // m_hat -> replicates
  std::vector<ReplicateFailure> failures;
  std::vector<long> per_replicate;  // m_hat, or -1 for a failed replicate

  double frequency(std::size_t m) const;
  double frequency_above(std::size_t m) const;
};

// Replicate r uses seed base_seed + r. Replicates run on up to `threads` workers and are
// aggregated in replicate order; failures are recorded, not thrown.
FrequencyTable run_montecarlo(const MixtureDesign& design, std::size_t n, std::size_t reps,
                              const EstimatorConfig& cfg, std::uint64_t base_seed,
                              unsigned threads = 1);

}  // namespace mixcomp
