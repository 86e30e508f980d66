#include "mixcomp/simulate.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "mixcomp/error.hpp"

namespace mixcomp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : engine_(splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ULL * (index + 1)))) {}

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double draw(const Law1D& law) {
    if (law.kind == Law1D::Kind::normal) return law.a + law.b * normal();
    return law.a + (law.b - law.a) * uniform();
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<std::vector<Law1D>> scalar_laws(std::initializer_list<Law1D> per_component) {
  std::vector<std::vector<Law1D>> out;
  for (const auto& law : per_component) out.push_back({law});
  return out;
}

}  // namespace

void validate(const MixtureDesign& design) {
  const std::size_t m = design.weights.size();
  if (m == 0) throw Error(ErrorCode::BadDesign, "design has no mixture components");
  double total = 0.0;
  for (double w : design.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::BadDesign, "weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::BadDesign, "weights sum to " + std::to_string(total));
  }
  if (design.laws.size() != m) throw Error(ErrorCode::BadDesign, "need one law table per mixture component");
  const std::size_t k = design.laws.front().size();
  if (k == 0) throw Error(ErrorCode::BadDesign, "design has no observed components");
  for (const auto& per_m : design.laws) {
    if (per_m.size() != k) throw Error(ErrorCode::BadDesign, "ragged component list");
    for (std::size_t c = 0; c < k; ++c) {
      if (per_m[c].empty() || per_m[c].size() != design.laws.front()[c].size()) {
        throw Error(ErrorCode::BadDesign, "component " + std::to_string(c) + " has inconsistent dimension");
      }
      for (const auto& law : per_m[c]) {
        if (!std::isfinite(law.a) || !std::isfinite(law.b)) throw Error(ErrorCode::BadDesign, "non-finite law parameter");
        if (law.kind == Law1D::Kind::normal && !(law.b > 0.0)) throw Error(ErrorCode::BadDesign, "normal sd must be positive");
        if (law.kind == Law1D::Kind::uniform && !(law.b > law.a)) throw Error(ErrorCode::BadDesign, "uniform needs lower < upper");
      }
    }
  }
}

MixtureDesign builtin_design(int number) {
  using L = Law1D;
  const double third = 1.0 / 3.0;
  switch (number) {
    case 1:
      return {"design1", {third, third, third},
              {scalar_laws({L::normal(0, 1), L::normal(0, 1)}), scalar_laws({L::normal(1, 1), L::normal(2, 1)}),
               scalar_laws({L::normal(2, 1), L::normal(1, 1)})}};
    case 2:
    case 4: {
      const int m = number == 2 ? 3 : 5;
      MixtureDesign d{"design" + std::to_string(number), std::vector<double>(m, 1.0 / m), {}};
      for (int j = 0; j < m; ++j) {
        d.laws.push_back(scalar_laws({L::uniform(j, j + 1), L::uniform(j, j + 1)}));
      }
      return d;
    }
    case 3:
      return {"design3", {third, third, third},
              {scalar_laws({L::normal(0, 1), L::normal(0, 1)}), scalar_laws({L::normal(3, 1), L::normal(3, 1)}),
               scalar_laws({L::normal(-3, 1), L::normal(-3, 1)})}};
    case 5: {
      const std::vector<std::vector<double>> means = {
          {0, 0, 0, 0, 0, 0, 0, 0},
          {1.0, 2.0, 0.5, 1.0, 0.75, 1.25, 0.25, 0.5},
          {2.0, 1.0, 1.0, 0.5, 1.25, 0.75, 0.5, 0.25}};
      MixtureDesign d{"design5", {third, third, third}, {}};
      for (const auto& mu : means) {
        std::vector<std::vector<Law1D>> comps;
        for (double v : mu) comps.push_back({L::normal(v, 1)});
        d.laws.push_back(std::move(comps));
      }
      return d;
    }
    default:
      throw Error(ErrorCode::BadDesign, "unknown builtin design " + std::to_string(number));
  }
}

GeneratedSample generate(const MixtureDesign& design, std::size_t n, std::uint64_t seed) {
  validate(design);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  const std::size_t k = design.num_components();
  std::vector<double> cumulative(design.weights.size());
  std::partial_sum(design.weights.begin(), design.weights.end(), cumulative.begin());

  Stream label_stream(seed, 0);
  std::vector<Stream> streams;
  std::vector<ObservationMatrix> values;
  for (std::size_t c = 0; c < k; ++c) {
    streams.emplace_back(seed, c + 1);
    values.emplace_back(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(design.laws.front()[c].size()));
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = label_stream.uniform() * cumulative.back();
    auto m = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    m = std::min(m, cumulative.size() - 1);
    labels[i] = static_cast<int>(m);
    for (std::size_t c = 0; c < k; ++c) {
      const auto& laws = design.laws[m][c];
      for (std::size_t j = 0; j < laws.size(); ++j) {
        values[c](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = streams[c].draw(laws[j]);
      }
    }
  }
  std::vector<ComponentSample> comps;
  for (auto& v : values) comps.emplace_back(std::move(v));
  return {Sample(std::move(comps)), std::move(labels)};
}

double FrequencyTable::frequency(std::size_t m) const {
  const auto it = counts.find(m);
  return reps == 0 || it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(reps);
}

double FrequencyTable::frequency_above(std::size_t m) const {
  std::size_t total = 0;
  for (const auto& [value, count] : counts) {
    if (value > m) total += count;
  }
  return reps == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(reps);
}

FrequencyTable run_montecarlo(const MixtureDesign& design, std::size_t n, std::size_t reps,
                              const EstimatorConfig& cfg, std::uint64_t base_seed, unsigned threads) {
  validate(design);
  validate(cfg);
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
  FrequencyTable table{design.name, n, reps, base_seed, cfg, {}, {}, std::vector<long>(reps, -1)};
  std::vector<std::string> messages(reps);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < reps; r = next++) {
      try {
        const auto data = generate(design, n, base_seed + r);
        table.per_replicate[r] = static_cast<long>(estimate(data.sample, cfg).m_hat);
      } catch (const std::exception& e) {
        messages[r] = e.what();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (std::size_t r = 0; r < reps; ++r) {
    if (table.per_replicate[r] < 0) {
      table.failures.push_back({r, messages[r]});
    } else {
      ++table.counts[static_cast<std::size_t>(table.per_replicate[r])];
    }
  }
  return table;
}

}  // namespace mixcomp
