#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "mixcomp/error.hpp"
#include "mixcomp/operator_estimate.hpp"
#include "mixcomp/simulate.hpp"

using namespace mixcomp;
using Catch::Approx;

namespace {

ComponentSample column(std::initializer_list<double> v) {
  ObservationMatrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return ComponentSample(m);
}

ComponentSample random_component(std::mt19937_64& rng, std::size_t n, int d, double shift = 0.0) {
  std::normal_distribution<double> nd(shift, 1.0);
  ObservationMatrix m(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = nd(rng);
  return ComponentSample(m);
}

// Correlated pair: both coordinates driven by a shared label.
PairData random_pair(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> nd;
  ObservationMatrix a(static_cast<Eigen::Index>(n), 1), b(static_cast<Eigen::Index>(n), 1);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double mu = coin(rng) ? 2.0 : 0.0;
    a(i, 0) = mu + nd(rng);
    b(i, 0) = mu + nd(rng);
  }
  return PairData(ComponentSample(a), ComponentSample(b));
}

const KernelSpec kG{KernelFamily::gaussian, 0.5, 1};

PairData permuted(const PairData& p, const std::vector<int>& perm) {
  ObservationMatrix a(p.left.values().rows(), p.left.dim());
  ObservationMatrix b(p.right.values().rows(), p.right.dim());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = p.left.values().row(perm[i]);
    b.row(static_cast<Eigen::Index>(i)) = p.right.values().row(perm[i]);
  }
  return PairData(ComponentSample(a), ComponentSample(b));
}

}  // namespace

TEST_CASE("sample containers validate their input", "[operator]") {
  ObservationMatrix bad(2, 1);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(ComponentSample(bad), Error);
  CHECK_THROWS_AS(ComponentSample(ObservationMatrix(0, 1)), Error);
  try {
    PairData(column({1, 2, 3}), column({1, 2}));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(Sample({column({1, 2}), column({1, 2, 3})}), Error);
}

TEST_CASE("merge_components concatenates columns", "[operator]") {
  Sample s({column({1, 2}), column({3, 4}), column({5, 6})});
  const std::vector<int> idx{0, 2};
  const auto merged = merge_components(s, idx);
  REQUIRE(merged.dim() == 2);
  CHECK(merged.values()(1, 0) == 2);
  CHECK(merged.values()(1, 1) == 6);

  ObservationMatrix d(2, 1);
  d << 0, 1;
  Sample mixed({ComponentSample(d, DataKind::discrete), column({3, 4})});
  const std::vector<int> both{0, 1};
  const std::vector<int> first{0};
  CHECK(merge_components(mixed, both).kind() == DataKind::continuous);
  CHECK(merge_components(mixed, first).kind() == DataKind::discrete);
}

TEST_CASE("build_gram closed-form entries", "[operator]") {
  auto W = build_gram(column({0.0}), kG);
  REQUIRE(W.rows() == 1);
  CHECK(W(0, 0) == Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));

  W = build_gram(column({0.7, 0.7}), kG);
  CHECK(W(0, 1) == W(0, 0));
  CHECK(W(1, 0) == W(0, 0));

  W = build_gram(column({0.0, 1.0}), kG);
  CHECK(W(0, 1) == Approx(0.20755374871029736).epsilon(1e-14));
  CHECK(W(1, 0) == W(0, 1));

  try {
    (void)build_gram(column({0.0}), KernelSpec{KernelFamily::gaussian, 0.5, 2});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("Gram matrices are numerically PSD", "[operator][property]") {
  std::mt19937_64 rng(1);
  for (auto family : {KernelFamily::gaussian, KernelFamily::uniform}) {
    for (int d : {1, 3}) {
      const auto comp = random_component(rng, 60, d);
      const auto W = build_gram(comp, KernelSpec{family, 0.4, d});
      CHECK((W - W.transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
      const double lmax = es.eigenvalues().maxCoeff();
      CHECK(es.eigenvalues().minCoeff() >=
            -60.0 * lmax * std::numeric_limits<double>::epsilon() * 10.0);
    }
  }
}

TEST_CASE("build_ahat small cases", "[operator]") {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
  const auto A = build_ahat(I, I);
  CHECK((A - I / 4.0).norm() < 1e-15);

  // N = 1: the only singular value is phi(0,0).
  const PairData one(column({0.3}), column({-1.2}));
  const auto s = spectrum(one, kG, kG, SpectrumMethod::dense);
  REQUIRE(s.sigmas.size() == 1);
  CHECK(s.sigmas[0] == Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-13));
  const auto f = spectrum(one, kG, kG, SpectrumMethod::factored);
  CHECK(f.sigmas[0] == Approx(s.sigmas[0]).epsilon(1e-13));
}

TEST_CASE("duplicated observations give a single nonzero singular value", "[operator]") {
  const PairData dup(column({0.4, 0.4, 0.4, 0.4, 0.4}), column({2.0, 2.0, 2.0, 2.0, 2.0}));
  for (auto method : {SpectrumMethod::dense, SpectrumMethod::factored}) {
    const auto s = spectrum(dup, kG, kG, method);
    REQUIRE(s.sigmas.size() == 5);
    CHECK(s.sigmas[0] == Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
    for (std::size_t i = 1; i < 5; ++i) CHECK(s.sigmas[i] < 1e-12);
  }
}

TEST_CASE("squared singular values match eigenvalues of W1 W2 / N^2", "[operator][property]") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(3, 20);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    const auto pair = random_pair(rng, n);
    const auto W1 = build_gram(pair.left, kG);
    const auto W2 = build_gram(pair.right, kG);
    const auto s = spectrum(pair, kG, kG, SpectrumMethod::dense);
    const double nn = static_cast<double>(n * n);
    Eigen::EigenSolver<Eigen::MatrixXd> es(W1 * W2 / nn, false);
    std::vector<double> lambda;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) lambda.push_back(es.eigenvalues()(i).real());
    std::sort(lambda.rbegin(), lambda.rend());
    const double s1 = s.sigmas[0] * s.sigmas[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(s.sigmas[i] * s.sigmas[i] - lambda[i]));
    }
    CHECK(worst <= 1e-8 * s1);
  }
}

TEST_CASE("factored and dense spectra agree", "[operator][property]") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {10u, 50u, 150u}) {
    const auto pair = random_pair(rng, n);
    const auto dense = spectrum(pair, kG, kG, SpectrumMethod::dense);
    const auto fact = spectrum(pair, kG, kG, SpectrumMethod::factored);
    REQUIRE(fact.sigmas.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(dense.sigmas[i] - fact.sigmas[i]) <= 1e-10);
      CHECK(std::abs(dense.tail_norms[i] - fact.tail_norms[i]) <= 1e-10);
    }
  }
}

TEST_CASE("permutation and component-swap invariance", "[operator][property]") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pair = random_pair(rng, 40);
    std::vector<int> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const KernelSpec k2{KernelFamily::gaussian, 0.8, 1};
    for (auto method : {SpectrumMethod::dense, SpectrumMethod::factored}) {
      const auto base = spectrum(pair, kG, k2, method);
      const auto perm_s = spectrum(permuted(pair, perm), kG, k2, method);
      const auto swap_s = spectrum(PairData(pair.right, pair.left), k2, kG, method);
      double worst = 0.0;
      for (std::size_t i = 0; i < base.sigmas.size(); ++i) {
        worst = std::max({worst, std::abs(base.sigmas[i] - perm_s.sigmas[i]),
                          std::abs(base.sigmas[i] - swap_s.sigmas[i])});
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("a duplicated observation adds at most one singular value above a cutoff",
          "[operator][property]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pair = random_pair(rng, 30);
    std::vector<int> idx(30);
    std::iota(idx.begin(), idx.end(), 0);
    idx.push_back(static_cast<int>(rng() % 30));
    const auto bigger = permuted(pair, idx);
    const auto before = spectrum(pair, kG, kG);
    const auto after = spectrum(bigger, kG, kG);
    for (double cutoff : {1e-3, 1e-2, 0.05}) {
      const auto count = [cutoff](const Spectrum& s) {
        return std::count_if(s.sigmas.begin(), s.sigmas.end(), [cutoff](double v) { return v > cutoff; });
      };
      CHECK(count(after) <= count(before) + 1);
    }
  }
}

TEST_CASE("uniform design spectrum concentrates near the mixing weights", "[operator][slow]") {
  const auto data = generate(builtin_design(2), 1500, 77);
  const PairData pair(data.sample.component(0), data.sample.component(1));
  const KernelSpec k{KernelFamily::gaussian, 0.05, 1};
  const auto s = spectrum(pair, k, k);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s.sigmas[static_cast<std::size_t>(i)] - 1.0 / 3.0) <= 0.08);
  CHECK(s.sigmas[3] <= 0.08);
}
