#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "mixcomp/error.hpp"
#include "mixcomp/pdelta.hpp"
#include "mixcomp/simulate.hpp"

using namespace mixcomp;
using Catch::Approx;

namespace {

ComponentSample column(const std::vector<double>& v) {
  ObservationMatrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return ComponentSample(m);
}

std::vector<double> values_of(const ComponentSample& c) {
  return {c.values().data(), c.values().data() + c.values().size()};
}

}  // namespace

TEST_CASE("equiprobable edges use the right-continuous quantile", "[pdelta]") {
  const std::vector<double> eight{8, 3, 1, 5, 2, 7, 4, 6};
  CHECK(equiprobable_edges(eight, 4).edges == std::vector<double>{2, 4, 6});
  const std::vector<double> four{1, 2, 3, 4};
  CHECK(equiprobable_edges(four, 2).edges == std::vector<double>{2});
  const std::vector<double> three{1, 2, 3};
  CHECK(equiprobable_edges(three, 2).edges == std::vector<double>{2});
}

TEST_CASE("equiprobable edges error paths", "[pdelta]") {
  const std::vector<double> constant{1, 1, 1, 1};
  try {
    (void)equiprobable_edges(constant, 2);
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(equiprobable_edges(two, 3), Error);
  CHECK_THROWS_AS(equiprobable_edges(two, 1), Error);
}

TEST_CASE("cells are right-closed with open ends", "[pdelta]") {
  const Partition1D p{{1.0, 2.0}};
  CHECK(p.cell_count() == 3);
  CHECK(p.cell_of(-100.0) == 0);
  CHECK(p.cell_of(1.0) == 0);
  CHECK(p.cell_of(1.5) == 1);
  CHECK(p.cell_of(2.0) == 1);
  CHECK(p.cell_of(2.0000001) == 2);
}

TEST_CASE("P_Delta entries are probabilities", "[pdelta][property]") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  std::vector<double> a(500), b(500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = nd(rng);
    b[i] = a[i] + nd(rng);
  }
  const PairData pair(column(a), column(b));
  const auto p1 = equiprobable_edges(a, 4);
  const auto p2 = equiprobable_edges(b, 5);
  const auto P = build_pdelta_hat(pair, p1, p2);
  REQUIRE(P.rows() == 4);
  REQUIRE(P.cols() == 5);
  CHECK(P.minCoeff() >= 0.0);
  CHECK(P.sum() == Approx(1.0).epsilon(1e-14));
  // Equiprobable rows: each marginal is 1/4 exactly for distinct values.
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(P.row(i).sum() == Approx(0.25));

  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> pa(a.size()), pb(b.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pa[i] = a[static_cast<std::size_t>(perm[i])];
    pb[i] = b[static_cast<std::size_t>(perm[i])];
  }
  CHECK(build_pdelta_hat(PairData(column(pa), column(pb)), p1, p2) == P);
}

TEST_CASE("P_Delta rejects multivariate components", "[pdelta]") {
  ObservationMatrix two(3, 2);
  two.setRandom();
  const PairData pair(ComponentSample(two), column({1, 2, 3}));
  const Partition1D p{{0.0}};
  CHECK_THROWS_AS(build_pdelta_hat(pair, p, p), Error);
}

TEST_CASE("P_Delta spectrum small cases", "[pdelta]") {
  const Eigen::MatrixXd D = Eigen::MatrixXd::Identity(3, 3) / 3.0;
  const auto s = pdelta_spectrum(D);
  for (double v : s.sigmas) CHECK(v == Approx(1.0 / 3.0));

  Eigen::VectorXd u(3), v(3);
  u << 0.2, 0.3, 0.5;
  v << 0.6, 0.3, 0.1;
  const auto r1 = pdelta_spectrum(u * v.transpose());
  CHECK(r1.sigmas[0] > 0.1);
  CHECK(r1.sigmas[1] < 1e-15);
}

TEST_CASE("P_Delta on the uniform design", "[pdelta]") {
  const auto data = generate(builtin_design(2), 20000, 4);
  const PairData pair(data.sample.component(0), data.sample.component(1));
  const Partition1D aligned{{1.0, 2.0}};
  const auto P = build_pdelta_hat(pair, aligned, aligned);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(P(i, i) == Approx(1.0 / 3.0).margin(0.015));
    for (Eigen::Index j = 0; j < 3; ++j) {
      if (i != j) CHECK(P(i, j) == 0.0);
    }
  }

  const auto small = generate(builtin_design(2), 2000, 4);
  const PairData sp(small.sample.component(0), small.sample.component(1));
  const auto P4 = build_pdelta_hat(sp, equiprobable_edges(values_of(sp.left), 4),
                                   equiprobable_edges(values_of(sp.right), 4));
  const auto s = pdelta_spectrum(P4);
  CHECK(s.sigmas[2] > 0.05);
}

TEST_CASE("P_Delta of independent data is nearly rank one", "[pdelta]") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  std::vector<double> a(20000), b(20000);
  for (auto& x : a) x = nd(rng);
  for (auto& x : b) x = nd(rng);
  const auto P = build_pdelta_hat(PairData(column(a), column(b)), equiprobable_edges(a, 3),
                                  equiprobable_edges(b, 3));
  const auto s = pdelta_spectrum(P);
  CHECK(s.sigmas[0] == Approx(1.0 / 3.0).margin(0.01));
  CHECK(s.sigmas[1] < 0.01);
}
