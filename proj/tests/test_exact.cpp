#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "recpart/exact.hpp"
#include "recpart/scenario.hpp"
#include "recpart/rng.hpp"
#include "test_support.hpp"

using namespace recpart;
using testsupport::random_loci;

TEST_CASE("two-locus generator carries the merge and split rates") {
  double d = 1.7, rho = 3.0;
  auto g = build_generator(LociSet({0.0, d}), rho);
  REQUIRE(g.states.size() == 2);
  PartitionIndex index(g.states);
  auto merged = index.at(SetPartition::coarsest(2));
  auto apart = index.at(SetPartition::singletons(2));
  REQUIRE(g.rates(static_cast<Eigen::Index>(apart), static_cast<Eigen::Index>(merged)) == 1.0);
  REQUIRE(g.rates(static_cast<Eigen::Index>(merged), static_cast<Eigen::Index>(apart)) ==
          Catch::Approx(rho * d));
}

TEST_CASE("generator rows sum to zero with nonnegative off-diagonals") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng.below(4));
    auto z = random_loci(rng, n);
    auto g = build_generator(z, rng.uniform(0.1, 5.0));
    for (Eigen::Index i = 0; i < g.rates.rows(); ++i) {
      REQUIRE(std::abs(g.rates.row(i).sum()) < 1e-10);
      for (Eigen::Index j = 0; j < g.rates.cols(); ++j)
        if (i != j) REQUIRE(g.rates(i, j) >= 0.0);
    }
  }
}

TEST_CASE("total exit rate from the singleton state counts block pairs") {
  auto g = build_generator(LociSet({0.0, 1.0, 3.0}), 1.0);
  PartitionIndex index(g.states);
  auto row = static_cast<Eigen::Index>(index.at(SetPartition::singletons(3)));
  REQUIRE(-g.rates(row, row) == Catch::Approx(3.0));
}

TEST_CASE("two-locus stationary law is exact") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    double eps = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
    double rho = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
    auto table = stationary_exact(LociSet({0.0, eps}), rho);
    PartitionIndex index(table.states);
    double apart = table.probability[index.at(SetPartition::singletons(2))];
    double merged = table.probability[index.at(SetPartition::coarsest(2))];
    double expected_apart = rho * eps / (1.0 + rho * eps);
    REQUIRE(std::abs(apart - expected_apart) < 1e-14);
    REQUIRE(std::abs(merged - 1.0 / (1.0 + rho * eps)) < 1e-14);
  }
  auto balanced = stationary_exact(LociSet({0.0, 1.0}), 1.0);
  REQUIRE(balanced.probability[0] == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("stationary tables are normalized with small residuals") {
  Rng rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 1 + static_cast<int>(rng.below(5));
    auto table = stationary_exact(random_loci(rng, n), rng.uniform(0.2, 8.0));
    double sum = 0.0;
    for (double p : table.probability) {
      REQUIRE(p >= 0.0);
      sum += p;
    }
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(table.residual < 1e-10);
  }
}

TEST_CASE("restriction consistency holds for exact solves") {
  REQUIRE(check_consistency(LociSet({0.0, 1.0, 3.0}), {0, 2}, 1.0) < 1e-10);
  REQUIRE(check_consistency(LociSet({0.0, 1.0, 3.0}), {0, 1, 2}, 2.0) < 1e-14);
  REQUIRE(check_consistency(LociSet({0.0, 1.0, 2.0, 5.0}), {0, 3}, 3.0) < 1e-10);
}

TEST_CASE("stationary laws are invariant under the rate-distance rescaling") {
  auto two_a = stationary_exact(LociSet({0.0, 1.0}), 7.0);
  auto two_b = stationary_exact(LociSet({0.0, 7.0}), 1.0);
  for (std::size_t i = 0; i < two_a.probability.size(); ++i)
    REQUIRE(std::abs(two_a.probability[i] - two_b.probability[i]) < 1e-12);

  REQUIRE(check_scaling(LociSet({0.0, 1.0, 3.0}), 10.0, 1.0) < 1e-10);
  for (double lambda : {0.5, 2.0, 10.0})
    REQUIRE(check_scaling(LociSet({0.0, 1.0, 3.0}), 10.0, lambda) < 1e-10);
}

TEST_CASE("hitting probability is one when the target is the only first jump") {
  REQUIRE(hitting_probability(LociSet({0.0, 1.0}), 2.0, SetPartition::coarsest(2)) ==
          Catch::Approx(1.0));
  REQUIRE_THROWS_AS(hitting_probability(LociSet({0.0, 1.0}), 2.0, SetPartition::singletons(2)),
                    std::invalid_argument);
}

TEST_CASE("hitting probabilities stay in the unit interval") {
  Rng rng(53);
  auto z = LociSet({0.0, 1.0, 3.0});
  auto states = enumerate_partitions(2);
  for (const auto& target : states) {
    if (target.order() == 0) continue;
    for (double rho : {0.5, 5.0, 50.0}) {
      double p = hitting_probability(z, rho, target);
      REQUIRE(p >= 0.0);
      REQUIRE(p <= 1.0);
    }
  }
}

TEST_CASE("hitting probability approaches its high-recombination form") {
  auto z = LociSet({0.0, 1.0, 3.0});
  auto target = SetPartition::coarsest(3);
  double previous_error = 1e9;
  for (double rho : {10.0, 100.0, 1000.0}) {
    double exact = hitting_probability(z, rho, target);
    double approx = hitting_approx(target, z, rho);
    double rel = std::abs(exact - approx) / exact;
    REQUIRE(rel < previous_error);
    previous_error = rel;
  }
  REQUIRE(previous_error < 1e-2);
}

TEST_CASE("oversized loci sets are rejected by the dense solver") {
  std::vector<double> pos;
  for (int i = 0; i < 10; ++i) pos.push_back(static_cast<double>(i));
  REQUIRE_THROWS_AS(build_generator(LociSet(pos), 1.0), std::length_error);
}
