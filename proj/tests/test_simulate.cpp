#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "recpart/exact.hpp"
#include "recpart/simulate.hpp"
#include "recpart/stats.hpp"

using namespace recpart;

TEST_CASE("trajectories are right-continuous and reproducible") {
  LociSet z({0.0, 1.0, 3.0});
  auto start = SetPartition::singletons(3);
  auto a = simulate_arg(z, 2.0, start, 50.0, 99);
  auto b = simulate_arg(z, 2.0, start, 50.0, 99);
  REQUIRE(a.times == b.times);
  REQUIRE(a.states == b.states);
  REQUIRE(a.times.front() == 0.0);
  for (std::size_t i = 1; i < a.times.size(); ++i) {
    REQUIRE(a.times[i] > a.times[i - 1]);
    REQUIRE(a.states[i] != a.states[i - 1]);
  }
  REQUIRE(a.t_end == 50.0);
  REQUIRE_THROWS_AS(simulate_arg(z, 0.0, start, 1.0, 1), std::invalid_argument);
}

TEST_CASE("two-locus occupancy approaches the stationary law") {
  double d = 1.5, rho = 2.0;
  LociSet z({0.0, d});
  auto traj = simulate_arg(z, rho, SetPartition::singletons(2), 5e4, 4242);
  PartitionIndex index(traj.state_table);
  auto batches = occupancy_batches(traj, 50);

  std::size_t merged = index.at(SetPartition::coarsest(2));
  double mean = 0.0, ss = 0.0;
  for (const auto& row : batches) mean += row[merged];
  mean /= static_cast<double>(batches.size());
  for (const auto& row : batches) ss += (row[merged] - mean) * (row[merged] - mean);
  double se = std::sqrt(ss / (batches.size() - 1.0) / static_cast<double>(batches.size()));

  double expected = 1.0 / (1.0 + rho * d);
  REQUIRE(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("three-locus occupancy matches the exact solver within batch errors") {
  LociSet z({0.0, 1.0, 3.0});
  double rho = 5.0;
  auto traj = simulate_arg(z, rho, SetPartition::singletons(3), 2e4, 777);
  auto exact = stationary_exact(z, rho);
  PartitionIndex traj_index(traj.state_table);
  auto batches = occupancy_batches(traj, 40);

  for (std::size_t s = 0; s < exact.states.size(); ++s) {
    std::size_t local = traj_index.at(exact.states[s]);
    double mean = 0.0, ss = 0.0;
    for (const auto& row : batches) mean += row[local];
    mean /= static_cast<double>(batches.size());
    for (const auto& row : batches) ss += (row[local] - mean) * (row[local] - mean);
    double se = std::sqrt(ss / (batches.size() - 1.0) / static_cast<double>(batches.size()));
    REQUIRE(std::abs(mean - exact.probability[s]) < 3.5 * se);
  }
}

TEST_CASE("block state merges and splits preserve totals") {
  // blocks: 0 -> [0,1), 1 -> [1,2), 2 -> [2,3), 3 -> [3,4)
  IntervalPartition start({0.0, 1.0, 2.0, 3.0, 4.0}, {0, 1, 2, 3});
  BlockState state(start);
  REQUIRE(state.block_count() == 4);
  REQUIRE(state.segment_count() == 4);
  REQUIRE(state.cover() == Catch::Approx(4.0));

  // merge non-touching blocks 0 and 2: cover gains the trapped gap
  state.merge(0, 2);
  REQUIRE(state.block_count() == 3);
  REQUIRE(state.segment_count() == 4);
  REQUIRE(state.cover() == Catch::Approx(3.0 + 1.0 + 1.0));

  // split at the merge boundary restores the original contents
  std::size_t slot = 0;
  for (std::size_t i = 0; i < state.block_count(); ++i)
    if (state.segments(i).size() == 2) slot = i;
  REQUIRE(state.split(slot, 1.5));
  REQUIRE(state.block_count() == 4);
  REQUIRE(state.segment_count() == 4);
  REQUIRE(state.cover() == Catch::Approx(4.0));
  REQUIRE(state.cache_drift() < 1e-12);
}

TEST_CASE("touching segments fuse when their blocks merge") {
  IntervalPartition start({0.0, 1.0, 2.0}, {0, 1});
  BlockState state(start);
  state.merge(0, 1);
  REQUIRE(state.block_count() == 1);
  REQUIRE(state.segment_count() == 1);
  REQUIRE(state.segments(0).front().a == 0.0);
  REQUIRE(state.segments(0).front().b == 2.0);
}

TEST_CASE("cut points colliding with endpoints are rejected") {
  IntervalPartition start({0.0, 1.0, 2.0, 3.0}, {0, 1, 0});
  BlockState state(start);  // block 0 owns [0,1) and [2,3)
  REQUIRE_FALSE(state.split(0, 1.0));  // existing endpoint
  REQUIRE_FALSE(state.split(0, 0.0));  // span edge
  REQUIRE(state.split(0, 1.5));        // interior gap cut works
}

TEST_CASE("driven block state keeps caches within drift tolerance") {
  Rng rng(1234);
  BlockState state(IntervalPartition::single_block(40.0));
  double rho = 1.0;
  for (int event = 0; event < 120000; ++event) {
    double k = static_cast<double>(state.block_count());
    double coag = 0.5 * k * (k - 1.0);
    double total = coag + rho * state.cover();
    if (rng.uniform() * total < coag) {
      std::size_t a = rng.below(state.block_count());
      std::size_t b = rng.below(state.block_count() - 1);
      if (b >= a) ++b;
      state.merge(a, b);
    } else {
      for (;;) {
        std::size_t slot = state.pick_by_span(rng.uniform());
        double x = rng.uniform(state.min_of(slot), state.sup_of(slot));
        if (state.split(slot, x)) break;
      }
    }
  }
  REQUIRE(state.cache_drift() < 1e-9);
  auto p = state.to_partition();
  REQUIRE(p.extent() == 40.0);
  for (std::size_t i = 1; i < p.labels().size(); ++i)
    REQUIRE(p.labels()[i] != p.labels()[i - 1]);
}

TEST_CASE("interval simulation is deterministic and time-zero is the identity") {
  SimConfig cfg;
  cfg.rho = 1.0;
  cfg.extent = 30.0;
  cfg.t_burn = 0.0;
  cfg.t_max = 4.0;
  cfg.seed = 2024;

  auto start = IntervalPartition::single_block(cfg.extent);
  auto a = simulate_interval(cfg, start);
  auto b = simulate_interval(cfg, start);
  REQUIRE(a.breakpoints() == b.breakpoints());
  REQUIRE(a.labels() == b.labels());

  SimConfig frozen = cfg;
  frozen.t_max = 0.0;
  auto untouched = simulate_interval(frozen, start);
  REQUIRE(untouched.same_partition(start));
}

TEST_CASE("stationary segment counts match the linear identity") {
  SimConfig cfg;
  cfg.rho = 1.0;
  cfg.extent = 50.0;
  cfg.t_burn = 20.0;
  cfg.t_max = 20.0;
  cfg.seed = 31337;
  EnsembleOptions opt;
  opt.count_windows = {{0.0, 25.0}, {25.0, 50.0}};

  auto obs = equilibrium_ensemble(cfg, 400, opt);
  for (std::size_t w = 0; w < opt.count_windows.size(); ++w) {
    double mean = 0.0, ss = 0.0;
    for (const auto& o : obs) mean += static_cast<double>(o.window_segments[w]);
    mean /= static_cast<double>(obs.size());
    for (const auto& o : obs) {
      double d = static_cast<double>(o.window_segments[w]) - mean;
      ss += d * d;
    }
    double se = std::sqrt(ss / (obs.size() - 1.0) / static_cast<double>(obs.size()));
    double expected = 1.0 + cfg.rho * 25.0;
    REQUIRE(std::abs(mean - expected) < 3.0 * se);
  }
}

TEST_CASE("restricting the interval process reproduces the finite-loci law") {
  // law at a fixed transient time, both sides started from the coarsest state
  const double t = 3.0, rho = 1.0, extent = 4.0;
  const std::vector<double> loci{0.5, 2.0, 3.5};
  const int replicates = 2000;

  auto states = enumerate_partitions(2);
  PartitionIndex index(states);
  std::vector<double> from_interval(states.size(), 0.0);
  std::vector<double> from_chain(states.size(), 0.0);

  SimConfig cfg;
  cfg.rho = rho;
  cfg.extent = extent;
  cfg.t_burn = 0.0;
  cfg.t_max = t;
  LociSet z(loci);
  for (int r = 0; r < replicates; ++r) {
    cfg.seed = derive_stream_seed(555, static_cast<std::uint64_t>(r));
    auto p = simulate_interval(cfg, IntervalPartition::single_block(extent));
    from_interval[index.at(p.restricted_to(loci))] += 1.0;

    auto traj = simulate_arg(z, rho, SetPartition::coarsest(3), t,
                             derive_stream_seed(556, static_cast<std::uint64_t>(r)));
    from_chain[index.at(traj.state_table[traj.states.back()])] += 1.0;
  }

  for (std::size_t s = 0; s < states.size(); ++s) {
    double p1 = from_interval[s] / replicates;
    double p2 = from_chain[s] / replicates;
    double pooled = 0.5 * (p1 + p2);
    double se = std::sqrt(std::max(pooled * (1.0 - pooled), 1e-9) * 2.0 / replicates);
    REQUIRE(std::abs(p1 - p2) < 3.5 * se);
  }
}

TEST_CASE("ensembles are schedule independent") {
  SimConfig cfg;
  cfg.rho = 1.0;
  cfg.extent = 40.0;
  cfg.t_burn = 5.0;
  cfg.t_max = 5.0;
  cfg.seed = 808;
  EnsembleOptions serial;
  serial.theta_windows = {{0.0, 1.0}, {0.25, 0.75}};
  serial.count_windows = {{0.0, 20.0}};
  serial.threads = 1;
  EnsembleOptions parallel = serial;
  parallel.threads = 3;

  auto a = equilibrium_ensemble(cfg, 60, serial);
  auto b = equilibrium_ensemble(cfg, 60, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].replicate == b[i].replicate);
    REQUIRE(a[i].leftmost_raw == b[i].leftmost_raw);
    REQUIRE(a[i].segments_total == b[i].segments_total);
    REQUIRE(a[i].theta_mass == b[i].theta_mass);
    REQUIRE(a[i].window_segments == b[i].window_segments);
  }
}
