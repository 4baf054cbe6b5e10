#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "recpart/partition.hpp"

namespace recpart {

// Dense solves keep a 4140-state ceiling (Bell(8)); the full enumeration
// ceiling of n = 9 would need a 115975^2 matrix, which is not a dense-LU
// problem.
inline constexpr int kMaxDenseSolveIndex = 7;

// Transition-rate matrix of the partition-valued ancestry chain on P_z:
// single coagulations at rate 1, single fragmentations at rate
// rho * (flanking gap).  States follow enumerate_partitions order so that
// tables built for different loci sets of equal size align positionally.
struct GeneratorMatrix {
  LociSet loci;
  double rho;
  std::vector<SetPartition> states;
  Eigen::MatrixXd rates;  // rows sum to zero
};

inline GeneratorMatrix build_generator(const LociSet& z, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("build_generator: rho must be > 0");
  if (z.max_index() > kMaxDenseSolveIndex)
    throw std::length_error("build_generator: dense solves support at most 8 loci");

  GeneratorMatrix g{z, rho, enumerate_partitions(z.max_index()), {}};
  const std::size_t count = g.states.size();
  PartitionIndex index(g.states);
  g.rates = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));

  for (std::size_t i = 0; i < count; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    double out_rate = 0.0;
    for (const auto& merged : merge_pairs(g.states[i])) {
      g.rates(row, static_cast<Eigen::Index>(index.at(merged))) += 1.0;
      out_rate += 1.0;
    }
    for (const auto& move : split_moves(g.states[i], z)) {
      double rate = rho * move.rate;
      g.rates(row, static_cast<Eigen::Index>(index.at(move.result))) += rate;
      out_rate += rate;
    }
    g.rates(row, row) = -out_rate;
  }
  return g;
}

struct StationaryTable {
  LociSet loci;
  double rho;
  std::vector<SetPartition> states;
  std::vector<double> probability;
  double residual;  // max-norm of mu Q
};

// Solves mu Q = 0, sum(mu) = 1 by replacing the last balance equation of the
// transposed system with the normalization row and LU-factoring.
inline StationaryTable stationary_exact(const LociSet& z, double rho) {
  GeneratorMatrix g = build_generator(z, rho);
  const auto count = static_cast<Eigen::Index>(g.states.size());

  Eigen::MatrixXd lhs = g.rates.transpose();
  lhs.row(count - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
  rhs(count - 1) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  Eigen::VectorXd mu = lu.solve(rhs);
  if (!mu.allFinite()) throw std::runtime_error("stationary_exact: singular linear system");

  double residual = (g.rates.transpose() * mu).lpNorm<Eigen::Infinity>();

  StationaryTable table{std::move(g.loci), rho, std::move(g.states), {}, residual};
  table.probability.resize(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    double p = mu(i);
    if (p < 0.0 && p > -1e-13) p = 0.0;  // roundoff only
    table.probability[static_cast<std::size_t>(i)] = p;
  }
  return table;
}

// Max discrepancy between the pushforward of the stationary law under
// restriction and the stationary law of the restricted loci set.
inline double check_consistency(const LociSet& z, const std::vector<int>& keep, double rho) {
  if (keep.empty()) throw std::invalid_argument("check_consistency: empty subset");
  StationaryTable full = stationary_exact(z, rho);
  StationaryTable sub = stationary_exact(z.subset(keep), rho);

  PartitionIndex sub_index(sub.states);
  std::vector<double> pushed(sub.states.size(), 0.0);
  for (std::size_t i = 0; i < full.states.size(); ++i)
    pushed[sub_index.at(restrict_to(full.states[i], keep))] += full.probability[i];

  double max_diff = 0.0;
  for (std::size_t i = 0; i < pushed.size(); ++i)
    max_diff = std::max(max_diff, std::abs(pushed[i] - sub.probability[i]));
  return max_diff;
}

// Max entrywise discrepancy between mu^{rho,z}, mu^{1, rho z} and
// mu^{rho/lambda, lambda z} under the index-preserving identification.
inline double check_scaling(const LociSet& z, double rho, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("check_scaling: lambda must be > 0");
  StationaryTable base = stationary_exact(z, rho);
  StationaryTable unit_rho = stationary_exact(z.scaled(rho), 1.0);
  StationaryTable rescaled = stationary_exact(z.scaled(lambda), rho / lambda);

  double max_diff = 0.0;
  for (std::size_t i = 0; i < base.probability.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(base.probability[i] - unit_rho.probability[i]));
    max_diff = std::max(max_diff, std::abs(base.probability[i] - rescaled.probability[i]));
  }
  return max_diff;
}

// Probability that the embedded jump chain started at the all-singleton
// state visits `target` before returning to it, by first-step analysis with
// absorbing boundaries at the two states.
inline double hitting_probability(const LociSet& z, double rho, const SetPartition& target) {
  const int n = z.max_index();
  const SetPartition origin = SetPartition::singletons(n + 1);
  if (target == origin)
    throw std::invalid_argument("hitting_probability: target must differ from the singleton state");

  GeneratorMatrix g = build_generator(z, rho);
  PartitionIndex index(g.states);
  const std::size_t count = g.states.size();
  const std::size_t origin_id = index.at(origin);
  const std::size_t target_id = index.at(target);

  // embedded chain jump probabilities
  auto jump_prob = [&](std::size_t from, std::size_t to) {
    double total = -g.rates(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(from));
    return g.rates(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) / total;
  };

  std::vector<std::size_t> interior;
  interior.reserve(count);
  std::vector<Eigen::Index> slot(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    if (i == origin_id || i == target_id) continue;
    slot[i] = static_cast<Eigen::Index>(interior.size());
    interior.push_back(i);
  }

  std::vector<double> hit(count, 0.0);
  hit[target_id] = 1.0;

  if (!interior.empty()) {
    const auto m = static_cast<Eigen::Index>(interior.size());
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      std::size_t from = interior[static_cast<std::size_t>(r)];
      for (std::size_t to = 0; to < count; ++to) {
        if (to == from) continue;
        double p = jump_prob(from, to);
        if (p == 0.0) continue;
        if (to == target_id)
          rhs(r) += p;
        else if (to != origin_id)
          lhs(r, slot[to]) -= p;
      }
    }
    Eigen::VectorXd h = lhs.partialPivLu().solve(rhs);
    if (!h.allFinite()) throw std::runtime_error("hitting_probability: singular linear system");
    for (Eigen::Index r = 0; r < m; ++r)
      hit[interior[static_cast<std::size_t>(r)]] = h(r);
  }

  double prob = 0.0;
  for (std::size_t to = 0; to < count; ++to) {
    if (to == origin_id) continue;
    prob += jump_prob(origin_id, to) * hit[to];
  }
  return prob;
}

}  // namespace recpart
