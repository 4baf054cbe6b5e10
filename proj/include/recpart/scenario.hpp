#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "recpart/partition.hpp"

namespace recpart {

inline constexpr std::uint64_t kScenarioCap = 10'000'000;

// A coalescence scenario: a chain of partitions from the all-singleton state
// to a target, one merge per step.  chain[k] has order k.
struct Scenario {
  std::vector<SetPartition> chain;
  int order() const { return static_cast<int>(chain.size()) - 1; }
};

// Number of merge chains ending at `target`, by memoized recursion over
// immediate merge-predecessors.
inline std::uint64_t count_scenarios(const SetPartition& target) {
  std::unordered_map<std::string, std::uint64_t> memo;
  auto recurse = [&memo](auto&& self, const SetPartition& p) -> std::uint64_t {
    if (p.order() == 0) return 1;
    auto key = p.key();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t total = 0;
    for (const auto& pred : merge_predecessors(p)) total += self(self, pred);
    memo.emplace(std::move(key), total);
    return total;
  };
  return recurse(recurse, target);
}

// All scenarios ending at `target`, depth-first over the predecessor
// enumeration (deterministic).  Throws when the count would exceed `cap`.
inline std::vector<Scenario> enumerate_scenarios(const SetPartition& target,
                                                 std::uint64_t cap = kScenarioCap) {
  if (target.order() < 1)
    throw std::invalid_argument("enumerate_scenarios: target must have order >= 1");
  if (count_scenarios(target) > cap)
    throw std::length_error("enumerate_scenarios: scenario count exceeds cap");

  std::vector<Scenario> out;
  std::vector<SetPartition> stack{target};
  auto descend = [&](auto&& self) -> void {
    const SetPartition& top = stack.back();
    if (top.order() == 0) {
      Scenario s;
      s.chain.assign(stack.rbegin(), stack.rend());
      out.push_back(std::move(s));
      return;
    }
    for (const auto& pred : merge_predecessors(top)) {
      stack.push_back(pred);
      self(self);
      stack.pop_back();
    }
  };
  descend(descend);
  return out;
}

// E(s) = product of cover lengths along the chain, excluding the singleton
// start.
inline double energy(const Scenario& s, const LociSet& z) {
  if (s.chain.empty() || s.chain.front().order() != 0)
    throw std::invalid_argument("energy: scenario must start at the singleton partition");
  double product = 1.0;
  for (std::size_t i = 1; i < s.chain.size(); ++i) product *= cover_length(s.chain[i], z);
  return product;
}

// F(target) = sum over scenarios of 1/E(s), by direct depth-first
// enumeration.  Kept free of the recursion used by f_dp so the two sides can
// cross-check each other.
inline double f_bruteforce(const SetPartition& target, const LociSet& z,
                           std::uint64_t cap = kScenarioCap) {
  if (target.order() < 1)
    throw std::invalid_argument("f_bruteforce: target must have order >= 1");
  std::uint64_t completed = 0;
  double sum = 0.0;
  auto descend = [&](auto&& self, const SetPartition& p, double inv_energy) -> void {
    if (p.order() == 0) {
      if (++completed > cap) throw std::length_error("f_bruteforce: scenario count exceeds cap");
      sum += inv_energy;
      return;
    }
    for (const auto& pred : merge_predecessors(p))
      self(self, pred, inv_energy / (pred.order() == 0 ? 1.0 : cover_length(pred, z)));
  };
  descend(descend, target, 1.0 / cover_length(target, z));
  return sum;
}

// Same value through the last-step recursion
// F(pi) = (1/C(pi)) * sum over merge-predecessors of F, with F = 1 at the
// singleton partition.  Memoization is confined to the call.
inline double f_dp(const SetPartition& target, const LociSet& z) {
  if (target.order() < 1) throw std::invalid_argument("f_dp: target must have order >= 1");
  std::unordered_map<std::string, double> memo;
  auto recurse = [&](auto&& self, const SetPartition& p) -> double {
    if (p.order() == 0) return 1.0;
    auto key = p.key();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double sum = 0.0;
    for (const auto& pred : merge_predecessors(p)) sum += self(self, pred);
    double value = sum / cover_length(p, z);
    memo.emplace(std::move(key), value);
    return value;
  };
  return recurse(recurse, target);
}

// Approximate stationary probabilities F(pi)/rho^order for every state in
// enumeration order; the singleton entry is the normalization complement.
inline std::vector<double> approx_stationary_table(const LociSet& z, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("approx_stationary_table: rho must be > 0");
  const auto states = enumerate_partitions(z.max_index());

  std::unordered_map<std::string, double> memo;
  auto f_of = [&](auto&& self, const SetPartition& p) -> double {
    if (p.order() == 0) return 1.0;
    auto key = p.key();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double sum = 0.0;
    for (const auto& pred : merge_predecessors(p)) sum += self(self, pred);
    double value = sum / cover_length(p, z);
    memo.emplace(std::move(key), value);
    return value;
  };

  std::vector<double> table(states.size(), 0.0);
  std::size_t singleton_slot = 0;
  double mass = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    int k = states[i].order();
    if (k == 0) {
      singleton_slot = i;
      continue;
    }
    table[i] = f_of(f_of, states[i]) / std::pow(rho, k);
    mass += table[i];
  }
  table[singleton_slot] = 1.0 - mass;
  return table;
}

// F(target)/rho^k for targets of order k >= 1; the singleton state gets the
// complement of the summed approximation.
inline double approx_stationary(const SetPartition& target, const LociSet& z, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("approx_stationary: rho must be > 0");
  const int k = target.order();
  if (k >= 1) return f_dp(target, z) / std::pow(rho, k);
  const auto states = enumerate_partitions(z.max_index());
  const auto table = approx_stationary_table(z, rho);
  PartitionIndex index(states);
  return table[index.at(target)];
}

// Approximate probability that the embedded chain visits `target` before
// returning to the singleton state: C(pi) F(pi) / (rho^{k-1} gamma_0).
// Values above 1 signal that the high-recombination regime is not reached;
// callers may warn but the value is returned as-is.
inline double hitting_approx(const SetPartition& target, const LociSet& z, double rho) {
  const int k = target.order();
  if (k < 1) throw std::invalid_argument("hitting_approx: target must have order >= 1");
  const double gamma0 = gamma_pairs(z.max_index(), 0);
  return cover_length(target, z) * f_dp(target, z) / (std::pow(rho, k - 1) * gamma0);
}

}  // namespace recpart
