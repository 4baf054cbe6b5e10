#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "recpart/interval_partition.hpp"
#include "recpart/partition.hpp"
#include "recpart/rng.hpp"
#include "recpart/simulate.hpp"

namespace recpart {

// Single-crossover recombination: the child copies the left parent's mosaic
// on [0,u) and the right parent's on [u,R).  Segments merge across the
// junction when the colors agree, so recombining two identical chromosomes
// reproduces them bit-exactly.
inline IntervalPartition cross_over(const IntervalPartition& left, const IntervalPartition& right,
                                    double u) {
  if (left.extent() != right.extent())
    throw std::invalid_argument("cross_over: parents live on different domains");
  const double extent = left.extent();
  if (u <= 0.0) return right;
  if (u >= extent) return left;

  std::vector<double> breaks{0.0};
  std::vector<int> colors;
  auto append = [&](double end, int color) {
    if (!colors.empty() && colors.back() == color)
      breaks.back() = end;
    else {
      colors.push_back(color);
      breaks.push_back(end);
    }
  };

  const auto& lb = left.breakpoints();
  const auto& lc = left.labels();
  for (std::size_t i = 0; i < lc.size() && lb[i] < u; ++i)
    append(std::min(lb[i + 1], u), lc[i]);

  const auto& rb = right.breakpoints();
  const auto& rc = right.labels();
  for (std::size_t j = 0; j < rc.size(); ++j) {
    if (rb[j + 1] <= u) continue;
    append(rb[j + 1], rc[j]);
  }
  return IntervalPartition(std::move(breaks), std::move(colors));
}

struct MoranParams {
  int population_size = 2;     // N
  double extent = 1.0;         // R
  double recombination = 0.0;  // rho_N, per unit length per reproduction

  void validate() const {
    if (population_size < 2)
      throw std::invalid_argument("MoranParams: population size must be >= 2");
    if (!(extent > 0.0)) throw std::invalid_argument("MoranParams: extent must be > 0");
    double p = recombination * extent;
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("MoranParams: rho_N * R must lie in (0,1)");
  }
};

// Forward Moran model with recombination.  Individuals reproduce at rate 1;
// the offspring either copies one parent's chromosome or, with probability
// rho_N * R, inherits a single-crossover mosaic of both, and overwrites a
// uniformly chosen individual (possibly a parent).  At time zero individual
// i is monochromatic with color i.
class MoranPopulation {
 public:
  explicit MoranPopulation(const MoranParams& params) : params_(params) {
    params_.validate();
    individuals_.reserve(static_cast<std::size_t>(params_.population_size));
    for (int i = 0; i < params_.population_size; ++i)
      individuals_.push_back(IntervalPartition::single_block(params_.extent, i));
  }

  const MoranParams& params() const { return params_; }
  const std::vector<IntervalPartition>& individuals() const { return individuals_; }
  double time() const { return time_; }
  std::uint64_t events() const { return events_; }

  void step(Rng& rng) {
    time_ += rng.exponential(static_cast<double>(params_.population_size));
    apply_event(rng);
  }

  // Advance to model time t; events past t are not executed.
  void run_until(double t, Rng& rng) {
    for (;;) {
      double dt = rng.exponential(static_cast<double>(params_.population_size));
      if (time_ + dt > t) {
        time_ = t;
        return;
      }
      time_ += dt;
      apply_event(rng);
    }
  }

  bool fixed() const {
    for (std::size_t i = 1; i < individuals_.size(); ++i) {
      if (individuals_[i].breakpoints() != individuals_[0].breakpoints() ||
          individuals_[i].labels() != individuals_[0].labels())
        return false;
    }
    return true;
  }

  std::vector<int> colors_present() const {
    std::vector<int> out;
    for (const auto& ind : individuals_)
      for (int c : ind.labels())
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void apply_event(Rng& rng) {
    const auto n = static_cast<std::uint64_t>(params_.population_size);
    auto parent_a = static_cast<std::size_t>(rng.below(n));
    auto parent_b = static_cast<std::size_t>(rng.below(n - 1));
    if (parent_b >= parent_a) ++parent_b;

    IntervalPartition child = [&]() {
      if (rng.uniform() < params_.recombination * params_.extent) {
        double u = rng.uniform(0.0, params_.extent);
        bool a_on_left = rng.uniform() < 0.5;
        const auto& left = individuals_[a_on_left ? parent_a : parent_b];
        const auto& right = individuals_[a_on_left ? parent_b : parent_a];
        return cross_over(left, right, u);
      }
      return individuals_[rng.uniform() < 0.5 ? parent_a : parent_b];
    }();

    auto target = static_cast<std::size_t>(rng.below(n));
    individuals_[target] = std::move(child);
    ++events_;
  }

  MoranParams params_;
  std::vector<IntervalPartition> individuals_;
  double time_ = 0.0;
  std::uint64_t events_ = 0;
};

struct FixationResult {
  bool fixed = false;
  std::uint64_t events = 0;
  double model_time = 0.0;
  IntervalPartition mosaic = IntervalPartition::single_block(1.0);
  int color_count = 0;
};

inline FixationResult run_to_fixation(const MoranParams& params, std::uint64_t max_events,
                                      std::uint64_t seed) {
  MoranPopulation pop(params);
  Rng rng(seed);
  while (!pop.fixed() && pop.events() < max_events) pop.step(rng);

  FixationResult result;
  result.fixed = pop.fixed();
  result.events = pop.events();
  result.model_time = pop.time();
  result.mosaic = pop.individuals().front();
  result.color_count = static_cast<int>(result.mosaic.distinct_labels().size());
  return result;
}

struct DualityResult {
  std::vector<SetPartition> states;
  std::vector<double> forward_hist;   // Moran ancestry partition at time t
  std::vector<double> backward_hist;  // diffusion-limit chain at time 2t/N
  double tv_distance = 0.0;
};

// Compares the law of the z-restricted ancestry partition of a sampled
// individual at forward time t against the diffusion-limit chain run for
// time 2t/N at rho = rho_N N / 2, via empirical histograms.
inline DualityResult duality_check(const MoranParams& params, const std::vector<double>& loci,
                                   double t, std::uint64_t replicates, std::uint64_t seed) {
  params.validate();
  if (loci.size() < 2 || loci.size() > 3)
    throw std::invalid_argument("duality_check: supports two or three loci");
  if (params.population_size > 64)
    throw std::invalid_argument("duality_check: population size capped at 64");
  for (double x : loci)
    if (!(0.0 <= x && x < params.extent))
      throw std::invalid_argument("duality_check: loci must lie in [0,R)");
  if (replicates < 1) throw std::invalid_argument("duality_check: needs >= 1 replicate");

  const int n = static_cast<int>(loci.size()) - 1;
  DualityResult result;
  result.states = enumerate_partitions(n);
  PartitionIndex index(result.states);
  result.forward_hist.assign(result.states.size(), 0.0);
  result.backward_hist.assign(result.states.size(), 0.0);

  const double big_n = static_cast<double>(params.population_size);
  const double rho_limit = params.recombination * big_n / 2.0;
  const double tau = 2.0 * t / big_n;
  const LociSet z(loci);
  const SetPartition start = SetPartition::singletons(n + 1);

  for (std::uint64_t r = 0; r < replicates; ++r) {
    Rng rng(derive_stream_seed(seed, 2 * r));
    MoranPopulation pop(params);
    pop.run_until(t, rng);
    const auto& sampled =
        pop.individuals()[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(params.population_size)))];
    result.forward_hist[index.at(sampled.restricted_to(loci))] += 1.0;

    if (tau > 0.0) {
      ArgTrajectory traj = simulate_arg(z, rho_limit, start, tau, derive_stream_seed(seed, 2 * r + 1));
      result.backward_hist[index.at(traj.state_table[traj.states.back()])] += 1.0;
    } else {
      result.backward_hist[index.at(start)] += 1.0;
    }
  }

  double tv = 0.0;
  for (std::size_t i = 0; i < result.states.size(); ++i) {
    result.forward_hist[i] /= static_cast<double>(replicates);
    result.backward_hist[i] /= static_cast<double>(replicates);
    tv += std::abs(result.forward_hist[i] - result.backward_hist[i]);
  }
  result.tv_distance = 0.5 * tv;
  return result;
}

}  // namespace recpart
