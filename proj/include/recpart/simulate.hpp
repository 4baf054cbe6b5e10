#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recpart/interval_partition.hpp"
#include "recpart/partition.hpp"
#include "recpart/rng.hpp"

namespace recpart {

struct SimConfig {
  double rho = 1.0;
  double extent = 100.0;  // R
  double t_burn = 20.0;
  double t_max = 20.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate_index = 0;

  void validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("SimConfig: rho must be > 0");
    if (!(extent > 0.0)) throw std::invalid_argument("SimConfig: extent must be > 0");
    if (!(0.0 <= t_burn && t_burn <= t_max))
      throw std::invalid_argument("SimConfig: need 0 <= t_burn <= t_max");
  }
};

// ---------------------------------------------------------------------------
// Event-driven simulation of the finite-loci ancestry chain.
// ---------------------------------------------------------------------------

// Right-continuous piecewise-constant trajectory; states[i] holds on
// [times[i], times[i+1]) and the last state holds to t_end.  States are
// interned in visit order.
struct ArgTrajectory {
  std::vector<double> times;
  std::vector<std::uint32_t> states;
  std::vector<SetPartition> state_table;
  double t_end = 0.0;
};

inline ArgTrajectory simulate_arg(const LociSet& z, double rho, const SetPartition& start,
                                  double t_max, std::uint64_t seed) {
  if (!(rho > 0.0)) throw std::invalid_argument("simulate_arg: rho must be > 0");
  if (!(t_max > 0.0)) throw std::invalid_argument("simulate_arg: t_max must be > 0");
  if (start.element_count() != static_cast<int>(z.size()))
    throw std::invalid_argument("simulate_arg: start partition does not match loci");
  if (z.max_index() > kMaxEnumerableIndex)
    throw std::length_error("simulate_arg: loci set exceeds supported size");

  struct Node {
    std::vector<std::pair<std::uint32_t, double>> moves;
    double total_rate = -1.0;  // negative marks unexpanded
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::uint32_t> ids;

  ArgTrajectory traj;
  auto intern = [&](const SetPartition& p) {
    auto key = p.key();
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(traj.state_table.size());
    ids.emplace(std::move(key), id);
    traj.state_table.push_back(p);
    nodes.emplace_back();
    return id;
  };
  auto expand = [&](std::uint32_t id) {
    const SetPartition state = traj.state_table[id];
    std::vector<std::pair<std::uint32_t, double>> moves;
    for (const auto& merged : merge_pairs(state)) moves.emplace_back(intern(merged), 1.0);
    for (const auto& move : split_moves(state, z))
      moves.emplace_back(intern(move.result), rho * move.rate);
    double total = 0.0;
    for (const auto& [to, rate] : moves) total += rate;
    nodes[id].moves = std::move(moves);
    nodes[id].total_rate = total;
  };

  Rng rng(seed);
  std::uint32_t current = intern(start);
  double t = 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(current);

  for (;;) {
    if (nodes[current].total_rate < 0.0) expand(current);
    const Node& node = nodes[current];
    if (node.total_rate <= 0.0) break;  // single-locus chain has no moves
    double dt = rng.exponential(node.total_rate);
    if (t + dt > t_max) break;
    t += dt;
    double pick = rng.uniform() * node.total_rate;
    std::uint32_t next = node.moves.back().first;
    for (const auto& [to, rate] : node.moves) {
      if (pick < rate) {
        next = to;
        break;
      }
      pick -= rate;
    }
    current = next;
    traj.times.push_back(t);
    traj.states.push_back(current);
  }
  traj.t_end = t_max;
  return traj;
}

// ---------------------------------------------------------------------------
// Event-driven simulation of the interval partitioning process on [0,R).
// ---------------------------------------------------------------------------

struct Segment {
  double a, b;  // [a, b)
};

// Mutable simulator state: per-block sorted segment lists with cached spans,
// plus the global cover length C (the fragmentation rate divided by rho),
// block count and segment count.  Slots are kept dense; removing a block
// moves the last slot down.
class BlockState {
 public:
  explicit BlockState(const IntervalPartition& start) : extent_(start.extent()) {
    std::unordered_map<int, std::size_t> slot_of;
    const auto& brk = start.breakpoints();
    const auto& lab = start.labels();
    for (std::size_t i = 0; i < lab.size(); ++i) {
      auto [it, fresh] = slot_of.emplace(lab[i], blocks_.size());
      if (fresh) blocks_.emplace_back();
      blocks_[it->second].push_back(Segment{brk[i], brk[i + 1]});
    }
    spans_.resize(blocks_.size(), 0.0);
    refresh_caches();
  }

  std::size_t block_count() const { return blocks_.size(); }
  double cover() const { return cover_; }
  std::size_t segment_count() const { return seg_count_; }
  double extent() const { return extent_; }
  double span(std::size_t slot) const { return spans_[slot]; }
  double min_of(std::size_t slot) const { return blocks_[slot].front().a; }
  double sup_of(std::size_t slot) const { return blocks_[slot].back().b; }
  const std::vector<Segment>& segments(std::size_t slot) const { return blocks_[slot]; }

  // Merge the blocks in two distinct slots; segments that touch across the
  // union are joined to keep segments maximal.
  void merge(std::size_t i, std::size_t j) {
    if (i == j) throw std::invalid_argument("BlockState::merge: slots must differ");
    if (i > j) std::swap(i, j);
    auto& lhs = blocks_[i];
    auto& rhs = blocks_[j];

    scratch_.clear();
    scratch_.reserve(lhs.size() + rhs.size());
    auto push = [this](const Segment& s) {
      if (!scratch_.empty() && scratch_.back().b == s.a)
        scratch_.back().b = s.b;
      else
        scratch_.push_back(s);
    };
    std::size_t x = 0, y = 0;
    while (x < lhs.size() && y < rhs.size()) push(lhs[x].a < rhs[y].a ? lhs[x++] : rhs[y++]);
    while (x < lhs.size()) push(lhs[x++]);
    while (y < rhs.size()) push(rhs[y++]);

    seg_count_ -= lhs.size() + rhs.size() - scratch_.size();
    cover_ -= spans_[i] + spans_[j];
    std::swap(lhs, scratch_);
    spans_[i] = lhs.back().b - lhs.front().a;
    cover_ += spans_[i];

    recycle(std::move(blocks_[j]));
    if (j + 1 != blocks_.size()) {
      blocks_[j] = std::move(blocks_.back());
      spans_[j] = spans_.back();
    }
    blocks_.pop_back();
    spans_.pop_back();
  }

  // Split the block at an interior cut x: material below x stays, material at
  // or above x forms a new block.  Returns false when x coincides with an
  // existing segment endpoint or lies outside the open span (caller
  // re-draws).
  bool split(std::size_t slot, double x) {
    auto& segs = blocks_[slot];
    if (!(segs.front().a < x && x < segs.back().b)) return false;

    auto it = std::lower_bound(segs.begin(), segs.end(), x,
                               [](const Segment& s, double v) { return s.a < v; });
    auto pos = static_cast<std::size_t>(it - segs.begin());
    if (pos < segs.size() && segs[pos].a == x) return false;
    const bool inside = segs[pos - 1].b > x;
    if (segs[pos - 1].b == x) return false;

    std::vector<Segment> right = take_from_pool();
    if (inside) {
      right.push_back(Segment{x, segs[pos - 1].b});
      right.insert(right.end(), segs.begin() + static_cast<std::ptrdiff_t>(pos), segs.end());
      segs[pos - 1].b = x;
      segs.resize(pos);
      ++seg_count_;
    } else {
      right.assign(segs.begin() + static_cast<std::ptrdiff_t>(pos), segs.end());
      segs.resize(pos);
    }

    cover_ -= spans_[slot];
    spans_[slot] = segs.back().b - segs.front().a;
    double right_span = right.back().b - right.front().a;
    cover_ += spans_[slot] + right_span;
    blocks_.push_back(std::move(right));
    spans_.push_back(right_span);
    return true;
  }

  // Block selection proportional to span; u in [0,1).
  std::size_t pick_by_span(double u) const {
    double target = u * cover_;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < spans_.size(); ++i) {
      acc += spans_[i];
      if (target < acc) return i;
    }
    return spans_.size() - 1;
  }

  void refresh_caches() {
    cover_ = 0.0;
    seg_count_ = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      spans_[i] = blocks_[i].back().b - blocks_[i].front().a;
      cover_ += spans_[i];
      seg_count_ += blocks_[i].size();
    }
  }

  // Max relative deviation between cached totals and a fresh recomputation.
  double cache_drift() const {
    double cover = 0.0;
    std::size_t segs = 0;
    for (const auto& b : blocks_) {
      cover += b.back().b - b.front().a;
      segs += b.size();
    }
    double drift = std::abs(cover_ - cover) / std::max(1.0, std::abs(cover));
    drift = std::max(drift, segs == seg_count_ ? 0.0 : 1.0);
    return drift;
  }

  IntervalPartition to_partition() const {
    struct Piece {
      double a, b;
      int slot;
    };
    std::vector<Piece> pieces;
    pieces.reserve(seg_count_);
    for (std::size_t slot = 0; slot < blocks_.size(); ++slot)
      for (const auto& s : blocks_[slot])
        pieces.push_back(Piece{s.a, s.b, static_cast<int>(slot)});
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.a < b.a; });

    std::vector<double> breaks;
    std::vector<int> labels;
    breaks.reserve(pieces.size() + 1);
    labels.reserve(pieces.size());
    breaks.push_back(0.0);
    for (const auto& p : pieces) {
      if (p.a != breaks.back())
        throw std::logic_error("BlockState: segments do not tile the domain");
      labels.push_back(p.slot);
      breaks.push_back(p.b);
    }
    return IntervalPartition(std::move(breaks), std::move(labels)).canonical();
  }

 private:
  std::vector<Segment> take_from_pool() {
    if (pool_.empty()) return {};
    std::vector<Segment> v = std::move(pool_.back());
    pool_.pop_back();
    v.clear();
    return v;
  }

  void recycle(std::vector<Segment>&& v) {
    if (pool_.size() < 64) pool_.push_back(std::move(v));
  }

  std::vector<std::vector<Segment>> blocks_;
  std::vector<double> spans_;
  std::vector<std::vector<Segment>> pool_;
  std::vector<Segment> scratch_;
  double cover_ = 0.0;
  std::size_t seg_count_ = 0;
  double extent_;
};

// Exact event-driven scheme for the interval partitioning process:
// coagulation of a uniform unordered block pair at total rate k(k-1)/2,
// fragmentation at total rate rho*C with the block chosen proportionally to
// its span and the cut uniform on the open span.  Clocks are regenerated
// from current totals after every event.
inline IntervalPartition simulate_interval(const SimConfig& cfg, const IntervalPartition& start) {
  cfg.validate();
  if (start.extent() != cfg.extent)
    throw std::invalid_argument("simulate_interval: start partition extent differs from config");

  BlockState state(start);
  Rng rng(cfg.seed);
  double t = 0.0;
  std::uint64_t events = 0;

  for (;;) {
    const double k = static_cast<double>(state.block_count());
    const double coag_rate = 0.5 * k * (k - 1.0);
    const double frag_rate = cfg.rho * state.cover();
    const double total = coag_rate + frag_rate;
    double dt = rng.exponential(total);
    if (t + dt > cfg.t_max) break;
    t += dt;

    if (rng.uniform() * total < coag_rate) {
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
    if ((++events & 0x1FFFFu) == 0) state.refresh_caches();
  }
  return state.to_partition();
}

// ---------------------------------------------------------------------------
// Equilibrium ensembles.
// ---------------------------------------------------------------------------

struct ReplicateObservation {
  std::uint64_t replicate = 0;
  double leftmost_raw = 0.0;
  double leftmost_rescaled = 0.0;
  std::uint64_t segments_total = 0;
  std::vector<double> theta_mass;             // one entry per theta window
  std::vector<std::uint64_t> window_segments;  // one entry per count window
};

struct EnsembleOptions {
  std::vector<std::pair<double, double>> theta_windows;  // log-scale exponents
  std::vector<std::pair<double, double>> count_windows;  // raw coordinates
  int threads = 1;
};

// One replicate of the equilibrium protocol: start from the single-block
// partition, run the burn-in, observe at t = t_burn.  Replicate seeds come
// from derive_stream_seed, so results do not depend on scheduling.
inline ReplicateObservation observe_replicate(const SimConfig& base, std::uint64_t replicate,
                                              const EnsembleOptions& opt) {
  SimConfig cfg = base;
  cfg.replicate_index = replicate;
  cfg.seed = derive_stream_seed(base.seed, replicate);
  cfg.t_max = base.t_burn;
  IntervalPartition final_state = simulate_interval(cfg, IntervalPartition::single_block(cfg.extent));

  ReplicateObservation obs;
  obs.replicate = replicate;
  obs.leftmost_raw = leftmost_block_length(final_state, false);
  obs.leftmost_rescaled = obs.leftmost_raw / std::log(cfg.extent);
  obs.segments_total = final_state.segment_count();
  obs.theta_mass = measure_theta_r(final_state, opt.theta_windows);
  obs.window_segments.reserve(opt.count_windows.size());
  for (auto [a, b] : opt.count_windows)
    obs.window_segments.push_back(final_state.segments_in_window(a, b));
  return obs;
}

inline std::vector<ReplicateObservation> equilibrium_ensemble(const SimConfig& base,
                                                              std::uint64_t replicates,
                                                              const EnsembleOptions& opt) {
  if (replicates < 1) throw std::invalid_argument("equilibrium_ensemble: needs >= 1 replicate");
  base.validate();

  std::vector<ReplicateObservation> out(replicates);
  const int threads = std::max(1, opt.threads);
  if (threads == 1) {
    for (std::uint64_t r = 0; r < replicates; ++r) out[r] = observe_replicate(base, r, opt);
    return out;
  }

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t r = next.fetch_add(1);
      if (r >= replicates) break;
      out[r] = observe_replicate(base, r, opt);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace recpart
