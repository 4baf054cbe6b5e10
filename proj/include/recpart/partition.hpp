#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace recpart {

// Largest n for which the full partition lattice of {0,...,n} may be
// enumerated (Bell(10) = 115975 states).
inline constexpr int kMaxEnumerableIndex = 9;

// Ordered set of locus positions z_0 < z_1 < ... < z_n on the half-line.
class LociSet {
 public:
  explicit LociSet(std::vector<double> positions) : pos_(std::move(positions)) {
    if (pos_.empty()) throw std::invalid_argument("LociSet: needs at least one position");
    for (std::size_t i = 1; i < pos_.size(); ++i) {
      if (!(pos_[i - 1] < pos_[i]))
        throw std::invalid_argument("LociSet: positions must be strictly increasing");
    }
  }

  static LociSet parse(const std::string& text) {
    std::vector<double> pos;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::size_t used = 0;
      double v = std::stod(item, &used);
      pos.push_back(v);
    }
    return LociSet(std::move(pos));
  }

  std::size_t size() const { return pos_.size(); }
  int max_index() const { return static_cast<int>(pos_.size()) - 1; }  // n
  double operator[](std::size_t i) const { return pos_[i]; }
  const std::vector<double>& positions() const { return pos_; }

  // alpha = min pairwise gap; positions are sorted so adjacent gaps suffice
  double min_gap() const {
    if (pos_.size() < 2) return 0.0;
    double g = pos_[1] - pos_[0];
    for (std::size_t i = 2; i < pos_.size(); ++i) g = std::min(g, pos_[i] - pos_[i - 1]);
    return g;
  }

  double span() const { return pos_.back() - pos_.front(); }

  LociSet subset(const std::vector<int>& keep) const {
    std::vector<double> out;
    out.reserve(keep.size());
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    for (int i : sorted) {
      if (i < 0 || i > max_index()) throw std::out_of_range("LociSet::subset: index out of range");
      out.push_back(pos_[static_cast<std::size_t>(i)]);
    }
    return LociSet(std::move(out));
  }

  LociSet scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("LociSet::scaled: lambda must be > 0");
    std::vector<double> out = pos_;
    for (double& v : out) v *= lambda;
    return LociSet(std::move(out));
  }

 private:
  std::vector<double> pos_;
};

// Partition of the index set {0,...,n} in canonical form: blocks ordered by
// their minimum element, indices sorted within each block.  The canonical
// encoding used as a map key is the restricted growth string (block label of
// each element, labels numbered by first appearance).
class SetPartition {
 public:
  static SetPartition singletons(int element_count) {
    std::vector<int> rgs(static_cast<std::size_t>(element_count));
    for (int i = 0; i < element_count; ++i) rgs[static_cast<std::size_t>(i)] = i;
    return from_rgs(rgs);
  }

  static SetPartition coarsest(int element_count) {
    return from_rgs(std::vector<int>(static_cast<std::size_t>(element_count), 0));
  }

  static SetPartition from_rgs(const std::vector<int>& rgs) {
    if (rgs.empty()) throw std::invalid_argument("SetPartition: empty index set");
    int max_label = -1;
    for (int v : rgs) {
      if (v < 0 || v > max_label + 1)
        throw std::invalid_argument("SetPartition: not a restricted growth string");
      max_label = std::max(max_label, v);
    }
    SetPartition p;
    p.blocks_.assign(static_cast<std::size_t>(max_label + 1), {});
    for (std::size_t i = 0; i < rgs.size(); ++i)
      p.blocks_[static_cast<std::size_t>(rgs[i])].push_back(static_cast<int>(i));
    return p;
  }

  // Accepts blocks in any order; canonicalizes and validates the cover.
  static SetPartition from_blocks(std::vector<std::vector<int>> blocks) {
    std::size_t total = 0;
    for (auto& b : blocks) {
      if (b.empty()) throw std::invalid_argument("SetPartition: empty block");
      std::sort(b.begin(), b.end());
      total += b.size();
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<bool> seen(total, false);
    for (const auto& b : blocks) {
      for (int i : b) {
        if (i < 0 || static_cast<std::size_t>(i) >= total || seen[static_cast<std::size_t>(i)])
          throw std::invalid_argument("SetPartition: blocks must partition {0..n}");
        seen[static_cast<std::size_t>(i)] = true;
      }
    }
    SetPartition p;
    p.blocks_ = std::move(blocks);
    return p;
  }

  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  int element_count() const {
    std::size_t total = 0;
    for (const auto& b : blocks_) total += b.size();
    return static_cast<int>(total);
  }

  // order = (n+1) - #blocks: the number of merges needed from singletons
  int order() const { return element_count() - block_count(); }

  int block_of(int element) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (std::binary_search(blocks_[b].begin(), blocks_[b].end(), element))
        return static_cast<int>(b);
    throw std::out_of_range("SetPartition::block_of: no such element");
  }

  std::vector<int> rgs() const {
    std::vector<int> out(static_cast<std::size_t>(element_count()), 0);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (int i : blocks_[b]) out[static_cast<std::size_t>(i)] = static_cast<int>(b);
    return out;
  }

  // compact hashable key; labels fit in a char for any enumerable n
  std::string key() const {
    std::string k;
    for (int v : rgs()) k.push_back(static_cast<char>('0' + v));
    return k;
  }

  // Textual form used in CSV/JSON outputs: blocks slash-separated,
  // comma-joined, canonical order.  E.g. "0,2/1".
  std::string to_text() const {
    std::string out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (b > 0) out.push_back('/');
      for (std::size_t j = 0; j < blocks_[b].size(); ++j) {
        if (j > 0) out.push_back(',');
        out += std::to_string(blocks_[b][j]);
      }
    }
    return out;
  }

  static SetPartition parse(const std::string& text) {
    std::vector<std::vector<int>> blocks;
    std::stringstream ss(text);
    std::string block;
    while (std::getline(ss, block, '/')) {
      std::vector<int> idx;
      std::stringstream bs(block);
      std::string item;
      while (std::getline(bs, item, ',')) {
        if (!item.empty()) idx.push_back(std::stoi(item));
      }
      if (!idx.empty()) blocks.push_back(std::move(idx));
    }
    return from_blocks(std::move(blocks));
  }

  bool operator==(const SetPartition& other) const = default;

 private:
  std::vector<std::vector<int>> blocks_;
};

// All partitions of {0,...,n} in lexicographic restricted-growth order.
// The first element is the coarsest partition (all zeros), the last is the
// all-singleton partition; positions are recoverable through PartitionIndex.
inline std::vector<SetPartition> enumerate_partitions(int n) {
  if (n < 0) throw std::invalid_argument("enumerate_partitions: n must be >= 0");
  if (n > kMaxEnumerableIndex)
    throw std::length_error("enumerate_partitions: n exceeds supported ceiling of 9");
  std::vector<SetPartition> out;
  std::vector<int> a(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n + 1), 0);
  for (;;) {
    out.push_back(SetPartition::from_rgs(a));
    int i = n;
    while (i > 0 && a[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j <= n; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

// Lookup table from canonical key to position in an enumeration.
class PartitionIndex {
 public:
  explicit PartitionIndex(const std::vector<SetPartition>& states) {
    index_.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) index_.emplace(states[i].key(), i);
  }

  std::size_t at(const SetPartition& p) const {
    auto it = index_.find(p.key());
    if (it == index_.end()) throw std::out_of_range("PartitionIndex: unknown partition");
    return it->second;
  }

  bool contains(const SetPartition& p) const { return index_.count(p.key()) > 0; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

inline int order_of(const SetPartition& p) { return p.order(); }

// Number of unordered block pairs in a partition of order r over n+1 loci.
inline double gamma_pairs(int n, int r) {
  double m = static_cast<double>(n - r);
  return m * (m + 1.0) / 2.0;
}

// C(pi) = sum over blocks of (max position - min position)
inline double cover_length(const SetPartition& p, const LociSet& z) {
  if (p.element_count() != static_cast<int>(z.size()))
    throw std::invalid_argument("cover_length: partition/loci size mismatch");
  double total = 0.0;
  for (const auto& b : p.blocks())
    total += z[static_cast<std::size_t>(b.back())] - z[static_cast<std::size_t>(b.front())];
  return total;
}

// All partitions reachable by merging one unordered pair of blocks.
inline std::vector<SetPartition> merge_pairs(const SetPartition& p) {
  std::vector<SetPartition> out;
  const auto& blocks = p.blocks();
  const std::size_t k = blocks.size();
  if (k < 2) return out;
  out.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<std::vector<int>> merged;
      merged.reserve(k - 1);
      for (std::size_t b = 0; b < k; ++b) {
        if (b == j) continue;
        if (b == i) {
          std::vector<int> u;
          u.reserve(blocks[i].size() + blocks[j].size());
          std::merge(blocks[i].begin(), blocks[i].end(), blocks[j].begin(), blocks[j].end(),
                     std::back_inserter(u));
          merged.push_back(std::move(u));
        } else {
          merged.push_back(blocks[b]);
        }
      }
      out.push_back(SetPartition::from_blocks(std::move(merged)));
    }
  }
  return out;
}

struct SplitMove {
  SetPartition result;
  double rate;  // gap between the flanking loci; multiply by rho for the ARG rate
};

// All single-fragmentation successors.  A block {i_1 < ... < i_k} can split
// between consecutive members into prefix/suffix at rate z[i_{j+1}] - z[i_j];
// the rates over a block sum to its span, and over the partition to C(pi).
inline std::vector<SplitMove> split_moves(const SetPartition& p, const LociSet& z) {
  if (p.element_count() != static_cast<int>(z.size()))
    throw std::invalid_argument("split_moves: partition/loci size mismatch");
  std::vector<SplitMove> out;
  const auto& blocks = p.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    for (std::size_t j = 0; j + 1 < blk.size(); ++j) {
      std::vector<std::vector<int>> next;
      next.reserve(blocks.size() + 1);
      for (std::size_t c = 0; c < blocks.size(); ++c) {
        if (c == b) {
          next.emplace_back(blk.begin(), blk.begin() + static_cast<std::ptrdiff_t>(j + 1));
          next.emplace_back(blk.begin() + static_cast<std::ptrdiff_t>(j + 1), blk.end());
        } else {
          next.push_back(blocks[c]);
        }
      }
      double gap = z[static_cast<std::size_t>(blk[j + 1])] - z[static_cast<std::size_t>(blk[j])];
      out.push_back(SplitMove{SetPartition::from_blocks(std::move(next)), gap});
    }
  }
  return out;
}

// Induced partition on a subset of indices, re-indexed to {0..|keep|-1}
// preserving position order.
inline SetPartition restrict_to(const SetPartition& p, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("restrict_to: empty subset");
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> rgs_full = p.rgs();
  std::vector<int> sub;
  sub.reserve(sorted.size());
  std::unordered_map<int, int> relabel;
  for (int i : sorted) {
    if (i < 0 || static_cast<std::size_t>(i) >= rgs_full.size())
      throw std::out_of_range("restrict_to: index out of range");
    int lab = rgs_full[static_cast<std::size_t>(i)];
    auto [it, inserted] = relabel.emplace(lab, static_cast<int>(relabel.size()));
    sub.push_back(it->second);
  }
  return SetPartition::from_rgs(sub);
}

// Partitions from which `p` is reached by a single coagulation: every way of
// bipartitioning one block of `p` into two nonempty parts.
inline std::vector<SetPartition> merge_predecessors(const SetPartition& p) {
  std::vector<SetPartition> out;
  const auto& blocks = p.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    const std::size_t m = blk.size();
    if (m < 2) continue;
    // fix blk[0] in the first part to enumerate unordered bipartitions once
    const std::uint32_t masks = 1u << (m - 1);
    for (std::uint32_t mask = 0; mask + 1 < masks; ++mask) {
      std::vector<int> part_a{blk[0]};
      std::vector<int> part_b;
      for (std::size_t j = 1; j < m; ++j) {
        if (mask & (1u << (j - 1)))
          part_a.push_back(blk[j]);
        else
          part_b.push_back(blk[j]);
      }
      std::vector<std::vector<int>> next;
      next.reserve(blocks.size() + 1);
      for (std::size_t c = 0; c < blocks.size(); ++c) {
        if (c == b) {
          next.push_back(part_a);
          next.push_back(part_b);
        } else {
          next.push_back(blocks[c]);
        }
      }
      out.push_back(SetPartition::from_blocks(std::move(next)));
    }
  }
  return out;
}

}  // namespace recpart
