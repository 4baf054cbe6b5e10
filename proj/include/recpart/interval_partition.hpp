#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recpart/partition.hpp"

namespace recpart {

// Right-continuous colored partition of [0,R): breakpoints
// 0 = x_0 < x_1 < ... < x_m = R delimit segments [x_i, x_{i+1}), each
// carrying a block label.  Adjacent segments carry distinct labels; a block
// is the union of all segments with one label.
class IntervalPartition {
 public:
  IntervalPartition(std::vector<double> breakpoints, std::vector<int> labels)
      : breaks_(std::move(breakpoints)), labels_(std::move(labels)) {
    if (breaks_.size() < 2 || labels_.size() + 1 != breaks_.size())
      throw std::invalid_argument("IntervalPartition: breakpoint/label size mismatch");
    if (breaks_.front() != 0.0)
      throw std::invalid_argument("IntervalPartition: domain must start at 0");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!(breaks_[i - 1] < breaks_[i]))
        throw std::invalid_argument("IntervalPartition: breakpoints must increase");
    for (std::size_t i = 1; i < labels_.size(); ++i)
      if (labels_[i - 1] == labels_[i])
        throw std::invalid_argument("IntervalPartition: adjacent segments share a label");
  }

  static IntervalPartition single_block(double extent, int label = 0) {
    return IntervalPartition({0.0, extent}, {label});
  }

  double extent() const { return breaks_.back(); }  // R
  std::size_t segment_count() const { return labels_.size(); }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<int>& labels() const { return labels_; }

  int label_at(double x) const {
    if (x < 0.0 || x >= extent())
      throw std::out_of_range("IntervalPartition::label_at: position outside [0,R)");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return labels_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
  }

  int leftmost_label() const { return labels_.front(); }

  double block_mass(int label) const {
    double total = 0.0;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) total += breaks_[i + 1] - breaks_[i];
    return total;
  }

  // Lebesgue mass of the block within [lo, hi)
  double block_mass_in(int label, double lo, double hi) const {
    double total = 0.0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] != label) continue;
      double a = std::max(breaks_[i], lo);
      double b = std::min(breaks_[i + 1], hi);
      if (b > a) total += b - a;
    }
    return total;
  }

  double block_min(int label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return breaks_[i];
    throw std::out_of_range("IntervalPartition::block_min: no such label");
  }

  // Segment count of the restriction to [a,b): one plus the number of
  // breakpoints strictly inside (a,b).
  std::size_t segments_in_window(double a, double b) const {
    if (!(a < b)) throw std::invalid_argument("segments_in_window: empty window");
    auto lo = std::upper_bound(breaks_.begin(), breaks_.end(), a);
    auto hi = std::lower_bound(breaks_.begin(), breaks_.end(), b);
    return 1 + static_cast<std::size_t>(hi > lo ? hi - lo : 0);
  }

  std::vector<int> distinct_labels() const {
    std::vector<int> out;
    for (int lab : labels_)
      if (std::find(out.begin(), out.end(), lab) == out.end()) out.push_back(lab);
    return out;
  }

  // Labels renumbered by first appearance; equality of canonical forms is
  // equality of partitions.
  IntervalPartition canonical() const {
    std::unordered_map<int, int> relabel;
    std::vector<int> labs;
    labs.reserve(labels_.size());
    for (int lab : labels_) {
      auto [it, inserted] = relabel.emplace(lab, static_cast<int>(relabel.size()));
      labs.push_back(it->second);
    }
    return IntervalPartition(breaks_, std::move(labs));
  }

  bool same_partition(const IntervalPartition& other) const {
    if (breaks_ != other.breaks_) return false;
    return canonical().labels_ == other.canonical().labels_;
  }

  // Induced set partition on a list of positions inside [0,R)
  SetPartition restricted_to(const std::vector<double>& points) const {
    std::vector<int> rgs;
    rgs.reserve(points.size());
    std::unordered_map<int, int> relabel;
    for (double x : points) {
      int lab = label_at(x);
      auto [it, inserted] = relabel.emplace(lab, static_cast<int>(relabel.size()));
      rgs.push_back(it->second);
    }
    return SetPartition::from_rgs(rgs);
  }

 private:
  std::vector<double> breaks_;
  std::vector<int> labels_;
};

// d(p,q) = int_0^R |phi(p)(x) - phi(q)(x)| e^{-x} dx with phi(pi)(x) the
// minimum of the block containing x.  phi is piecewise constant on the merged
// breakpoint grid, so the integral reduces to a finite sum of
// |dphi| (e^{-a} - e^{-b}) terms.  Both partitions must share the domain; the
// integral is truncated at R by convention.
inline double metric_d(const IntervalPartition& p, const IntervalPartition& q) {
  if (p.extent() != q.extent())
    throw std::invalid_argument("metric_d: partitions live on different domains");

  auto mins = [](const IntervalPartition& part) {
    std::unordered_map<int, double> m;
    const auto& labs = part.labels();
    const auto& brk = part.breakpoints();
    for (std::size_t i = 0; i < labs.size(); ++i)
      if (!m.count(labs[i])) m.emplace(labs[i], brk[i]);
    return m;
  };
  const auto min_p = mins(p);
  const auto min_q = mins(q);

  const auto& bp = p.breakpoints();
  const auto& bq = q.breakpoints();
  std::size_t ip = 0, iq = 0;
  double x = 0.0;
  double total = 0.0;
  while (x < p.extent()) {
    double next = std::min(bp[ip + 1], bq[iq + 1]);
    double phi_p = min_p.at(p.labels()[ip]);
    double phi_q = min_q.at(q.labels()[iq]);
    double diff = std::abs(phi_p - phi_q);
    if (diff > 0.0) total += diff * (std::exp(-x) - std::exp(-next));
    x = next;
    if (bp[ip + 1] == x && ip + 2 < bp.size()) ++ip;
    if (bq[iq + 1] == x && iq + 2 < bq.size()) ++iq;
  }
  return total;
}

// Total length of the block containing position 0, optionally divided by
// log(R).
inline double leftmost_block_length(const IntervalPartition& p, bool log_rescale) {
  double raw = p.block_mass(p.leftmost_label());
  return log_rescale ? raw / std::log(p.extent()) : raw;
}

// Mass of material sharing the block of 0 inside [R^a, R^b], divided by
// log(R), for windows (a,b) given in log-scale exponents within [0,1].
inline std::vector<double> measure_theta_r(const IntervalPartition& p,
                                           const std::vector<std::pair<double, double>>& windows) {
  const double extent = p.extent();
  const double log_r = std::log(extent);
  const int label = p.leftmost_label();
  std::vector<double> out;
  out.reserve(windows.size());
  for (auto [a, b] : windows) {
    if (!(0.0 <= a && a <= b && b <= 1.0))
      throw std::domain_error("measure_theta_r: window exponents must satisfy 0 <= a <= b <= 1");
    if (a == b) {
      out.push_back(0.0);
      continue;
    }
    double lo = std::pow(extent, a);
    double hi = std::pow(extent, b);
    out.push_back(p.block_mass_in(label, lo, hi) / log_r);
  }
  return out;
}

}  // namespace recpart
