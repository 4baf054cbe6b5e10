#pragma once

#include <vector>

#include "recpart/partition.hpp"
#include "recpart/rng.hpp"

namespace testsupport {

inline recpart::SetPartition random_partition(recpart::Rng& rng, int n) {
  std::vector<int> rgs(static_cast<std::size_t>(n + 1), 0);
  int max_label = 0;
  for (int i = 1; i <= n; ++i) {
    rgs[static_cast<std::size_t>(i)] =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(max_label + 2)));
    max_label = std::max(max_label, rgs[static_cast<std::size_t>(i)]);
  }
  return recpart::SetPartition::from_rgs(rgs);
}

inline recpart::LociSet random_loci(recpart::Rng& rng, int n, double min_gap = 0.1) {
  std::vector<double> pos;
  pos.reserve(static_cast<std::size_t>(n + 1));
  double x = rng.uniform(0.0, 1.0);
  for (int i = 0; i <= n; ++i) {
    pos.push_back(x);
    x += min_gap + rng.uniform(0.0, 2.0);
  }
  return recpart::LociSet(pos);
}

// Bell triangle, independent of the enumeration under test.
inline std::vector<unsigned long long> bell_numbers(int count) {
  std::vector<unsigned long long> bells{1};  // Bell(0)
  std::vector<unsigned long long> row{1};
  for (int i = 1; i < count; ++i) {
    std::vector<unsigned long long> next{row.back()};
    for (unsigned long long v : row) next.push_back(next.back() + v);
    bells.push_back(next.front());
    row = std::move(next);
  }
  return bells;
}

}  // namespace testsupport
