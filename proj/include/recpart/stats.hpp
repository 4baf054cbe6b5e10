#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "recpart/simulate.hpp"

namespace recpart {

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
// summed to 100 terms with early termination at 1e-12.
inline double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

struct KSResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t sample_size = 0;
};

// One-sample Kolmogorov-Smirnov test against a reference CDF; asymptotic
// p-value Q(sqrt(n) D_n).
inline KSResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  const double dn = static_cast<double>(n);
  double statistic = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(samples[i]);
    statistic = std::max(statistic, (static_cast<double>(i) + 1.0) / dn - f);
    statistic = std::max(statistic, f - static_cast<double>(i) / dn);
  }
  return KSResult{statistic, kolmogorov_sf(std::sqrt(dn) * statistic), n};
}

struct MomentResult {
  double value = 0.0;
  double std_error = 0.0;
};

// Plug-in moment of sample^power with the plain standard error of the
// power-transformed sample.
inline MomentResult empirical_moment(const std::vector<double>& samples, int power) {
  if (samples.empty()) throw std::invalid_argument("empirical_moment: empty sample");
  if (power < 1) throw std::invalid_argument("empirical_moment: power must be >= 1");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += std::pow(x, power);
  mean /= n;
  if (samples.size() == 1) return MomentResult{mean, 0.0};
  double ss = 0.0;
  for (double x : samples) {
    double d = std::pow(x, power) - mean;
    ss += d * d;
  }
  double variance = ss / (n - 1.0);
  return MomentResult{mean, std::sqrt(variance / n)};
}

inline MomentResult sample_mean(const std::vector<double>& samples) {
  return empirical_moment(samples, 1);
}

// Lebesgue time fraction spent in each interned state of a trajectory.
inline std::vector<double> occupancy_fractions(const ArgTrajectory& traj) {
  if (traj.times.empty() || !(traj.t_end > traj.times.front()))
    throw std::invalid_argument("occupancy_fractions: trajectory must span positive time");
  std::vector<double> acc(traj.state_table.size(), 0.0);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double end = (i + 1 < traj.times.size()) ? traj.times[i + 1] : traj.t_end;
    acc[traj.states[i]] += end - traj.times[i];
  }
  double total = traj.t_end - traj.times.front();
  for (double& v : acc) v /= total;
  return acc;
}

// Occupancy fractions per contiguous time batch, for batch-means standard
// errors of long-run fractions.
inline std::vector<std::vector<double>> occupancy_batches(const ArgTrajectory& traj,
                                                          std::size_t batches) {
  if (batches < 1) throw std::invalid_argument("occupancy_batches: needs >= 1 batch");
  const double t0 = traj.times.front();
  const double width = (traj.t_end - t0) / static_cast<double>(batches);
  std::vector<std::vector<double>> out(batches,
                                       std::vector<double>(traj.state_table.size(), 0.0));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    double a = traj.times[i];
    double b = (i + 1 < traj.times.size()) ? traj.times[i + 1] : traj.t_end;
    while (a < b) {
      auto batch = std::min<std::size_t>(batches - 1,
                                         static_cast<std::size_t>((a - t0) / width));
      double batch_end = t0 + width * static_cast<double>(batch + 1);
      double piece = std::min(b, batch_end) - a;
      out[batch][traj.states[i]] += piece;
      a += piece;
      if (piece <= 0.0) break;  // guards fp stalls at batch edges
    }
  }
  for (auto& row : out)
    for (double& v : row) v /= width;
  return out;
}

}  // namespace recpart
