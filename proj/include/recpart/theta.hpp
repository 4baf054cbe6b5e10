#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "recpart/rng.hpp"

namespace recpart {

struct ThetaAtom {
  double x;  // cluster position in (x_trunc, 1]
  double y;  // mass carried at x
};

// Finite sample of the limit point process: atoms of the PPP with intensity
// x^{-2} exp(-y/x) dx dy restricted to x > x_trunc.  The mass lost below the
// truncation has mean exactly x_trunc.
struct AtomMeasure {
  std::vector<ThetaAtom> atoms;
  double x_trunc = 0.0;

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.y;
    return m;
  }

  // mass of atoms with position in (a, b]
  double mass_in(double a, double b) const {
    double m = 0.0;
    for (const auto& atom : atoms)
      if (atom.x > a && atom.x <= b) m += atom.y;
    return m;
  }
};

// Exact sample by inverse transforms: atom count ~ Poisson(log(1/x_trunc))
// (the marginal x-intensity is 1/x), positions x = x_trunc^U log-uniform on
// (x_trunc, 1], masses y exponential with mean x given x.
inline AtomMeasure sample_theta_infty(double x_trunc, std::uint64_t seed) {
  if (!(0.0 < x_trunc && x_trunc < 1.0))
    throw std::domain_error("sample_theta_infty: x_trunc must lie in (0,1)");
  Rng rng(seed);
  AtomMeasure measure;
  measure.x_trunc = x_trunc;
  std::uint64_t count = rng.poisson(std::log(1.0 / x_trunc));
  measure.atoms.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    double x = std::pow(x_trunc, rng.uniform());
    double y = -x * std::log(rng.uniform_open());
    measure.atoms.push_back(ThetaAtom{x, y});
  }
  return measure;
}

// E[prod theta([a_i,b_i])^{n_i}] = prod n_i! b_i^{n_i-1} (b_i - a_i) for
// pairwise disjoint intervals within [0,1].
inline double theta_moment(const std::vector<std::pair<double, double>>& intervals,
                           const std::vector<int>& powers) {
  if (intervals.size() != powers.size())
    throw std::invalid_argument("theta_moment: one power per interval");
  std::vector<std::pair<double, double>> sorted = intervals;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    auto [a, b] = sorted[i];
    if (!(0.0 <= a && a <= b && b <= 1.0))
      throw std::invalid_argument("theta_moment: intervals must sit inside [0,1]");
    if (i > 0 && sorted[i - 1].second > a)
      throw std::invalid_argument("theta_moment: intervals must be pairwise disjoint");
  }
  double product = 1.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    int n = powers[i];
    if (n < 1) throw std::invalid_argument("theta_moment: powers must be >= 1");
    auto [a, b] = intervals[i];
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    product *= factorial * std::pow(b, n - 1) * (b - a);
  }
  return product;
}

// Moment generating function of theta([a,b]): (1 - ta) / (1 - tb), finite
// for t < 1/b.
inline double theta_mgf(double a, double b, double t) {
  if (!(0.0 <= a && a <= b && b <= 1.0))
    throw std::domain_error("theta_mgf: need 0 <= a <= b <= 1");
  if (a == b) return 1.0;  // zero mass
  if (!(t < 1.0 / b)) throw std::domain_error("theta_mgf: diverges for t >= 1/b");
  return (1.0 - t * a) / (1.0 - t * b);
}

}  // namespace recpart
