#include "noisy_bisect/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace noisy_bisect {

double info_binary(double p) { return 1.0 - binary_entropy(p); }

double info_kary(const std::vector<double>& probs) {
  if (probs.size() < 2)
    throw std::invalid_argument("info_kary: need at least 2 outcome probabilities");
  return std::log2(static_cast<double>(probs.size())) - entropy_bits(probs);
}

double classical_lower_bound(std::size_t n, double p, double tau) {
  if (n == 0) throw std::invalid_argument("classical_lower_bound: n must be positive");
  if (!(p > 0.5) || !(p <= 1.0))
    throw std::invalid_argument("classical_lower_bound: need p in (0.5, 1]");
  if (!(tau >= 0.0) || !(tau < 1.0))
    throw std::invalid_argument("classical_lower_bound: need tau in [0, 1)");
  const double bits = std::log2(static_cast<double>(n)) - std::log2(1.0 / (1.0 - tau));
  return bits / info_binary(p);
}

double generalized_markov(double mean, double lower, double slack,
                          double threshold) {
  if (!(slack >= 0.0) || !(slack <= 1.0))
    throw std::invalid_argument("generalized_markov: slack must lie in [0, 1]");
  if (!(threshold > lower))
    throw std::invalid_argument("generalized_markov: need threshold > lower");
  const double bound = (mean - (1.0 - slack) * lower) / (threshold - lower);
  return std::clamp(bound, 0.0, 1.0);
}

TailBound runtime_tail(std::size_t n, double p, double /*delta*/, double chi,
                       double c1) {
  if (n < 2) throw std::invalid_argument("runtime_tail: need n >= 2");
  if (!(p > 0.5) || !(p <= 1.0))
    throw std::invalid_argument("runtime_tail: need p in (0.5, 1]");
  if (!(chi > 1.0)) throw std::invalid_argument("runtime_tail: need chi > 1");
  if (!(c1 >= 0.0)) throw std::invalid_argument("runtime_tail: need c1 >= 0");
  const double info = info_binary(p);
  const double lg = std::log2(static_cast<double>(n));
  const double lglg = std::log2(std::max(2.0, lg));
  const double threshold = lg / info + 4.0 * chi * (c1 + 2.0) * lglg / info;
  return {threshold, 1.0 / chi};
}

double quantum_lower_bound(std::size_t k, double delta) {
  if (k < 2) throw std::invalid_argument("quantum_lower_bound: need k >= 2");
  if (!(delta >= 0.0) || !(delta <= 1.0))
    throw std::invalid_argument("quantum_lower_bound: need delta in [0, 1]");
  double bits = std::log2(static_cast<double>(k));
  if (delta > 0.0 && delta < 1.0) bits += (1.0 - delta) * std::log2(1.0 - delta);
  if (delta > 0.0)
    bits += delta * std::log2(delta / static_cast<double>(k - 1));
  return std::max(0.0, std::numbers::ln2 / std::numbers::pi * bits);
}

double quantum_rate_report(double big_k, double t, double i_bits) {
  if (!(big_k >= 2.0))
    throw std::invalid_argument("quantum_rate_report: need big_k >= 2");
  if (!(t >= 0.0)) throw std::invalid_argument("quantum_rate_report: need t >= 0");
  if (!(i_bits > 0.0))
    throw std::invalid_argument("quantum_rate_report: need i_bits > 0");
  return t / i_bits;
}

BoundsReport make_bounds_report(std::size_t n, const NoiseModel& noise,
                                double tau, double delta,
                                const std::vector<double>& chis, double c1) {
  if (n == 0) throw std::invalid_argument("make_bounds_report: n must be positive");
  if (!(tau >= 0.0) || !(tau < 1.0))
    throw std::invalid_argument("make_bounds_report: need tau in [0, 1)");
  BoundsReport r;
  r.n = n;
  r.noise_desc = noise.description();
  r.i_bits = noise.info_bits();
  const double bits = std::log2(static_cast<double>(n)) - std::log2(1.0 / (1.0 - tau));
  r.lower_bound_queries = bits / r.i_bits;
  r.upper_bound_estimate = std::log2(static_cast<double>(n)) / r.i_bits;
  if (noise.is_binary() && !noise.noiseless() && n >= 2)
    for (double chi : chis) r.tail_points.push_back(runtime_tail(n, noise.p(), delta, chi, c1));
  return r;
}

}  // namespace noisy_bisect
