#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "noisy_bisect/noise_model.hpp"

namespace noisy_bisect {

// Bits of information per answer of a binary channel with correctness p.
double info_binary(double p);

// Bits of information per answer of a (k+1)-outcome shift channel.
double info_kary(const std::vector<double>& probs);

// Information-theoretic floor on the expected number of binary-channel
// queries needed to identify one of n positions with error probability at
// most tau: (log2 n - log2(1/(1-tau))) / info_binary(p).
double classical_lower_bound(std::size_t n, double p, double tau);

// Tail bound for a nonnegative random variable X with mean `mean` that is at
// least `lower` except on a bad event of probability <= slack:
//   P(X >= threshold) <= (mean - (1-slack)*lower) / (threshold - lower),
// clipped to [0, 1].
double generalized_markov(double mean, double lower, double slack,
                          double threshold);

struct TailBound {
  double threshold;    // query-count threshold
  double probability;  // bound on P(queries > threshold)
};

// High-probability runtime bound for the adaptive search on a binary channel:
// with probability at least 1 - 1/chi the query count stays below
//   log2(n)/I + 4*chi*(c1+2)*log2(log2(n))/I.
TailBound runtime_tail(std::size_t n, double p, double delta, double chi,
                       double c1);

// Lower bound, in queries, for quantum search over k items that may err with
// probability delta:
//   (ln 2 / pi) * (log2 k + (1-delta)log2(1-delta) + delta*log2(delta/(k-1))),
// clipped below at 0.
double quantum_lower_bound(std::size_t k, double delta);

// Queries-per-bit rate achieved by a procedure that distinguishes K
// hypotheses using t queries whose answers carry i_bits of information in
// total; reported as t / i_bits.
double quantum_rate_report(double big_k, double t, double i_bits);

struct BoundsReport {
  std::size_t n = 0;
  std::string noise_desc;
  double i_bits = 0.0;
  double lower_bound_queries = 0.0;   // floor at error budget tau
  double upper_bound_estimate = 0.0;  // leading-order expectation log2(n)/i_bits
  std::vector<TailBound> tail_points; // binary channels only
};

BoundsReport make_bounds_report(std::size_t n, const NoiseModel& noise,
                                double tau, double delta,
                                const std::vector<double>& chis, double c1);

}  // namespace noisy_bisect
