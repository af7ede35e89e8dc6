#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "noisy_bisect/noise_model.hpp"
#include "noisy_bisect/oracles.hpp"
#include "noisy_bisect/posterior.hpp"

namespace noisy_bisect {

enum class HaltReason { converged, query_cap, verify_exhausted };

const char* to_string(HaltReason reason);

enum class QueryPhase {
  main,      // balanced split of the full posterior
  localize,  // balanced split of the posterior restricted to a small window
  verify     // repeated vote on a candidate before committing to it
};

struct TranscriptEntry {
  std::vector<std::size_t> splits;  // query position(s), size k
  int answer;                       // recorded answer, already in update convention
  QueryPhase phase;
  double prefix_mass;  // posterior mass left of splits[0] just before the update
                       // (for circular runs: mass of the half-circle the query
                       // is about, ending at splits[0])
};

struct SearchParams {
  std::size_t n = 0;
  NoiseModel noise = NoiseModel::binary(0.75);
  double delta = 0.05;  // allowed failure probability

  // Split-balance tolerance; default sqrt(1/(24 log2 n)) for binary channels,
  // 1/k of that for k-ary, and 0.5 when the channel is noiseless.
  std::optional<double> eps_par;

  // Radius of the localization window around the posterior mode; default
  // derived from the channel via localize_radius(RadiusRule::power_law).
  std::optional<std::size_t> l_sur;

  // Confidence knob of the power-law radius rule.
  double gamma = 0.5;

  // Hard cap on total queries; default ceil(10 (log2 n + log2(1/delta) + 1) / I).
  std::optional<std::size_t> max_queries;

  // Votes per verification majority; default max(1, ceil(log2(1/delta) / I)).
  std::optional<std::size_t> verify_rounds;

  void validate() const;
  double resolved_eps_par() const;
  std::size_t resolved_l_sur() const;
  std::size_t resolved_max_queries() const;
  std::size_t resolved_verify_rounds() const;
  std::size_t resolved_retry_cap() const;  // ceil(log2(1/delta)) + 3
};

struct SearchOutcome {
  std::size_t estimated_index = 0;
  std::size_t queries_used = 0;
  std::vector<TranscriptEntry> transcript;
  HaltReason halt_reason = HaltReason::converged;
  std::size_t rounds_of_retry = 0;  // failed verification episodes
};

// Adaptive Bayesian search for the hidden position over 1..n using a binary
// noisy oracle.  Three phases: balanced bisection of the posterior until some
// cell reaches eps_par, bisection restricted to a window of radius l_sur
// around the mode, then a repeated-vote verification of the candidate; failed
// verification resumes the search with the (still valid) updated posterior.
SearchOutcome search_binary(const SearchParams& params, OracleInterface& oracle);

// Same procedure driven by k-ary queries (k = params.noise.k()); with k == 1
// it reproduces search_binary's behaviour query for query.
SearchOutcome search_kary(const SearchParams& params, OracleInterface& oracle);

// search_binary with a position-dependent answer-correctness probability:
// the Bayes update for a query at i uses p_at(i), while params.noise (whose p
// should be a lower bound over positions) drives the derived parameters.
SearchOutcome search_position_dependent(
    const SearchParams& params, OracleInterface& oracle,
    const std::function<double(std::size_t)>& p_at);

// Search over a shift-wrapped oracle (domain 2n, truth pattern = all-ones on
// a hidden circular arc of length n).  Runs the same adaptive scheme on the
// doubled domain with circular-arc queries and maps the located arc start
// back to the inner 1..n domain.  params describes the INNER problem (its n,
// channel, delta); derived quantities are recomputed for the doubled domain.
SearchOutcome search_shifted(const SearchParams& params, ShiftWrappedOracle& oracle);

enum class RadiusRule {
  power_law,        // ceil((1/gamma^2)^(1/(2p-1)))
  likelihood_ratio  // ceil((p/(1-p))^r / eps_par), r = p(1-p) log2^2(1/delta)/(2p-1)
};

// Window radius that captures the target around the posterior mode with the
// confidence the rule encodes; clipped to [1, n], and exactly 1 when p == 1.
std::size_t localize_radius(RadiusRule rule, double p, double delta,
                            double eps_par, double gamma, std::size_t n);

// Expected posterior-entropy drop of a binary query whose left side holds
// mass q, on a channel with correctness p:
//   H2(p q + (1-p)(1-q)) - H2(p).
double expected_gain(double q, double p);

// Default split tolerance for a domain (or window) of m cells.
double default_eps_par(const NoiseModel& noise, std::size_t m);

}  // namespace noisy_bisect
