#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "noisy_bisect/noise_model.hpp"
#include "noisy_bisect/oracles.hpp"
#include "noisy_bisect/rng.hpp"
#include "noisy_bisect/search.hpp"

namespace noisy_bisect {

struct ExperimentConfig {
  std::size_t n = 0;
  NoiseModel noise = NoiseModel::binary(0.75);
  double delta = 0.05;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  std::string output_path;  // empty = no CSV written

  std::optional<double> eps_par;
  std::optional<std::size_t> l_sur;
  double gamma = 0.5;
  std::optional<std::size_t> max_queries;
  std::optional<std::size_t> verify_rounds;

  SearchParams search_params() const;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;  // trial seed derived from the master seed
  std::size_t true_index = 0;
  std::size_t estimated_index = 0;
  bool success = false;
  std::size_t queries_used = 0;
  HaltReason halt = HaltReason::converged;
};

struct ExperimentSummary {
  std::size_t trials = 0;
  double success_rate = 0.0;
  double mean_queries = 0.0;
  double median_queries = 0.0;  // nearest-rank
  double p95_queries = 0.0;     // nearest-rank
  double theory_leading = 0.0;  // log2(n) / info_bits
  // Empirical estimates of the constant in front of the second-order term,
  // attributing (mean - leading)*I to either lglg(n)*log2(1/delta) or to
  // lglg(n)^2 + log2(1/delta).
  double constant_strict = 0.0;
  double constant_lenient = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

// Runs config.trials independent searches with simulated oracles.  Trial t's
// randomness comes entirely from stream_value(master_seed, t), so results are
// reproducible and order-independent.  The true index cycles through 1..n
// when trials >= n and is drawn uniformly per trial otherwise.  Writes the
// per-trial CSV to config.output_path when set.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<TrialRecord>& records);

void write_trials_csv(std::ostream& os, const ExperimentConfig& config,
                      const std::vector<TrialRecord>& records);
void write_trials_csv(const std::string& path, const ExperimentConfig& config,
                      const std::vector<TrialRecord>& records);

// Flat key=value experiment description ('#' starts a comment).  Keys: n, p,
// probs, k, delta, trials, seed, out, eps_par, l_sur, gamma, max_queries,
// verify_rounds.  Exactly one of p / probs is required, as are n and trials.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Oracle for ranking an unknown coin among reference coins of known,
// strictly increasing heads biases.  Domain cell c corresponds to rank c-1
// (the number of references less heads-biased than the unknown).  A query at
// i flips the unknown against reference i until the pair disagrees; the
// returned bit is 1 when the reference showed heads, which asserts the
// unknown is less biased, i.e. its rank cell is at most i.  The chance the
// bit is correct varies by position: effective_p_at(i).
class CoinListOracle : public OracleInterface {
 public:
  CoinListOracle(std::vector<double> reference_biases, double unknown_bias,
                 std::uint64_t seed);

  std::size_t domain_size() const override { return biases_.size() + 1; }
  int answer_binary(std::size_t i) override;

  double effective_p_at(std::size_t i) const;
  double min_effective_p() const;

  std::size_t true_cell() const;  // rank + 1
  std::size_t comparisons() const { return comparisons_; }
  std::size_t flips() const { return flips_; }

 private:
  std::vector<double> biases_;
  double unknown_;
  CounterRng rng_;
  std::size_t comparisons_ = 0;
  std::size_t flips_ = 0;
};

struct DemoCoinsResult {
  std::size_t true_rank = 0;
  std::size_t estimated_rank = 0;
  bool success = false;
  std::size_t comparisons = 0;  // decisive pairwise comparisons
  std::size_t flips = 0;        // physical coin flips spent
  double min_effective_p = 0.0;
  SearchOutcome outcome;
};

// End-to-end demonstration: rank an unknown coin among the references using
// the adaptive search, with per-position effective correctness in the Bayes
// updates and the worst-case effective p driving the derived parameters.
DemoCoinsResult run_demo_coins(const std::vector<double>& reference_biases,
                               double unknown_bias, double delta,
                               std::uint64_t seed);

}  // namespace noisy_bisect
