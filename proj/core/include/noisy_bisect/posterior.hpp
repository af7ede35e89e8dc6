#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace noisy_bisect {

// Thrown when a caller-supplied precondition that the algorithm's analysis
// relies on fails at runtime (e.g. no valid split point exists for the
// requested tolerance).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Posterior distribution over cells 1..n, stored as ordered segments of
// constant per-cell weight.  Every update multiplies the weights on one
// contiguous block (and its complement) by fixed factors, so after t updates
// there are at most t+1 segments regardless of n.  All public weights are
// normalized; zero-weight cells are dropped from the support entirely.
class Posterior {
 public:
  // Uniform over 1..n.
  explicit Posterior(std::size_t n);

  // Arbitrary nonnegative weights for cells 1..weights.size(); normalizes,
  // drops zero-weight cells, merges equal-weight neighbours.
  static Posterior from_weights(const std::vector<double>& weights);

  std::size_t size() const { return n_; }

  // Total mass on cells 1..i (0 for i == 0).  Cells outside the support
  // contribute nothing.
  double prefix_sum(std::size_t i) const;

  double cell_weight(std::size_t i) const;

  // Largest i with prefix_sum(i) < 1/2.  The returned split satisfies
  // 1/2 - eps <= prefix_sum(i) < 1/2 and 1 <= i < n; if no such i exists the
  // posterior is too concentrated for a balanced query and this throws
  // ContractViolation.
  std::size_t find_split(double eps) const;

  // k split points i_1 < ... < i_k with prefix_sum(i_j) within eps of
  // j/(k+1).  Throws ContractViolation when the masses cannot be balanced.
  std::vector<std::size_t> find_k_splits(std::size_t k, double eps) const;

  // Bayes update for a binary answer at split i (1 <= i < n).  answer == 0
  // asserts the target lies in 1..i: those cells are scaled by p and the rest
  // by 1-p; answer == 1 is the mirror image.
  void update_binary(std::size_t i, int answer, double p);

  // Bayes update for a k-ary answer. splits define intervals
  // I_0 = [1, s_1], I_1 = (s_1, s_2], ..., I_k = (s_k, n]; interval I_j is
  // scaled by probs[(answer - j) mod (k+1)].
  void update_kary(const std::vector<std::size_t>& splits, int answer,
                   const std::vector<double>& probs);

  // Scales cells lo..hi by in_factor and all other cells by out_factor, then
  // renormalizes.  This is the primitive the other updates reduce to; it is
  // also what circular-domain updates use directly.
  void update_interval(std::size_t lo, std::size_t hi, double in_factor,
                       double out_factor);

  // Heaviest cell and its weight; ties resolve to the smallest index.
  std::pair<std::size_t, double> max_cell() const;

  // Shannon entropy in bits.
  double entropy() const;

  // Bits of information accumulated so far: log2(n) - entropy().
  double information() const;

  // Posterior conditioned on the target lying in lo..hi.  Cell labels are
  // preserved (the result still ranges over 1..n with support inside lo..hi).
  Posterior restrict_to(std::size_t lo, std::size_t hi) const;

  // Number of support cells (excluding dropped zero-weight cells).
  std::size_t support_size() const;
  std::size_t support_min() const;
  std::size_t support_max() const;

  std::size_t segment_count() const { return segments_.size(); }

  // Dense copy of the weights for cells 1..n (mainly for tests/inspection).
  std::vector<double> cells() const;

  double total_weight() const;

 private:
  struct Segment {
    std::size_t first, last;  // inclusive cell range
    double weight;            // per-cell weight
  };

  Posterior() = default;

  // Ensure no segment straddles boundary b (i.e. some segment ends at b or
  // all segments lie entirely on one side).
  void split_at(std::size_t b);
  void renormalize();
  void drop_zeros_and_merge();

  // Largest i with prefix_sum(i) < target (0 if none).
  std::size_t prefix_below(double target) const;

  std::size_t n_ = 0;
  std::vector<Segment> segments_;
};

}  // namespace noisy_bisect
