#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "noisy_bisect/rng.hpp"

namespace noisy_bisect {

// A noisy comparison oracle over positions 1..domain_size().
//
// Binary truth convention: for a query at split i, the noiseless bit is
//   b = [i >= j*]            (j* = hidden target position)
// i.e. bit 1 asserts "the target is at or left of i" and bit 0 asserts "the
// target is right of i".  Noise flips the bit with probability 1-p.  Callers
// that feed Bayes updates expressed as "answer 0 supports the left part 1..i"
// must therefore pass a = 1 - b.
//
// k-ary truth convention: splits s_1 < ... < s_k partition 1..n into k+1
// intervals I_0 = [1, s_1], ..., I_k = (s_k, n]; the noiseless answer is the
// index of the interval containing j*, and noise shifts it by d (mod k+1)
// with probability probs[d].
class OracleInterface {
 public:
  virtual ~OracleInterface() = default;

  virtual std::size_t domain_size() const = 0;

  virtual int answer_binary(std::size_t /*i*/) {
    throw std::logic_error("oracle does not support binary queries");
  }

  virtual int answer_kary(const std::vector<std::size_t>& /*splits*/) {
    throw std::logic_error("oracle does not support k-ary queries");
  }

  std::size_t queries_used() const { return queries_; }

 protected:
  void count_query() { ++queries_; }

 private:
  std::size_t queries_ = 0;
};

// Simulated binary oracle with a fixed hidden target and i.i.d. bit flips.
class SimulatedBinaryOracle : public OracleInterface {
 public:
  SimulatedBinaryOracle(std::size_t n, std::size_t true_index, double p,
                        std::uint64_t seed);

  std::size_t domain_size() const override { return n_; }
  int answer_binary(std::size_t i) override;

  std::size_t true_index() const { return true_index_; }
  double p() const { return p_; }

 private:
  std::size_t n_, true_index_;
  double p_;
  CounterRng rng_;
};

// Simulated k-ary oracle: reports the interval containing the target, shifted
// by d (mod k+1) with probability probs[d].
class SimulatedKaryOracle : public OracleInterface {
 public:
  SimulatedKaryOracle(std::size_t n, std::size_t true_index,
                      std::vector<double> probs, std::uint64_t seed);

  std::size_t domain_size() const override { return n_; }
  int answer_kary(const std::vector<std::size_t>& splits) override;

  std::size_t true_index() const { return true_index_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::size_t n_, true_index_;
  std::vector<double> probs_;
  CounterRng rng_;
};

// Oracle backed by flipping a pair of physical coins with unequal, unknown
// biases: one reference coin and one unknown coin.  Each comparison flips
// both coins together until exactly one shows heads; "the reference coin was
// the one showing heads" is evidence that the unknown coin's heads bias is
// the smaller of the two.  Conditioned on a decisive pair of flips, the
// verdict names the more heads-biased coin with probability
//   effective_p = max(b1(1-b2), b2(1-b1)) / (b1(1-b2) + b2(1-b1)),
// which is what makes this a binary noise channel with that p.
//
// The domain has a single position; answer_binary(1) returns 1 when the
// decisive flip asserts the unknown coin is less heads-biased than the
// reference (i.e. "target left of the reference" in a sorted-by-bias list).
class CoinPairOracle : public OracleInterface {
 public:
  CoinPairOracle(double reference_bias, double unknown_bias, std::uint64_t seed);

  std::size_t domain_size() const override { return 1; }
  int answer_binary(std::size_t i) override;

  // Raw decisive verdict: true when the flips assert the unknown coin is the
  // more heads-biased of the pair.
  bool unknown_more_biased();

  double effective_p() const { return effective_p_; }
  std::size_t flips_used() const { return flips_; }

  static double effective_p_for(double b1, double b2);

 private:
  double ref_bias_, unk_bias_, effective_p_;
  std::size_t flips_ = 0;
  CounterRng rng_;
};

// Wraps an oracle over 1..n into one over 1..2n whose truth pattern is the
// original pattern rotated by a hidden circular shift: querying x asks the
// inner oracle at y = wrap_2n(x + shift), negating the bit on the second
// copy.  The resulting bit pattern is 1 exactly on a circular arc of length
// n, so a searcher must treat the domain as a cycle.  map_back() converts an
// estimated arc start on the doubled wrapped domain into the inner target.
class ShiftWrappedOracle : public OracleInterface {
 public:
  // Random shift drawn uniformly from 1..2n using seed.
  ShiftWrappedOracle(OracleInterface& inner, std::uint64_t seed);
  // Explicit shift in 1..2n (for exhaustive tests).
  ShiftWrappedOracle(OracleInterface& inner, std::size_t shift, int /*tag*/);

  std::size_t domain_size() const override { return 2 * inner_->domain_size(); }
  int answer_binary(std::size_t x) override;

  std::size_t shift() const { return shift_; }

  // Maps an estimated position r on the wrapped domain (the start of the
  // all-ones arc) back to a position in the inner oracle's 1..n domain.
  std::size_t map_back(std::size_t r) const;

 private:
  std::size_t wrap2n(std::size_t v) const;

  OracleInterface* inner_;
  std::size_t shift_;
};

}  // namespace noisy_bisect
