#include "noisy_bisect/oracles.hpp"

#include <cmath>

namespace noisy_bisect {

SimulatedBinaryOracle::SimulatedBinaryOracle(std::size_t n, std::size_t true_index,
                                             double p, std::uint64_t seed)
    : n_(n), true_index_(true_index), p_(p), rng_(seed) {
  if (n == 0) throw std::invalid_argument("SimulatedBinaryOracle: n must be positive");
  if (true_index < 1 || true_index > n)
    throw std::invalid_argument("SimulatedBinaryOracle: target outside 1..n");
  if (!(p > 0.5) || !(p <= 1.0))
    throw std::invalid_argument("SimulatedBinaryOracle: need p in (0.5, 1]");
}

int SimulatedBinaryOracle::answer_binary(std::size_t i) {
  if (i < 1 || i > n_)
    throw std::invalid_argument("SimulatedBinaryOracle: query outside 1..n");
  count_query();
  const bool flip = rng_.next_uniform() >= p_;
  const bool truth = i >= true_index_;
  return (truth != flip) ? 1 : 0;
}

SimulatedKaryOracle::SimulatedKaryOracle(std::size_t n, std::size_t true_index,
                                         std::vector<double> probs,
                                         std::uint64_t seed)
    : n_(n), true_index_(true_index), probs_(std::move(probs)), rng_(seed) {
  if (n == 0) throw std::invalid_argument("SimulatedKaryOracle: n must be positive");
  if (true_index < 1 || true_index > n)
    throw std::invalid_argument("SimulatedKaryOracle: target outside 1..n");
  if (probs_.size() < 2)
    throw std::invalid_argument("SimulatedKaryOracle: need at least 2 outcome probabilities");
  double sum = 0.0;
  for (double p : probs_) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("SimulatedKaryOracle: probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("SimulatedKaryOracle: probabilities must sum to 1");
}

int SimulatedKaryOracle::answer_kary(const std::vector<std::size_t>& splits) {
  const std::size_t k = probs_.size() - 1;
  if (splits.size() != k)
    throw std::invalid_argument("SimulatedKaryOracle: wrong number of splits");
  std::size_t prev = 0;
  for (std::size_t s : splits) {
    if (s <= prev || s >= n_)
      throw std::invalid_argument("SimulatedKaryOracle: splits must be strictly increasing interior points");
    prev = s;
  }
  count_query();
  // True interval index: number of splits strictly left of the target.
  std::size_t j = 0;
  for (std::size_t s : splits)
    if (s < true_index_) ++j;
  // Shift drawn by inverse CDF over probs_; a single uniform per query keeps
  // the draw aligned with the binary oracle's flip when k == 1.
  const double u = rng_.next_uniform();
  double acc = 0.0;
  std::size_t h = k;  // guard against fp undershoot of the final cumsum
  for (std::size_t d = 0; d <= k; ++d) {
    acc += probs_[d];
    if (u < acc) {
      h = d;
      break;
    }
  }
  return static_cast<int>((j + h) % (k + 1));
}

double CoinPairOracle::effective_p_for(double b1, double b2) {
  const double a = b1 * (1.0 - b2);
  const double b = b2 * (1.0 - b1);
  if (a + b <= 0.0)
    throw std::invalid_argument("effective_p_for: coins can never disagree");
  return std::max(a, b) / (a + b);
}

CoinPairOracle::CoinPairOracle(double reference_bias, double unknown_bias,
                               std::uint64_t seed)
    : ref_bias_(reference_bias), unk_bias_(unknown_bias), rng_(seed) {
  if (reference_bias < 0.0 || reference_bias > 1.0 || unknown_bias < 0.0 ||
      unknown_bias > 1.0)
    throw std::invalid_argument("CoinPairOracle: biases must lie in [0,1]");
  if (reference_bias == unknown_bias)
    throw std::invalid_argument("CoinPairOracle: biases must differ");
  effective_p_ = effective_p_for(reference_bias, unknown_bias);
}

bool CoinPairOracle::unknown_more_biased() {
  constexpr std::size_t kMaxFlipsPerComparison = 1000000;
  std::size_t flips_this_call = 0;
  for (;;) {
    if (flips_this_call >= kMaxFlipsPerComparison)
      throw std::runtime_error("CoinPairOracle: comparison did not resolve");
    const bool ref_heads = rng_.next_uniform() < ref_bias_;
    const bool unk_heads = rng_.next_uniform() < unk_bias_;
    flips_ += 2;
    flips_this_call += 2;
    if (ref_heads != unk_heads) return unk_heads;
  }
}

int CoinPairOracle::answer_binary(std::size_t i) {
  if (i != 1) throw std::invalid_argument("CoinPairOracle: domain has a single position");
  count_query();
  return unknown_more_biased() ? 0 : 1;
}

ShiftWrappedOracle::ShiftWrappedOracle(OracleInterface& inner, std::uint64_t seed)
    : inner_(&inner) {
  CounterRng rng(seed);
  shift_ = static_cast<std::size_t>(
      rng.next_in_range(1, 2 * inner_->domain_size()));
}

ShiftWrappedOracle::ShiftWrappedOracle(OracleInterface& inner, std::size_t shift,
                                       int /*tag*/)
    : inner_(&inner), shift_(shift) {
  if (shift < 1 || shift > 2 * inner_->domain_size())
    throw std::invalid_argument("ShiftWrappedOracle: shift outside 1..2n");
}

std::size_t ShiftWrappedOracle::wrap2n(std::size_t v) const {
  const std::size_t m = 2 * inner_->domain_size();
  return (v - 1) % m + 1;
}

int ShiftWrappedOracle::answer_binary(std::size_t x) {
  const std::size_t n = inner_->domain_size();
  if (x < 1 || x > 2 * n)
    throw std::invalid_argument("ShiftWrappedOracle: query outside 1..2n");
  count_query();
  const std::size_t y = wrap2n(x + shift_);
  if (y <= n) return inner_->answer_binary(y);
  return 1 - inner_->answer_binary(y - n);
}

std::size_t ShiftWrappedOracle::map_back(std::size_t r) const {
  const std::size_t n = inner_->domain_size();
  if (r < 1 || r > 2 * n)
    throw std::invalid_argument("ShiftWrappedOracle: position outside 1..2n");
  const std::size_t j = wrap2n(r + shift_);
  return (j - 1) % n + 1;
}

}  // namespace noisy_bisect
