#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace noisy_bisect {

inline double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double entropy_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("entropy_bits: probability outside [0,1]");
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

// Describes the response channel of an oracle: either a binary channel that
// answers correctly with probability p > 1/2, or a k-ary channel over k+1
// intervals that names the correct interval with probability p0 > 1/(k+1)
// (the remaining mass is an arbitrary fixed distribution over wrong answers).
class NoiseModel {
 public:
  static NoiseModel binary(double p) {
    if (!(p > 0.5) || !(p <= 1.0))
      throw std::invalid_argument("NoiseModel::binary: need p in (0.5, 1]");
    NoiseModel m;
    m.probs_ = {p, 1.0 - p};
    m.k_ = 1;
    return m;
  }

  // probs[0] = chance the reported interval is the true one; probs[d] = chance
  // the report is the true interval shifted by d (mod k+1).
  static NoiseModel kary(std::vector<double> probs) {
    if (probs.size() < 2)
      throw std::invalid_argument("NoiseModel::kary: need at least 2 outcome probabilities");
    double sum = 0.0;
    for (double p : probs) {
      if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("NoiseModel::kary: probability outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("NoiseModel::kary: probabilities must sum to 1");
    const std::size_t k = probs.size() - 1;
    if (!(probs[0] > 1.0 / static_cast<double>(k + 1)))
      throw std::invalid_argument("NoiseModel::kary: need probs[0] > 1/(k+1)");
    NoiseModel m;
    m.probs_ = std::move(probs);
    m.k_ = k;
    return m;
  }

  bool is_binary() const { return k_ == 1; }
  std::size_t k() const { return k_; }
  const std::vector<double>& probs() const { return probs_; }

  double p() const {
    if (!is_binary()) throw std::logic_error("NoiseModel::p: not a binary model");
    return probs_[0];
  }

  bool noiseless() const { return probs_[0] == 1.0; }

  // Bits of information a single answer carries: log2(k+1) - H(answer dist).
  double info_bits() const {
    return std::log2(static_cast<double>(k_ + 1)) - entropy_bits(probs_);
  }

  std::string description() const {
    char buf[64];
    if (is_binary()) {
      std::snprintf(buf, sizeof buf, "p=%.6g", probs_[0]);
      return buf;
    }
    std::string s = "probs=";
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.6g", probs_[i]);
      if (i) s += ';';
      s += buf;
    }
    return s;
  }

 private:
  NoiseModel() = default;
  std::vector<double> probs_;
  std::size_t k_ = 1;
};

}  // namespace noisy_bisect
