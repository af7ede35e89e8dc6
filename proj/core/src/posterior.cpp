#include "noisy_bisect/posterior.hpp"

#include <algorithm>
#include <cmath>

namespace noisy_bisect {

namespace {
constexpr double kSplitSlack = 1e-12;  // fp slack on the find_split band check
}

Posterior::Posterior(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Posterior: n must be positive");
  n_ = n;
  segments_.push_back({1, n, 1.0 / static_cast<double>(n)});
}

Posterior Posterior::from_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("Posterior::from_weights: empty");
  Posterior p;
  p.n_ = weights.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("Posterior::from_weights: weights must be finite and >= 0");
    sum += w;
    if (w == 0.0) continue;
    if (!p.segments_.empty() && p.segments_.back().last == i &&
        p.segments_.back().weight == w) {
      p.segments_.back().last = i + 1;
    } else {
      p.segments_.push_back({i + 1, i + 1, w});
    }
  }
  if (p.segments_.empty() || sum <= 0.0)
    throw std::invalid_argument("Posterior::from_weights: total weight must be positive");
  for (auto& s : p.segments_) s.weight /= sum;
  return p;
}

double Posterior::prefix_sum(std::size_t i) const {
  if (i > n_) throw std::out_of_range("Posterior::prefix_sum: index past n");
  double acc = 0.0;
  for (const auto& s : segments_) {
    if (s.first > i) break;
    const std::size_t hi = std::min(s.last, i);
    acc += static_cast<double>(hi - s.first + 1) * s.weight;
  }
  return acc;
}

double Posterior::cell_weight(std::size_t i) const {
  if (i < 1 || i > n_) throw std::out_of_range("Posterior::cell_weight: index outside 1..n");
  for (const auto& s : segments_) {
    if (i < s.first) break;
    if (i <= s.last) return s.weight;
  }
  return 0.0;
}

std::size_t Posterior::prefix_below(double target) const {
  // Walk segments accumulating mass; inside the segment that crosses target,
  // solve for the cell count and fix up float error with local scans.
  double acc = 0.0;
  std::size_t best = 0;
  for (const auto& s : segments_) {
    const std::size_t len = s.last - s.first + 1;
    const double seg_mass = static_cast<double>(len) * s.weight;
    if (acc + seg_mass < target) {
      acc += seg_mass;
      best = s.last;
      continue;
    }
    // Crossing segment: largest t in [0, len] with acc + t*weight < target.
    std::size_t t = 0;
    if (s.weight > 0.0) {
      const double raw = (target - acc) / s.weight;
      t = raw <= 0.0 ? 0
                     : std::min<std::size_t>(len, static_cast<std::size_t>(raw));
      while (t > 0 && acc + static_cast<double>(t) * s.weight >= target) --t;
      while (t < len && acc + static_cast<double>(t + 1) * s.weight < target) ++t;
    }
    // t cells of this segment fit below target.  t == 0 means the boundary
    // sits in the gap before this segment (or at its first cell).
    return t == 0 ? (s.first > 0 ? s.first - 1 : 0) : s.first + t - 1;
  }
  return best;
}

std::size_t Posterior::find_split(double eps) const {
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw std::invalid_argument("Posterior::find_split: eps must lie in [0, 1)");
  const std::size_t i = prefix_below(0.5);
  if (i == 0 || i >= n_)
    throw ContractViolation("find_split: no interior split with prefix mass below 1/2");
  const double q = prefix_sum(i);
  if (q < std::max(0.0, 0.5 - eps) - kSplitSlack)
    throw ContractViolation("find_split: posterior too concentrated for tolerance eps");
  return i;
}

std::vector<std::size_t> Posterior::find_k_splits(std::size_t k, double eps) const {
  if (k == 0) throw std::invalid_argument("find_k_splits: k must be positive");
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw std::invalid_argument("find_k_splits: eps must lie in [0, 1)");
  if (k == 1) return {find_split(eps)};  // keep the binary split choice exactly
  std::vector<std::size_t> splits(k);
  const double share = 1.0 / static_cast<double>(k + 1);
  // Greedy: maximal boundary with prefix <= j/(k+1), up to fp slack, so a
  // boundary landing exactly on its target mass is acceptable.
  for (std::size_t j = 1; j <= k; ++j)
    splits[j - 1] = prefix_below(static_cast<double>(j) * share + kSplitSlack);
  // Validate: strictly increasing interior splits whose interval masses are
  // within eps of the ideal share.
  if (splits.front() == 0 || splits.back() >= n_)
    throw ContractViolation("find_k_splits: split fell on the boundary");
  for (std::size_t j = 1; j < k; ++j)
    if (splits[j] <= splits[j - 1])
      throw ContractViolation("find_k_splits: splits collide; posterior too concentrated");
  double prev = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double cur = j == k ? 1.0 : prefix_sum(splits[j]);
    if (std::abs((cur - prev) - share) > eps + 1e-9)
      throw ContractViolation("find_k_splits: interval mass outside tolerance");
    prev = cur;
  }
  return splits;
}

void Posterior::update_binary(std::size_t i, int answer, double p) {
  if (i < 1 || i >= n_)
    throw std::invalid_argument("update_binary: split must satisfy 1 <= i < n");
  if (answer != 0 && answer != 1)
    throw std::invalid_argument("update_binary: answer must be 0 or 1");
  if (!(p >= 0.5) || !(p <= 1.0))
    throw std::invalid_argument("update_binary: need p in [0.5, 1]");
  const double left = answer == 0 ? p : 1.0 - p;
  const double right = answer == 0 ? 1.0 - p : p;
  update_interval(1, i, left, right);
}

void Posterior::update_kary(const std::vector<std::size_t>& splits, int answer,
                            const std::vector<double>& probs) {
  const std::size_t k = splits.size();
  if (k == 0) throw std::invalid_argument("update_kary: empty splits");
  if (probs.size() != k + 1)
    throw std::invalid_argument("update_kary: need k+1 outcome probabilities");
  if (answer < 0 || static_cast<std::size_t>(answer) > k)
    throw std::invalid_argument("update_kary: answer outside 0..k");
  std::size_t prev = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (splits[j] <= prev || splits[j] >= n_)
      throw std::invalid_argument("update_kary: splits must be strictly increasing interior points");
    prev = splits[j];
  }
  // Interval I_j gets factor probs[(answer - j) mod (k+1)].  Apply raw factors
  // in one pass, then renormalize once.
  for (std::size_t j = 0; j <= k; ++j) {
    const std::size_t lo = j == 0 ? 1 : splits[j - 1] + 1;
    const std::size_t hi = j == k ? n_ : splits[j];
    if (lo > hi) continue;
    const std::size_t shift =
        (static_cast<std::size_t>(answer) + k + 1 - j) % (k + 1);
    split_at(lo - 1);
    split_at(hi);
    for (auto& s : segments_)
      if (s.first >= lo && s.last <= hi) s.weight *= probs[shift];
  }
  drop_zeros_and_merge();
  renormalize();
}

void Posterior::update_interval(std::size_t lo, std::size_t hi, double in_factor,
                                double out_factor) {
  if (lo < 1 || hi > n_ || lo > hi)
    throw std::invalid_argument("update_interval: bad range");
  if (in_factor < 0.0 || out_factor < 0.0)
    throw std::invalid_argument("update_interval: factors must be >= 0");
  split_at(lo - 1);
  split_at(hi);
  for (auto& s : segments_)
    s.weight *= (s.first >= lo && s.last <= hi) ? in_factor : out_factor;
  drop_zeros_and_merge();
  renormalize();
}

std::pair<std::size_t, double> Posterior::max_cell() const {
  std::size_t idx = segments_.front().first;
  double best = segments_.front().weight;
  for (const auto& s : segments_) {
    if (s.weight > best) {
      best = s.weight;
      idx = s.first;
    }
  }
  return {idx, best};
}

double Posterior::entropy() const {
  double h = 0.0;
  for (const auto& s : segments_) {
    if (s.weight <= 0.0) continue;
    const double len = static_cast<double>(s.last - s.first + 1);
    h -= len * s.weight * std::log2(s.weight);
  }
  return h;
}

double Posterior::information() const {
  return std::log2(static_cast<double>(n_)) - entropy();
}

Posterior Posterior::restrict_to(std::size_t lo, std::size_t hi) const {
  if (lo < 1 || hi > n_ || lo > hi)
    throw std::invalid_argument("restrict_to: bad range");
  Posterior out;
  out.n_ = n_;
  for (const auto& s : segments_) {
    const std::size_t a = std::max(s.first, lo);
    const std::size_t b = std::min(s.last, hi);
    if (a <= b) out.segments_.push_back({a, b, s.weight});
  }
  if (out.segments_.empty())
    throw std::invalid_argument("restrict_to: no posterior mass inside range");
  out.renormalize();
  return out;
}

std::size_t Posterior::support_size() const {
  std::size_t c = 0;
  for (const auto& s : segments_) c += s.last - s.first + 1;
  return c;
}

std::size_t Posterior::support_min() const { return segments_.front().first; }
std::size_t Posterior::support_max() const { return segments_.back().last; }

std::vector<double> Posterior::cells() const {
  std::vector<double> out(n_, 0.0);
  for (const auto& s : segments_)
    for (std::size_t i = s.first; i <= s.last; ++i) out[i - 1] = s.weight;
  return out;
}

double Posterior::total_weight() const {
  double sum = 0.0;
  for (const auto& s : segments_)
    sum += static_cast<double>(s.last - s.first + 1) * s.weight;
  return sum;
}

void Posterior::split_at(std::size_t b) {
  if (b == 0 || b >= n_) return;
  for (std::size_t idx = 0; idx < segments_.size(); ++idx) {
    auto& s = segments_[idx];
    if (s.first > b) return;  // boundary falls in a gap or before support
    if (s.last <= b) continue;
    // s straddles b: split into [first, b] and [b+1, last].
    Segment right{b + 1, s.last, s.weight};
    s.last = b;
    segments_.insert(segments_.begin() + static_cast<std::ptrdiff_t>(idx) + 1, right);
    return;
  }
}

void Posterior::renormalize() {
  double sum = total_weight();
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw std::logic_error("Posterior: update produced zero or non-finite total mass");
  for (auto& s : segments_) s.weight /= sum;
}

void Posterior::drop_zeros_and_merge() {
  std::vector<Segment> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) {
    if (s.weight == 0.0) continue;
    if (!out.empty() && out.back().last + 1 == s.first &&
        out.back().weight == s.weight) {
      out.back().last = s.last;
    } else {
      out.push_back(s);
    }
  }
  if (out.empty())
    throw std::logic_error("Posterior: update removed all posterior mass");
  segments_ = std::move(out);
}

}  // namespace noisy_bisect
