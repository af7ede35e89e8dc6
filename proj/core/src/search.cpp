#include "noisy_bisect/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace noisy_bisect {

const char* to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::converged: return "converged";
    case HaltReason::query_cap: return "query_cap";
    case HaltReason::verify_exhausted: return "verify_exhausted";
  }
  return "unknown";
}

double expected_gain(double q, double p) {
  if (!(q >= 0.0) || !(q <= 1.0))
    throw std::invalid_argument("expected_gain: q must lie in [0, 1]");
  if (!(p >= 0.5) || !(p <= 1.0))
    throw std::invalid_argument("expected_gain: p must lie in [0.5, 1]");
  return binary_entropy(p * q + (1.0 - p) * (1.0 - q)) - binary_entropy(p);
}

double default_eps_par(const NoiseModel& noise, std::size_t m) {
  if (noise.noiseless()) return 0.5;
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(2, m)));
  const double base = std::sqrt(1.0 / (24.0 * lg));
  return noise.is_binary() ? base : base / static_cast<double>(noise.k());
}

std::size_t localize_radius(RadiusRule rule, double p, double delta,
                            double eps_par, double gamma, std::size_t n) {
  if (n == 0) throw std::invalid_argument("localize_radius: n must be positive");
  if (!(p > 0.5) || !(p <= 1.0))
    throw std::invalid_argument("localize_radius: need p in (0.5, 1]");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("localize_radius: need delta in (0, 1)");
  if (!(eps_par > 0.0))
    throw std::invalid_argument("localize_radius: need eps_par > 0");
  if (!(gamma > 0.0) || !(gamma <= 1.0))
    throw std::invalid_argument("localize_radius: need gamma in (0, 1]");
  if (p == 1.0) return 1;  // a truthful oracle pins the mode to the target
  double raw = 0.0;
  switch (rule) {
    case RadiusRule::power_law:
      raw = std::pow(1.0 / (gamma * gamma), 1.0 / (2.0 * p - 1.0));
      break;
    case RadiusRule::likelihood_ratio: {
      const double lg = std::log2(1.0 / delta);
      const double r = p * (1.0 - p) * lg * lg / (2.0 * p - 1.0);
      raw = std::pow(p / (1.0 - p), r) / eps_par;
      break;
    }
  }
  // Nudge before ceil so values that are integers up to fp error do not get
  // bumped to the next integer.
  const double ceiled = std::ceil(raw - 1e-9);
  if (!(ceiled >= 1.0)) return 1;
  if (ceiled >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(ceiled);
}

void SearchParams::validate() const {
  if (n == 0) throw std::invalid_argument("SearchParams: n must be positive");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("SearchParams: need delta in (0, 1)");
  if (!(gamma > 0.0) || !(gamma <= 1.0))
    throw std::invalid_argument("SearchParams: need gamma in (0, 1]");
  if (eps_par && (!(*eps_par > 0.0) || !(*eps_par < 1.0)))
    throw std::invalid_argument("SearchParams: need eps_par in (0, 1)");
  if (l_sur && *l_sur == 0)
    throw std::invalid_argument("SearchParams: need l_sur >= 1");
  if (max_queries && *max_queries == 0)
    throw std::invalid_argument("SearchParams: need max_queries >= 1");
  if (verify_rounds && *verify_rounds == 0)
    throw std::invalid_argument("SearchParams: need verify_rounds >= 1");
  if (n > 1 && n < noise.k() + 1)
    throw std::invalid_argument("SearchParams: k-ary queries need n >= k+1");
}

double SearchParams::resolved_eps_par() const {
  return eps_par ? *eps_par : default_eps_par(noise, n);
}

std::size_t SearchParams::resolved_l_sur() const {
  if (l_sur) return std::min(*l_sur, n);
  const double p0 = noise.probs()[0];
  if (!(p0 > 0.5)) return n;  // weak per-answer evidence: window = whole domain
  return localize_radius(RadiusRule::power_law, p0, delta, resolved_eps_par(),
                         gamma, n);
}

std::size_t SearchParams::resolved_max_queries() const {
  if (max_queries) return *max_queries;
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(2, n)));
  const double raw =
      10.0 * (lg + std::log2(1.0 / delta) + 1.0) / noise.info_bits();
  return static_cast<std::size_t>(std::ceil(raw));
}

std::size_t SearchParams::resolved_verify_rounds() const {
  if (verify_rounds) return *verify_rounds;
  const double raw = std::log2(1.0 / delta) / noise.info_bits();
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw)));
}

std::size_t SearchParams::resolved_retry_cap() const {
  return static_cast<std::size_t>(std::ceil(std::log2(1.0 / delta))) + 3;
}

namespace {

struct CapReached {};  // internal unwind when the query budget runs out

// A window candidate goes to a vote once it holds this fraction of the
// window's posterior mass.  Entering the vote below 1/2 makes retries
// dominate the query count; demanding much more than ~0.7 buys little
// calibration for the extra bisection queries.
constexpr double kIsolationMass = 0.7;

// Between the tightest split below the window's half-mass point and the one
// just after it, pick whichever balances the two sides best.  The below-half
// split alone can be nearly uninformative when a single heavy cell straddles
// the half-mass point.
std::size_t balanced_split(const Posterior& view, double eps_eff, std::size_t n) {
  const std::size_t i = view.find_split(eps_eff);
  if (i + 1 >= n) return i;
  const double lo_gap = 0.5 - view.prefix_sum(i);
  const double hi_gap = view.prefix_sum(i + 1) - 0.5;
  return hi_gap < lo_gap ? i + 1 : i;
}

using AskFn = std::function<int(const std::vector<std::size_t>&)>;
using PAtFn = std::function<double(std::size_t)>;

// Shared engine for the linear (non-circular) searches.  k == 1 drives
// binary splits/updates; k >= 2 drives k-ary ones.  ask() returns the answer
// already expressed in update convention (0 = leftmost interval).  p_at, when
// set (k == 1 only), gives a per-position correctness probability for the
// Bayes update; otherwise params.noise supplies it.
SearchOutcome run_linear_search(const SearchParams& params, std::size_t k,
                                const AskFn& ask, const PAtFn& p_at) {
  params.validate();
  const std::size_t n = params.n;
  SearchOutcome out;
  if (n == 1) {
    out.estimated_index = 1;
    return out;
  }

  const double eps = params.resolved_eps_par();
  const std::size_t l_sur = params.resolved_l_sur();
  const std::size_t max_q = params.resolved_max_queries();
  const std::size_t t = params.resolved_verify_rounds();
  const std::size_t retry_cap = params.resolved_retry_cap();
  const std::size_t need = t / 2 + 1;  // strict majority of t votes

  Posterior post(n);
  std::size_t queries = 0;

  auto do_query = [&](const std::vector<std::size_t>& splits,
                      QueryPhase phase) -> int {
    if (queries >= max_q) throw CapReached{};
    const int a = ask(splits);
    const double mass = post.prefix_sum(splits.front());
    if (k == 1) {
      const double p = p_at ? p_at(splits[0]) : params.noise.p();
      post.update_binary(splits[0], a, p);
    } else {
      post.update_kary(splits, a, params.noise.probs());
    }
    out.transcript.push_back({splits, a, phase, mass});
    ++queries;
    return a;
  };

  // Two interleaved strict majorities: answers at the candidate must assert
  // "target not right of c", answers just left of it must assert "target
  // right of c-1".  Each side stops as soon as its outcome is decided.
  auto verify_candidate_binary = [&](std::size_t c) -> bool {
    const bool side_at = c < n;   // query at c, expect answer 0
    const bool side_left = c > 1; // query at c-1, expect answer 1
    std::size_t hits_at = 0, miss_at = 0, hits_left = 0, miss_left = 0;
    auto at_resolved = [&] { return !side_at || hits_at >= need; };
    auto left_resolved = [&] { return !side_left || hits_left >= need; };
    while (!at_resolved() || !left_resolved()) {
      if (!at_resolved()) {
        if (do_query({c}, QueryPhase::verify) == 0) ++hits_at; else ++miss_at;
        if (miss_at + need > t) return false;
      }
      if (!left_resolved()) {
        if (do_query({c - 1}, QueryPhase::verify) == 1) ++hits_left; else ++miss_left;
        if (miss_left + need > t) return false;
      }
    }
    return true;
  };

  // Single strict majority on a block of adjacent splits that isolates {c}
  // as its own interval.
  auto verify_candidate_kary = [&](std::size_t c) -> bool {
    const std::size_t s = std::clamp<std::size_t>(c > 1 ? c - 1 : 1, 1, n - k);
    std::vector<std::size_t> splits(k);
    std::iota(splits.begin(), splits.end(), s);
    const int expected = static_cast<int>(c - s);
    std::size_t hits = 0, misses = 0;
    while (hits < need) {
      if (do_query(splits, QueryPhase::verify) == expected) ++hits; else ++misses;
      if (misses + need > t) return false;
    }
    return true;
  };

  std::size_t retries = 0;
  try {
    for (;;) {
      const auto [imax, wmax] = post.max_cell();
      if (wmax < eps) {
        std::vector<std::size_t> splits;
        try {
          splits = k == 1 ? std::vector<std::size_t>{post.find_split(eps)}
                          : post.find_k_splits(k, eps);
        } catch (const ContractViolation&) {
          // No balanced partition exists (support too small or too lumpy for
          // the tolerance) even though no cell has reached eps; the window
          // phase below handles exactly that shape.
        }
        if (!splits.empty()) {
          do_query(splits, QueryPhase::main);
          continue;
        }
      }
      if (retries >= retry_cap) {
        out.halt_reason = HaltReason::verify_exhausted;
        out.estimated_index = imax;
        break;
      }
      // Localize: bisect inside a window around the mode until one cell holds
      // a majority of the window's mass, then put that cell to a vote.  A
      // retried vote must enter with constant success probability, which a
      // sub-eps_par mode cannot give; a conditional majority can.
      const std::size_t lo = imax > l_sur ? imax - l_sur : 1;
      const std::size_t hi = std::min(n, imax + l_sur);
      const double sub_eps = default_eps_par(params.noise, hi - lo + 1);
      std::size_t candidate;
      for (;;) {
        const Posterior view = post.restrict_to(lo, hi);
        const std::size_t m = view.support_size();
        const auto [cmax, cweight] = view.max_cell();
        if (m == 1 || m <= k || cweight >= kIsolationMass) {
          candidate = cmax;
          break;
        }
        // The window mode may exceed the window's own partition tolerance
        // long before it is isolated; widen the tolerance so a near-balanced
        // split exists whenever the window is splittable at all.
        const double eps_eff = std::max(sub_eps, cweight + 1e-9);
        std::vector<std::size_t> splits;
        try {
          splits = k == 1 ? std::vector<std::size_t>{balanced_split(view, eps_eff, n)}
                          : view.find_k_splits(k, eps_eff);
        } catch (const ContractViolation&) {
          candidate = cmax;  // too lumpy to split: put the mode to the vote
          break;
        }
        do_query(splits, QueryPhase::localize);
      }
      const bool accepted = k == 1 ? verify_candidate_binary(candidate)
                                   : verify_candidate_kary(candidate);
      if (accepted) {
        out.halt_reason = HaltReason::converged;
        out.estimated_index = candidate;
        break;
      }
      ++retries;
    }
  } catch (const CapReached&) {
    out.halt_reason = HaltReason::query_cap;
    out.estimated_index = post.max_cell().first;
  }
  out.queries_used = queries;
  out.rounds_of_retry = retries;
  return out;
}

// Mass of the circular half-domain (x - N/2, x] on a posterior over 1..N.
double half_mass(const std::vector<double>& prefix, std::size_t x) {
  const std::size_t n2 = prefix.size() - 1;
  const std::size_t half = n2 / 2;
  if (x <= half) return prefix[x] + prefix[n2] - prefix[x + half];
  return prefix[x] - prefix[x - half];
}

// Position x whose trailing half-circle holds posterior mass as close to 1/2
// as the tolerance allows; mirrors Posterior::find_split's contract adapted
// to the circle (where exact 1/2 ties are possible and acceptable).
std::size_t circular_split(const Posterior& post, double eps) {
  const std::size_t n2 = post.size();
  const std::vector<double> cells = post.cells();
  std::vector<double> prefix(n2 + 1, 0.0);
  for (std::size_t i = 1; i <= n2; ++i) prefix[i] = prefix[i - 1] + cells[i - 1];
  constexpr double slack = 1e-12;
  // Best split strictly below 1/2 (tightest balance), with an exact-tie
  // fallback for posteriors -- like the uniform start -- where every
  // half-circle holds exactly 1/2.
  std::size_t best = 0, tie = 0;
  double best_mass = -1.0;
  for (std::size_t x = 1; x <= n2; ++x) {
    const double m = half_mass(prefix, x);
    if (m < 0.5 && m > best_mass) {
      best_mass = m;
      best = x;
    }
    if (tie == 0 && std::abs(m - 0.5) <= slack) tie = x;
  }
  if (best != 0 && best_mass >= 0.5 - eps - slack) return best;
  if (tie != 0) return tie;
  throw ContractViolation(
      "circular_split: posterior too concentrated for tolerance eps");
}

using CircAskFn = std::function<int(std::size_t)>;

// Circular counterpart of run_linear_search for arc-start location on an
// even domain of size N = 2 * half.  A query at x asks whether the hidden
// arc start lies in the half-circle (x - half, x]; the raw bit is recorded.
SearchOutcome run_circular_search(const SearchParams& params, const CircAskFn& ask) {
  params.validate();
  const std::size_t n2 = params.n;
  const std::size_t half = n2 / 2;
  if (n2 % 2 != 0 || half == 0)
    throw std::invalid_argument("circular search: domain size must be even");
  const double p = params.noise.p();

  SearchOutcome out;
  const double eps = params.resolved_eps_par();
  // Window must fit inside one half-circle so window bisection stays linear.
  const std::size_t l_max = half >= 3 ? (half - 1) / 2 : 0;
  const std::size_t l_sur = std::min(params.resolved_l_sur(), std::max<std::size_t>(l_max, 0));
  const std::size_t max_q = params.resolved_max_queries();
  const std::size_t t = params.resolved_verify_rounds();
  const std::size_t retry_cap = params.resolved_retry_cap();
  const std::size_t need = t / 2 + 1;

  Posterior post(n2);
  std::size_t queries = 0;

  // bit == 1 asserts the arc start lies in (x - half, x].
  auto apply_bit = [&](std::size_t x, int bit) {
    if (x <= half) {
      // (x - half, x] wraps; its complement [x+1, x+half] is contiguous.
      const double in_f = bit == 1 ? 1.0 - p : p;
      post.update_interval(x + 1, x + half, in_f, bit == 1 ? p : 1.0 - p);
    } else {
      const double in_f = bit == 1 ? p : 1.0 - p;
      post.update_interval(x - half + 1, x, in_f, bit == 1 ? 1.0 - p : p);
    }
  };

  auto do_query = [&](std::size_t x, QueryPhase phase) -> int {
    if (queries >= max_q) throw CapReached{};
    const int bit = ask(x);
    const std::vector<double> cells = post.cells();
    std::vector<double> prefix(n2 + 1, 0.0);
    for (std::size_t i = 1; i <= n2; ++i) prefix[i] = prefix[i - 1] + cells[i - 1];
    const double mass = half_mass(prefix, x);
    apply_bit(x, bit);
    out.transcript.push_back({{x}, bit, phase, mass});
    ++queries;
    return bit;
  };

  auto wrap = [&](std::size_t v) { return (v - 1) % n2 + 1; };

  // The arc starts at c iff the bit at c is 1 and the bit just before it is
  // 0; vote on both, interleaved, with early exit per side.
  auto verify_candidate = [&](std::size_t c) -> bool {
    std::size_t hits_at = 0, miss_at = 0, hits_left = 0, miss_left = 0;
    const std::size_t left = wrap(c + n2 - 1);
    while (hits_at < need || hits_left < need) {
      if (hits_at < need) {
        if (do_query(c, QueryPhase::verify) == 1) ++hits_at; else ++miss_at;
        if (miss_at + need > t) return false;
      }
      if (hits_left < need) {
        if (do_query(left, QueryPhase::verify) == 0) ++hits_left; else ++miss_left;
        if (miss_left + need > t) return false;
      }
    }
    return true;
  };

  std::size_t retries = 0;
  try {
    for (;;) {
      const auto [imax, wmax] = post.max_cell();
      if (wmax < eps) {
        std::size_t split = 0;
        try {
          split = circular_split(post, eps);
        } catch (const ContractViolation&) {
          // fall through to the window phase, as in the linear search
        }
        if (split != 0) {
          do_query(split, QueryPhase::main);
          continue;
        }
      }
      if (retries >= retry_cap) {
        out.halt_reason = HaltReason::verify_exhausted;
        out.estimated_index = imax;
        break;
      }
      const std::size_t lo = imax > l_sur ? imax - l_sur : 1;
      const std::size_t hi = std::min(n2, imax + l_sur);
      const double sub_eps = default_eps_par(params.noise, hi - lo + 1);
      std::size_t candidate;
      for (;;) {
        const Posterior view = post.restrict_to(lo, hi);
        const auto [cmax, cweight] = view.max_cell();
        if (view.support_size() == 1 || cweight >= kIsolationMass) {
          candidate = cmax;
          break;
        }
        const double eps_eff = std::max(sub_eps, cweight + 1e-9);
        // Window is narrower than a half-circle, so the half-circle query at
        // the view's split bisects the window mass exactly like a linear query.
        std::size_t split;
        try {
          split = balanced_split(view, eps_eff, n2);
        } catch (const ContractViolation&) {
          candidate = cmax;
          break;
        }
        do_query(split, QueryPhase::localize);
      }
      if (verify_candidate(candidate)) {
        out.halt_reason = HaltReason::converged;
        out.estimated_index = candidate;
        break;
      }
      ++retries;
    }
  } catch (const CapReached&) {
    out.halt_reason = HaltReason::query_cap;
    out.estimated_index = post.max_cell().first;
  }
  out.queries_used = queries;
  out.rounds_of_retry = retries;
  return out;
}

}  // namespace

SearchOutcome search_binary(const SearchParams& params, OracleInterface& oracle) {
  if (!params.noise.is_binary())
    throw std::invalid_argument("search_binary: params.noise must be binary");
  if (oracle.domain_size() != params.n)
    throw std::invalid_argument("search_binary: oracle/params domain mismatch");
  // The oracle's bit asserts "target at or left of i"; the update convention
  // wants 0 for that interval, so the answer is the negated bit.
  const AskFn ask = [&](const std::vector<std::size_t>& splits) {
    return 1 - oracle.answer_binary(splits[0]);
  };
  return run_linear_search(params, 1, ask, nullptr);
}

SearchOutcome search_kary(const SearchParams& params, OracleInterface& oracle) {
  if (oracle.domain_size() != params.n)
    throw std::invalid_argument("search_kary: oracle/params domain mismatch");
  const std::size_t k = params.noise.k();
  const AskFn ask = [&](const std::vector<std::size_t>& splits) {
    return oracle.answer_kary(splits);
  };
  return run_linear_search(params, k, ask, nullptr);
}

SearchOutcome search_position_dependent(const SearchParams& params,
                                        OracleInterface& oracle,
                                        const std::function<double(std::size_t)>& p_at) {
  if (!params.noise.is_binary())
    throw std::invalid_argument("search_position_dependent: params.noise must be binary");
  if (oracle.domain_size() != params.n)
    throw std::invalid_argument("search_position_dependent: oracle/params domain mismatch");
  if (!p_at) throw std::invalid_argument("search_position_dependent: p_at required");
  const AskFn ask = [&](const std::vector<std::size_t>& splits) {
    return 1 - oracle.answer_binary(splits[0]);
  };
  return run_linear_search(params, 1, ask, p_at);
}

SearchOutcome search_shifted(const SearchParams& params, ShiftWrappedOracle& oracle) {
  if (!params.noise.is_binary())
    throw std::invalid_argument("search_shifted: params.noise must be binary");
  if (oracle.domain_size() != 2 * params.n)
    throw std::invalid_argument("search_shifted: oracle/params domain mismatch");
  if (params.n == 1) {
    SearchOutcome out;
    out.estimated_index = 1;
    return out;
  }
  SearchParams doubled = params;
  doubled.n = 2 * params.n;
  auto outcome = run_circular_search(
      doubled, [&](std::size_t x) { return oracle.answer_binary(x); });
  outcome.estimated_index = oracle.map_back(outcome.estimated_index);
  return outcome;
}

}  // namespace noisy_bisect
