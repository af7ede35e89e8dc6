#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "noisy_bisect/oracles.hpp"
#include "noisy_bisect/rng.hpp"

using namespace noisy_bisect;

TEST_CASE("noiseless binary oracle implements the threshold truth table") {
  for (std::size_t truth = 1; truth <= 8; ++truth) {
    SimulatedBinaryOracle oracle(8, truth, 1.0, 123);
    for (std::size_t i = 1; i <= 8; ++i)
      CHECK(oracle.answer_binary(i) == (i >= truth ? 1 : 0));
  }
}

TEST_CASE("binary oracle validates its arguments") {
  CHECK_THROWS_AS(SimulatedBinaryOracle(8, 0, 0.8, 1), std::invalid_argument);
  CHECK_THROWS_AS(SimulatedBinaryOracle(8, 9, 0.8, 1), std::invalid_argument);
  CHECK_THROWS_AS(SimulatedBinaryOracle(8, 3, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(SimulatedBinaryOracle(8, 3, 1.1, 1), std::invalid_argument);
  SimulatedBinaryOracle oracle(8, 3, 0.8, 1);
  CHECK_THROWS_AS(oracle.answer_binary(0), std::invalid_argument);
  CHECK_THROWS_AS(oracle.answer_binary(9), std::invalid_argument);
}

TEST_CASE("binary oracle noise is seeded and per-call independent") {
  SimulatedBinaryOracle a(64, 20, 0.75, 42);
  SimulatedBinaryOracle b(64, 20, 0.75, 42);
  std::vector<int> seq_a, seq_b;
  for (int r = 0; r < 200; ++r) {
    seq_a.push_back(a.answer_binary(20));
    seq_b.push_back(b.answer_binary(20));
  }
  CHECK(seq_a == seq_b);  // same seed, same stream
  CHECK(a.queries_used() == 200);
  // A different seed produces a different stream.
  SimulatedBinaryOracle c(64, 20, 0.75, 43);
  std::vector<int> seq_c;
  for (int r = 0; r < 200; ++r) seq_c.push_back(c.answer_binary(20));
  CHECK(seq_a != seq_c);
}

TEST_CASE("binary oracle empirical flip rate matches 1-p within 3 sigma") {
  const double p = 0.75;
  const std::size_t trials = 20000;
  SimulatedBinaryOracle oracle(100, 37, p, 7);
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < trials; ++r) {
    const int truth = 1;  // query at the target itself: 37 >= 37
    if (oracle.answer_binary(37) != truth) ++wrong;
  }
  const double rate = static_cast<double>(wrong) / trials;
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(rate - (1 - p)) <= 3 * sigma);
}

TEST_CASE("noiseless k-ary oracle reports the containing interval") {
  const std::vector<double> exact{1.0, 0.0, 0.0, 0.0};
  SimulatedKaryOracle oracle(12, 7, exact, 5);
  // splits (3, 6, 9): intervals [1,3], [4,6], [7,9], [10,12]; 7 is in I_2.
  CHECK(oracle.answer_kary({3, 6, 9}) == 2);
  CHECK(oracle.answer_kary({1, 2, 3}) == 3);
  CHECK(oracle.answer_kary({7, 8, 9}) == 0);
  CHECK(oracle.queries_used() == 3);
}

TEST_CASE("k-ary oracle validates splits and probabilities") {
  CHECK_THROWS_AS(SimulatedKaryOracle(12, 7, {0.7, 0.3, 0.1}, 1),
                  std::invalid_argument);  // does not sum to 1
  CHECK_THROWS_AS(SimulatedKaryOracle(12, 7, {1.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(SimulatedKaryOracle(12, 13, {0.8, 0.2}, 1),
                  std::invalid_argument);  // target outside the domain
  SimulatedKaryOracle oracle(12, 7, {0.8, 0.1, 0.1}, 1);
  CHECK_THROWS_AS(oracle.answer_kary({}), std::invalid_argument);
  CHECK_THROWS_AS(oracle.answer_kary({5, 5}), std::invalid_argument);
  CHECK_THROWS_AS(oracle.answer_kary({5, 12}), std::invalid_argument);
}

TEST_CASE("k-ary shift distribution matches probs within 3 sigma") {
  const std::vector<double> probs{0.7, 0.1, 0.1, 0.1};
  SimulatedKaryOracle oracle(16, 6, probs, 11);
  const std::vector<std::size_t> splits{4, 8, 12};  // truth interval: 1
  const std::size_t trials = 20000;
  std::vector<std::size_t> counts(4, 0);
  for (std::size_t r = 0; r < trials; ++r) {
    const int a = oracle.answer_kary(splits);
    ++counts[static_cast<std::size_t>((a + 4 - 1) % 4)];  // observed shift d
  }
  for (std::size_t d = 0; d < 4; ++d) {
    const double rate = static_cast<double>(counts[d]) / trials;
    const double sigma = std::sqrt(probs[d] * (1 - probs[d]) / trials);
    CHECK(std::abs(rate - probs[d]) <= 3 * sigma);
  }
}

TEST_CASE("k=1 oracle agrees with the binary oracle call for call") {
  // Same seed, same query sequence: the k-ary oracle with probs (p, 1-p)
  // must agree call-for-call with 1 - binary bit.
  const double p = 0.8;
  SimulatedBinaryOracle bin(64, 23, p, 99);
  SimulatedKaryOracle kary(64, 23, {p, 1 - p}, 99);
  CounterRng qpick(5);
  for (int r = 0; r < 300; ++r) {
    const std::size_t i = qpick.next_in_range(1, 63);
    const int a_bin = 1 - bin.answer_binary(i);
    const int a_kary = kary.answer_kary({i});
    CHECK(a_bin == a_kary);
  }
}

TEST_CASE("coin pair oracle computes the effective channel probability") {
  CHECK(CoinPairOracle::effective_p_for(0.5, 0.6) == doctest::Approx(0.6));
  CHECK(CoinPairOracle::effective_p_for(0.2, 0.8) ==
        doctest::Approx(0.9411764705882353));
  CHECK(CoinPairOracle::effective_p_for(0.5, 1.0) == doctest::Approx(1.0));
  // Symmetric in the two biases.
  CHECK(CoinPairOracle::effective_p_for(0.3, 0.7) ==
        doctest::Approx(CoinPairOracle::effective_p_for(0.7, 0.3)));
  // The raw formula degenerates to 1/2 for equal biases; the oracle itself
  // refuses that configuration (a p=1/2 channel carries no information).
  CHECK(CoinPairOracle::effective_p_for(0.4, 0.4) == doctest::Approx(0.5));
  CHECK_THROWS_AS(CoinPairOracle::effective_p_for(0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(CoinPairOracle(0.4, 0.4, 1), std::invalid_argument);
}

TEST_CASE("coin pair verdicts name the more biased coin at the effective rate") {
  CoinPairOracle oracle(0.3, 0.6, 21);  // unknown coin is more biased
  const std::size_t trials = 20000;
  std::size_t said_more = 0;
  for (std::size_t r = 0; r < trials; ++r)
    if (oracle.unknown_more_biased()) ++said_more;
  const double p = oracle.effective_p();
  const double rate = static_cast<double>(said_more) / trials;
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(rate - p) <= 3 * sigma);
  CHECK(oracle.flips_used() >= 2 * trials);  // each verdict costs >= 1 pair
}

TEST_CASE("shift wrapper produces a single all-ones arc of length n") {
  const std::size_t n = 5;
  for (std::size_t truth = 1; truth <= n; ++truth) {
    for (std::size_t shift = 1; shift <= 2 * n; ++shift) {
      SimulatedBinaryOracle inner(n, truth, 1.0, 1);
      ShiftWrappedOracle wrapped(inner, shift, 0);
      REQUIRE(wrapped.domain_size() == 2 * n);
      std::vector<int> bits(2 * n + 1);
      std::size_t ones = 0;
      for (std::size_t x = 1; x <= 2 * n; ++x) {
        bits[x] = wrapped.answer_binary(x);
        ones += static_cast<std::size_t>(bits[x]);
      }
      CHECK(ones == n);
      // Exactly one ascent 0 -> 1 on the cycle, and it maps back to truth.
      std::size_t starts = 0, start_at = 0;
      for (std::size_t x = 1; x <= 2 * n; ++x) {
        const std::size_t prev = x == 1 ? 2 * n : x - 1;
        if (bits[x] == 1 && bits[prev] == 0) {
          ++starts;
          start_at = x;
        }
      }
      REQUIRE(starts == 1);
      CHECK(wrapped.map_back(start_at) == truth);
    }
  }
}

TEST_CASE("shift wrapper seeded constructor draws a shift in range") {
  SimulatedBinaryOracle inner(16, 3, 0.9, 4);
  ShiftWrappedOracle a(inner, 77);
  CHECK(a.shift() >= 1);
  CHECK(a.shift() <= 32);
  ShiftWrappedOracle b(inner, 77);
  CHECK(a.shift() == b.shift());  // seed-determined
  CHECK_THROWS_AS(ShiftWrappedOracle(inner, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(ShiftWrappedOracle(inner, 33, 0), std::invalid_argument);
}

TEST_CASE("counter rng streams are deterministic and well distributed") {
  CHECK(stream_value(1, 0) == stream_value(1, 0));
  CHECK(stream_value(1, 0) != stream_value(1, 1));
  CHECK(stream_value(1, 0) != stream_value(2, 0));
  CounterRng rng(9);
  double sum = 0.0;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const double u = rng.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / reps - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / reps));
  // Rejection sampling stays in range and hits both endpoints eventually.
  CounterRng r2(10);
  bool lo = false, hi = false;
  for (int r = 0; r < 2000; ++r) {
    const std::uint64_t v = r2.next_in_range(3, 7);
    CHECK(v >= 3);
    CHECK(v <= 7);
    lo = lo || v == 3;
    hi = hi || v == 7;
  }
  CHECK(lo);
  CHECK(hi);
}
