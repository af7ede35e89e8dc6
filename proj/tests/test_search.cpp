#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "noisy_bisect/oracles.hpp"
#include "noisy_bisect/search.hpp"

using namespace noisy_bisect;

namespace {

// Oracle whose bit at each position alternates call by call, so no repeated
// vote of two rounds can ever collect two agreeing answers at one position.
// Pins the retry-cap halt without any seed hunting.
struct AlternatingOracle : OracleInterface {
  std::size_t n;
  std::vector<std::size_t> calls;
  explicit AlternatingOracle(std::size_t n_in) : n(n_in), calls(n_in + 1, 0) {}
  std::size_t domain_size() const override { return n; }
  int answer_binary(std::size_t i) override {
    count_query();
    return static_cast<int>(calls.at(i)++ % 2);
  }
};

std::size_t count_phase(const SearchOutcome& out, QueryPhase phase) {
  std::size_t c = 0;
  for (const auto& e : out.transcript) c += e.phase == phase ? 1 : 0;
  return c;
}

void check_same_transcript(const SearchOutcome& a, const SearchOutcome& b) {
  CHECK(a.estimated_index == b.estimated_index);
  CHECK(a.queries_used == b.queries_used);
  CHECK(a.halt_reason == b.halt_reason);
  REQUIRE(a.transcript.size() == b.transcript.size());
  for (std::size_t i = 0; i < a.transcript.size(); ++i) {
    CHECK(a.transcript[i].splits == b.transcript[i].splits);
    CHECK(a.transcript[i].answer == b.transcript[i].answer);
    CHECK(a.transcript[i].phase == b.transcript[i].phase);
    CHECK(a.transcript[i].prefix_mass ==
          doctest::Approx(b.transcript[i].prefix_mass).epsilon(1e-15));
  }
}

}  // namespace

TEST_CASE("derived parameter defaults") {
  SearchParams sp;
  sp.n = 1 << 10;
  sp.noise = NoiseModel::binary(0.75);
  sp.delta = 0.05;
  CHECK(sp.resolved_eps_par() ==
        doctest::Approx(0.06454972243679027).epsilon(1e-12));

  sp.n = 1 << 16;
  CHECK(sp.resolved_eps_par() ==
        doctest::Approx(0.05103103630798288).epsilon(1e-12));
  CHECK(sp.resolved_verify_rounds() == 23);
  CHECK(sp.resolved_retry_cap() == 8);
  CHECK(sp.resolved_max_queries() == 1130);
  CHECK(sp.resolved_l_sur() == 16);

  SearchParams nl;
  nl.n = 1024;
  nl.noise = NoiseModel::binary(1.0);
  CHECK(nl.resolved_eps_par() == 0.5);
  CHECK(nl.resolved_l_sur() == 1);

  // k-ary tolerance is the binary one over k.
  SearchParams ka;
  ka.n = 1 << 12;
  ka.noise = NoiseModel::kary({0.85, 0.05, 0.05, 0.05});
  CHECK(ka.resolved_eps_par() ==
        doctest::Approx(std::sqrt(1.0 / (24.0 * 12.0)) / 3.0).epsilon(1e-12));

  // (1/gamma^2)^(1/(2p-1)) = 4^1.25 at p = 0.9, rounded up.
  SearchParams w;
  w.n = 1 << 16;
  w.noise = NoiseModel::binary(0.9);
  CHECK(w.resolved_l_sur() == 6);

  SearchParams cl;
  cl.n = 100;
  cl.noise = NoiseModel::binary(0.75);
  cl.l_sur = 5000;
  CHECK(cl.resolved_l_sur() == 100);
}

TEST_CASE("parameter validation") {
  SearchParams good;
  good.n = 16;
  good.noise = NoiseModel::binary(0.75);
  CHECK_NOTHROW(good.validate());

  SearchParams bad = good;
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.eps_par = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.eps_par = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.l_sur = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.max_queries = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.verify_rounds = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  // A 4-way partition needs at least 4 cells.
  bad = good;
  bad.n = 3;
  bad.noise = NoiseModel::kary({0.4, 0.2, 0.2, 0.2});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-cell domain needs no queries") {
  SimulatedBinaryOracle oracle(1, 1, 0.75, 7);
  SearchParams sp;
  sp.n = 1;
  sp.noise = NoiseModel::binary(0.75);
  const SearchOutcome out = search_binary(sp, oracle);
  CHECK(out.estimated_index == 1);
  CHECK(out.queries_used == 0);
  CHECK(out.transcript.empty());
  CHECK(out.halt_reason == HaltReason::converged);
}

TEST_CASE("noiseless search recovers every target") {
  const std::size_t n = 16;
  for (std::size_t target = 1; target <= n; ++target) {
    SimulatedBinaryOracle oracle(n, target, 1.0, 99);
    SearchParams sp;
    sp.n = n;
    sp.noise = NoiseModel::binary(1.0);
    const SearchOutcome out = search_binary(sp, oracle);
    CHECK(out.estimated_index == target);
    CHECK(out.halt_reason == HaltReason::converged);
    CHECK(out.queries_used == out.transcript.size());
    // Bisection proper should not exceed log2(n) queries by much.
    CHECK(count_phase(out, QueryPhase::main) <= 5);
  }
}

TEST_CASE("main-phase queries stay nearly balanced") {
  SimulatedBinaryOracle oracle(1024, 700, 0.75, 4242);
  SearchParams sp;
  sp.n = 1024;
  sp.noise = NoiseModel::binary(0.75);
  const double eps = sp.resolved_eps_par();
  const SearchOutcome out = search_binary(sp, oracle);
  REQUIRE(!out.transcript.empty());
  std::size_t main_queries = 0;
  for (const auto& e : out.transcript) {
    if (e.phase != QueryPhase::main) continue;
    ++main_queries;
    CHECK(e.prefix_mass >= 0.5 - eps - 1e-9);
    CHECK(e.prefix_mass < 0.5);
    REQUIRE(e.splits.size() == 1);
    CHECK(e.splits[0] >= 1);
    CHECK(e.splits[0] < 1024);
  }
  CHECK(main_queries > 0);
}

TEST_CASE("noiseless 4-way search takes exactly three partition queries") {
  const std::size_t n = 64;
  const std::vector<double> probs{1.0, 0.0, 0.0, 0.0};
  for (std::size_t target = 1; target <= n; ++target) {
    SimulatedKaryOracle oracle(n, target, probs, 1);
    SearchParams sp;
    sp.n = n;
    sp.noise = NoiseModel::kary(probs);
    const SearchOutcome out = search_kary(sp, oracle);
    CHECK(out.estimated_index == target);
    CHECK(count_phase(out, QueryPhase::main) == 3);
    // Partition boundaries are interior and strictly increasing.
    for (const auto& e : out.transcript) {
      REQUIRE(e.splits.size() == 3);
      CHECK(e.splits[0] >= 1);
      CHECK(e.splits[1] > e.splits[0]);
      CHECK(e.splits[2] > e.splits[1]);
      CHECK(e.splits[2] < n);
    }
  }
}

TEST_CASE("same seed, same run") {
  SearchParams sp;
  sp.n = 512;
  sp.noise = NoiseModel::binary(0.7);
  SimulatedBinaryOracle o1(512, 300, 0.7, 2026);
  SimulatedBinaryOracle o2(512, 300, 0.7, 2026);
  check_same_transcript(search_binary(sp, o1), search_binary(sp, o2));
}

TEST_CASE("one-split partition queries reproduce the binary search query for query") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 64;
    const std::size_t target = (seed * 17) % n + 1;
    SimulatedBinaryOracle ob(n, target, 0.8, seed);
    SimulatedKaryOracle ok(n, target, {0.8, 0.2}, seed);
    SearchParams pb;
    pb.n = n;
    pb.noise = NoiseModel::binary(0.8);
    SearchParams pk;
    pk.n = n;
    pk.noise = NoiseModel::kary({0.8, 0.2});
    check_same_transcript(search_binary(pb, ob), search_kary(pk, ok));
  }
}

TEST_CASE("query budget halt") {
  SimulatedBinaryOracle oracle(1024, 123, 0.75, 11);
  SearchParams sp;
  sp.n = 1024;
  sp.noise = NoiseModel::binary(0.75);
  sp.max_queries = 5;
  const SearchOutcome out = search_binary(sp, oracle);
  CHECK(out.halt_reason == HaltReason::query_cap);
  CHECK(out.queries_used == 5);
  CHECK(out.transcript.size() == 5);
  CHECK(out.estimated_index >= 1);
  CHECK(out.estimated_index <= 1024);
}

TEST_CASE("retry budget halt") {
  // Alternating answers make every two-round vote fail, and the posterior
  // cycles through a two-step orbit, so the run is fully deterministic:
  // one verification query per retry until the retry cap (8 at delta=0.05).
  AlternatingOracle oracle(2);
  SearchParams sp;
  sp.n = 2;
  sp.noise = NoiseModel::binary(0.9);
  sp.delta = 0.05;
  sp.eps_par = 0.4;
  sp.l_sur = 2;
  sp.verify_rounds = 2;
  sp.max_queries = 1000;
  const SearchOutcome out = search_binary(sp, oracle);
  CHECK(out.halt_reason == HaltReason::verify_exhausted);
  CHECK(out.rounds_of_retry == 8);
  CHECK(out.queries_used == 8);
  CHECK(out.estimated_index == 1);
  CHECK(count_phase(out, QueryPhase::verify) == 8);
}

TEST_CASE("position-dependent updates reduce to the flat ones when p is constant") {
  SimulatedBinaryOracle o1(256, 77, 0.8, 5);
  SimulatedBinaryOracle o2(256, 77, 0.8, 5);
  SearchParams sp;
  sp.n = 256;
  sp.noise = NoiseModel::binary(0.8);
  const SearchOutcome flat = search_binary(sp, o1);
  const SearchOutcome posdep =
      search_position_dependent(sp, o2, [](std::size_t) { return 0.8; });
  check_same_transcript(flat, posdep);
}

TEST_CASE("arc-start search on the doubled wrapped domain") {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t target = 1; target <= n; ++target) {
      for (std::size_t shift = 1; shift <= 2 * n; ++shift) {
        SimulatedBinaryOracle inner(n, target, 1.0, 3);
        ShiftWrappedOracle wrapped(inner, shift, 0);
        SearchParams sp;
        sp.n = n;
        sp.noise = NoiseModel::binary(1.0);
        const SearchOutcome out = search_shifted(sp, wrapped);
        CHECK(out.estimated_index == target);
      }
    }
  }

  // Seeded shift: same contract, shift drawn from 1..2n.
  SimulatedBinaryOracle inner(32, 20, 1.0, 8);
  ShiftWrappedOracle wrapped(inner, std::uint64_t{123});
  CHECK(wrapped.shift() >= 1);
  CHECK(wrapped.shift() <= 64);
  SearchParams sp;
  sp.n = 32;
  sp.noise = NoiseModel::binary(1.0);
  CHECK(search_shifted(sp, wrapped).estimated_index == 20);
}

TEST_CASE("wrapper argument validation") {
  SimulatedBinaryOracle bin(10, 3, 0.75, 1);
  SimulatedKaryOracle kary(10, 3, {0.8, 0.1, 0.1}, 1);

  SearchParams sp;
  sp.n = 10;
  sp.noise = NoiseModel::kary({0.8, 0.1, 0.1});
  CHECK_THROWS_AS(search_binary(sp, kary), std::invalid_argument);

  SearchParams mism;
  mism.n = 12;
  mism.noise = NoiseModel::binary(0.75);
  CHECK_THROWS_AS(search_binary(mism, bin), std::invalid_argument);
  mism.noise = NoiseModel::kary({0.8, 0.1, 0.1});
  CHECK_THROWS_AS(search_kary(mism, kary), std::invalid_argument);

  SearchParams pd;
  pd.n = 10;
  pd.noise = NoiseModel::binary(0.75);
  CHECK_THROWS_AS(search_position_dependent(pd, bin, nullptr),
                  std::invalid_argument);
  pd.noise = NoiseModel::kary({0.8, 0.1, 0.1});
  CHECK_THROWS_AS(
      search_position_dependent(pd, kary, [](std::size_t) { return 0.75; }),
      std::invalid_argument);

  // A shifted search over inner size 8 runs on 16 wrapped cells, not 16 inner.
  SimulatedBinaryOracle inner(8, 3, 1.0, 1);
  ShiftWrappedOracle wrapped(inner, std::size_t{5}, 0);
  SearchParams sh;
  sh.n = 16;
  sh.noise = NoiseModel::binary(1.0);
  CHECK_THROWS_AS(search_shifted(sh, wrapped), std::invalid_argument);
}

TEST_CASE("halt reasons have stable names") {
  CHECK(std::string(to_string(HaltReason::converged)) == "converged");
  CHECK(std::string(to_string(HaltReason::query_cap)) == "query_cap");
  CHECK(std::string(to_string(HaltReason::verify_exhausted)) ==
        "verify_exhausted");
}
