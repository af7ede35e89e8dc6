// Command-line front end: Monte Carlo runs, bound calculators, and the
// coin-ranking demo.  Exit codes: 0 success, 1 invalid arguments,
// 2 I/O failure, 3 assertion violated.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noisy_bisect/bounds.hpp"
#include "noisy_bisect/harness.hpp"
#include "noisy_bisect/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 1;
constexpr int kExitIo = 2;
constexpr int kExitAssert = 3;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ';') {
      if (!cur.empty()) out.push_back(std::stod(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  return out;
}

bool env_seed(std::uint64_t& out) {
  const char* s = std::getenv("NOISY_BISECT_SEED");
  if (s == nullptr || *s == '\0') return false;
  try {
    out = std::stoull(s);
    return true;
  } catch (const std::exception&) {
    throw std::invalid_argument("NOISY_BISECT_SEED is not a valid integer");
  }
}

// Whether a flat key=value config text assigns the given key.
bool config_text_has_key(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string k = line.substr(0, eq);
    k.erase(0, k.find_first_not_of(" \t"));
    k.erase(k.find_last_not_of(" \t") + 1);
    if (k == key) return true;
  }
  return false;
}

struct RunAsserts {
  double success_ge = -1.0;
  double mean_le = -1.0;
  double mean_ge = -1.0;
  double p95_le = -1.0;
};

int cmd_run(const noisy_bisect::ExperimentConfig& cfg, const RunAsserts& asserts) {
  const auto result = noisy_bisect::run_experiment(cfg);
  const auto& s = result.summary;

  std::size_t converged = 0, capped = 0, exhausted = 0;
  for (const auto& r : result.records) {
    switch (r.halt) {
      case noisy_bisect::HaltReason::converged: ++converged; break;
      case noisy_bisect::HaltReason::query_cap: ++capped; break;
      case noisy_bisect::HaltReason::verify_exhausted: ++exhausted; break;
    }
  }

  std::cout << "n=" << cfg.n << '\n'
            << "algo=" << (cfg.noise.is_binary() ? "binary" : "kary") << '\n'
            << "k=" << cfg.noise.k() << '\n'
            << "noise=" << cfg.noise.description() << '\n'
            << "delta=" << fmt(cfg.delta) << '\n'
            << "trials=" << cfg.trials << '\n'
            << "seed=" << cfg.master_seed << '\n'
            << "success_rate=" << fmt(s.success_rate) << '\n'
            << "mean_queries=" << fmt(s.mean_queries) << '\n'
            << "median_queries=" << fmt(s.median_queries) << '\n'
            << "p95_queries=" << fmt(s.p95_queries) << '\n'
            << "theory_leading=" << fmt(s.theory_leading) << '\n'
            << "constant_strict=" << fmt(s.constant_strict) << '\n'
            << "constant_lenient=" << fmt(s.constant_lenient) << '\n'
            << "halt_converged=" << converged << '\n'
            << "halt_query_cap=" << capped << '\n'
            << "halt_verify_exhausted=" << exhausted << '\n';
  if (!cfg.output_path.empty()) std::cout << "csv=" << cfg.output_path << '\n';

  bool failed = false;
  auto check = [&](bool armed, bool ok, const std::string& what) {
    if (armed && !ok) {
      std::cerr << "assertion failed: " << what << '\n';
      failed = true;
    }
  };
  check(asserts.success_ge >= 0.0, s.success_rate >= asserts.success_ge,
        "success_rate " + fmt(s.success_rate) + " < " + fmt(asserts.success_ge));
  check(asserts.mean_le >= 0.0, s.mean_queries <= asserts.mean_le,
        "mean_queries " + fmt(s.mean_queries) + " > " + fmt(asserts.mean_le));
  check(asserts.mean_ge >= 0.0, s.mean_queries >= asserts.mean_ge,
        "mean_queries " + fmt(s.mean_queries) + " < " + fmt(asserts.mean_ge));
  check(asserts.p95_le >= 0.0, s.p95_queries <= asserts.p95_le,
        "p95_queries " + fmt(s.p95_queries) + " > " + fmt(asserts.p95_le));
  return failed ? kExitAssert : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive noisy binary search: simulator and bound calculators"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Monte Carlo simulation of the adaptive search");
  std::size_t r_n = 0, r_k = 0, r_trials = 0, r_lsur = 0, r_maxq = 0, r_vrounds = 0;
  double r_p = 0.0, r_delta = 0.0, r_eps = 0.0, r_gamma = 0.0;
  std::string r_probs, r_out, r_config;
  std::uint64_t r_seed = 0;
  RunAsserts asserts;
  run->add_option("--n", r_n, "domain size");
  run->add_option("--p", r_p, "binary answer correctness, in (0.5, 1]");
  run->add_option("--probs", r_probs,
                  "k-ary answer-shift distribution, e.g. 0.85,0.05,0.05,0.05");
  run->add_option("--k", r_k, "arity cross-check (must equal len(probs)-1)");
  run->add_option("--delta", r_delta, "allowed failure probability (default 0.05)");
  run->add_option("--trials", r_trials, "number of trials (default 100)");
  run->add_option("--seed", r_seed, "master seed (env NOISY_BISECT_SEED, default 0)");
  run->add_option("--out", r_out, "write per-trial CSV to this path");
  run->add_option("--config", r_config, "flat key=value config file; flags override");
  run->add_option("--eps-par", r_eps, "split-balance tolerance override");
  run->add_option("--l-sur", r_lsur, "localization window radius override");
  run->add_option("--gamma", r_gamma, "confidence knob of the window radius rule");
  run->add_option("--max-queries", r_maxq, "query budget override");
  run->add_option("--verify-rounds", r_vrounds, "votes per verification majority");
  run->add_option("--assert-success-ge", asserts.success_ge,
                  "exit 3 unless success_rate >= this");
  run->add_option("--assert-mean-queries-le", asserts.mean_le,
                  "exit 3 unless mean_queries <= this");
  run->add_option("--assert-mean-queries-ge", asserts.mean_ge,
                  "exit 3 unless mean_queries >= this");
  run->add_option("--assert-p95-queries-le", asserts.p95_le,
                  "exit 3 unless p95_queries <= this");

  // --- bounds ---
  auto* bounds = app.add_subcommand("bounds", "information-theoretic bound calculators");
  std::size_t b_n = 0, b_qk = 0;
  double b_p = 0.0, b_tau = 0.05, b_delta = 0.05, b_c1 = 1.0, b_qdelta = 0.0;
  double b_rate_t = 0.0, b_rate_i = 0.0, b_rate_kk = 0.0;
  std::string b_probs;
  std::vector<double> b_chis;
  bounds->add_option("--n", b_n, "domain size")->required();
  bounds->add_option("--p", b_p, "binary answer correctness, in (0.5, 1]");
  bounds->add_option("--probs", b_probs, "k-ary answer-shift distribution");
  bounds->add_option("--tau", b_tau, "error budget of the lower bound (default 0.05)");
  bounds->add_option("--delta", b_delta, "failure budget of the tail bound (default 0.05)");
  bounds->add_option("--chi", b_chis, "tail-bound strength(s); default 2 and 4");
  bounds->add_option("--c1", b_c1, "constant in the tail threshold (default 1)");
  bounds->add_option("--quantum-k", b_qk, "report the quantum query floor for k items");
  bounds->add_option("--quantum-delta", b_qdelta,
                     "error allowance of the quantum floor (default 0)");
  auto* rate_t_opt = bounds->add_option("--rate-t", b_rate_t,
                                        "queries used by a reference procedure");
  auto* rate_i_opt = bounds->add_option("--rate-i", b_rate_i,
                                        "total information (bits) of its answers");
  auto* rate_kk_opt = bounds->add_option("--rate-kk", b_rate_kk,
                                         "hypothesis count the rate refers to");

  // --- demo-coins ---
  auto* demo = app.add_subcommand("demo-coins", "rank an unknown coin among references");
  std::string d_biases;
  double d_unknown = 0.0, d_delta = 0.05;
  std::uint64_t d_seed = 0;
  demo->add_option("--biases", d_biases, "reference heads biases, strictly increasing")
      ->required();
  demo->add_option("--unknown", d_unknown, "heads bias of the unknown coin")->required();
  demo->add_option("--delta", d_delta, "allowed failure probability (default 0.05)");
  demo->add_option("--seed", d_seed, "seed (env NOISY_BISECT_SEED, default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (app.got_subcommand(run)) {
      noisy_bisect::ExperimentConfig cfg;
      bool have_noise = false;
      bool config_has_seed = false;
      if (run->count("--config") != 0) {
        std::ifstream in(r_config);
        if (!in) {
          std::cerr << "cannot open config file: " << r_config << '\n';
          return kExitIo;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        cfg = noisy_bisect::parse_config_text(buf.str());
        have_noise = true;
        config_has_seed = config_text_has_key(buf.str(), "seed");
      } else {
        cfg.trials = 100;
      }
      if (run->count("--n") != 0) cfg.n = r_n;
      if (run->count("--p") != 0 && run->count("--probs") != 0)
        throw std::invalid_argument("--p and --probs are mutually exclusive");
      if (run->count("--p") != 0) {
        cfg.noise = noisy_bisect::NoiseModel::binary(r_p);
        have_noise = true;
      }
      if (run->count("--probs") != 0) {
        cfg.noise = noisy_bisect::NoiseModel::kary(parse_list(r_probs));
        have_noise = true;
      }
      if (!have_noise)
        throw std::invalid_argument("one of --p / --probs (or --config) is required");
      if (run->count("--k") != 0 && r_k != cfg.noise.k())
        throw std::invalid_argument("--k does not match the noise model");
      if (run->count("--delta") != 0) cfg.delta = r_delta;
      if (run->count("--trials") != 0) cfg.trials = r_trials;
      if (run->count("--out") != 0) cfg.output_path = r_out;
      if (run->count("--eps-par") != 0) cfg.eps_par = r_eps;
      if (run->count("--l-sur") != 0) cfg.l_sur = r_lsur;
      if (run->count("--gamma") != 0) cfg.gamma = r_gamma;
      if (run->count("--max-queries") != 0) cfg.max_queries = r_maxq;
      if (run->count("--verify-rounds") != 0) cfg.verify_rounds = r_vrounds;
      if (run->count("--seed") != 0) {
        cfg.master_seed = r_seed;
      } else if (!config_has_seed) {
        std::uint64_t from_env = 0;
        if (env_seed(from_env)) cfg.master_seed = from_env;
      }
      if (cfg.n == 0) throw std::invalid_argument("--n is required");
      return cmd_run(cfg, asserts);
    }

    if (app.got_subcommand(bounds)) {
      if ((bounds->count("--p") != 0) == (bounds->count("--probs") != 0))
        throw std::invalid_argument("exactly one of --p / --probs is required");
      noisy_bisect::NoiseModel noise =
          bounds->count("--p") != 0
              ? noisy_bisect::NoiseModel::binary(b_p)
              : noisy_bisect::NoiseModel::kary(parse_list(b_probs));
      if (b_chis.empty()) b_chis = {2.0, 4.0};
      const auto report = noisy_bisect::make_bounds_report(b_n, noise, b_tau,
                                                           b_delta, b_chis, b_c1);
      std::cout << "n=" << report.n << '\n'
                << "noise=" << report.noise_desc << '\n'
                << "i_bits=" << fmt(report.i_bits) << '\n'
                << "tau=" << fmt(b_tau) << '\n'
                << "lower_bound_queries=" << fmt(report.lower_bound_queries) << '\n'
                << "upper_bound_estimate=" << fmt(report.upper_bound_estimate) << '\n';
      for (std::size_t i = 0; i < report.tail_points.size(); ++i)
        std::cout << "tail_bound chi=" << fmt(b_chis[i])
                  << " threshold=" << fmt(report.tail_points[i].threshold)
                  << " probability=" << fmt(report.tail_points[i].probability)
                  << '\n';
      if (bounds->count("--quantum-k") != 0)
        std::cout << "quantum_lower_bound="
                  << fmt(noisy_bisect::quantum_lower_bound(b_qk, b_qdelta)) << '\n';
      const int rate_args = (rate_t_opt->count() != 0) + (rate_i_opt->count() != 0) +
                            (rate_kk_opt->count() != 0);
      if (rate_args != 0) {
        if (rate_args != 3)
          throw std::invalid_argument("--rate-t, --rate-i, --rate-kk go together");
        std::cout << "quantum_rate="
                  << fmt(noisy_bisect::quantum_rate_report(b_rate_kk, b_rate_t,
                                                           b_rate_i))
                  << '\n';
      }
      return kExitOk;
    }

    // demo-coins
    if (demo->count("--seed") == 0) {
      std::uint64_t from_env = 0;
      if (env_seed(from_env)) d_seed = from_env;
    }
    const std::vector<double> biases = parse_list(d_biases);
    const auto result = noisy_bisect::run_demo_coins(biases, d_unknown, d_delta, d_seed);
    std::cout << "references=" << d_biases << '\n'
              << "unknown=" << fmt(d_unknown) << '\n'
              << "delta=" << fmt(d_delta) << '\n'
              << "seed=" << d_seed << '\n'
              << "min_effective_p=" << fmt(result.min_effective_p) << '\n'
              << "true_rank=" << result.true_rank << '\n'
              << "estimated_rank=" << result.estimated_rank << '\n'
              << "success=" << (result.success ? 1 : 0) << '\n'
              << "comparisons=" << result.comparisons << '\n'
              << "flips=" << result.flips << '\n'
              << "halt_reason=" << noisy_bisect::to_string(result.outcome.halt_reason)
              << '\n';
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadArgs;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadArgs;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
