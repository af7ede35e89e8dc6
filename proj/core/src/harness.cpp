#include "noisy_bisect/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noisy_bisect {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double percentile_nearest_rank(std::vector<double> sorted_values, double q) {
  const std::size_t n = sorted_values.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n)));
  if (rank == 0) rank = 1;
  if (rank > n) rank = n;
  return sorted_values[rank - 1];
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_config_value(const std::string& key, std::size_t line_no) {
  throw std::invalid_argument("config line " + std::to_string(line_no) +
                              ": cannot parse value for " + key);
}

std::uint64_t parse_config_u64(const std::string& value, const std::string& key,
                               std::size_t line_no) {
  if (!value.empty() && value[0] == '-') bad_config_value(key, line_no);
  try {
    std::size_t used = 0;
    const unsigned long long out = std::stoull(value, &used);
    if (used != value.size()) bad_config_value(key, line_no);
    return out;
  } catch (const std::exception&) {
    bad_config_value(key, line_no);
  }
}

double parse_config_f64(const std::string& value, const std::string& key,
                        std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) bad_config_value(key, line_no);
    return out;
  } catch (const std::exception&) {
    bad_config_value(key, line_no);
  }
}

std::vector<double> parse_prob_list(const std::string& text, const std::string& key,
                                    std::size_t line_no) {
  std::vector<double> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ';') {
      const std::string item = trim(cur);
      if (!item.empty()) out.push_back(parse_config_f64(item, key, line_no));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

}  // namespace

SearchParams ExperimentConfig::search_params() const {
  SearchParams sp;
  sp.n = n;
  sp.noise = noise;
  sp.delta = delta;
  sp.eps_par = eps_par;
  sp.l_sur = l_sur;
  sp.gamma = gamma;
  sp.max_queries = max_queries;
  sp.verify_rounds = verify_rounds;
  return sp;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials == 0)
    throw std::invalid_argument("run_experiment: need at least one trial");
  const SearchParams sp = config.search_params();
  sp.validate();

  ExperimentResult result;
  result.config = config;
  result.records.reserve(config.trials);

  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed = stream_value(config.master_seed, t);
    const std::size_t true_index =
        config.trials >= config.n
            ? t % config.n + 1
            : 1 + static_cast<std::size_t>(stream_value(trial_seed, 0) %
                                           config.n);
    const std::uint64_t oracle_seed = stream_value(trial_seed, 1);

    SearchOutcome outcome;
    if (config.noise.is_binary()) {
      SimulatedBinaryOracle oracle(config.n, true_index, config.noise.p(),
                                   oracle_seed);
      outcome = search_binary(sp, oracle);
    } else {
      SimulatedKaryOracle oracle(config.n, true_index, config.noise.probs(),
                                 oracle_seed);
      outcome = search_kary(sp, oracle);
    }

    TrialRecord rec;
    rec.trial_index = t;
    rec.seed = trial_seed;
    rec.true_index = true_index;
    rec.estimated_index = outcome.estimated_index;
    rec.success = outcome.estimated_index == true_index;
    rec.queries_used = outcome.queries_used;
    rec.halt = outcome.halt_reason;
    result.records.push_back(rec);
  }

  result.summary = summarize(config, result.records);
  if (!config.output_path.empty())
    write_trials_csv(config.output_path, config, result.records);
  return result;
}

ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<TrialRecord>& records) {
  ExperimentSummary s;
  s.trials = records.size();
  if (records.empty()) return s;

  std::vector<double> queries;
  queries.reserve(records.size());
  std::size_t successes = 0;
  double total = 0.0;
  for (const auto& r : records) {
    if (r.success) ++successes;
    queries.push_back(static_cast<double>(r.queries_used));
    total += static_cast<double>(r.queries_used);
  }
  std::sort(queries.begin(), queries.end());
  s.success_rate = static_cast<double>(successes) / static_cast<double>(s.trials);
  s.mean_queries = total / static_cast<double>(s.trials);
  s.median_queries = percentile_nearest_rank(queries, 0.5);
  s.p95_queries = percentile_nearest_rank(queries, 0.95);

  const double info = config.noise.info_bits();
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(2, config.n)));
  const double lglg = std::max(1.0, std::log2(lg));
  const double lgd = std::log2(1.0 / config.delta);
  s.theory_leading = lg / info;
  const double excess = (s.mean_queries - s.theory_leading) * info;
  s.constant_strict = excess / (lglg * std::max(1e-9, lgd));
  s.constant_lenient = excess / (lglg * lglg + lgd);
  return s;
}

void write_trials_csv(std::ostream& os, const ExperimentConfig& config,
                      const std::vector<TrialRecord>& records) {
  os << "trial,seed,n,algo,k,noise,delta,true_index,estimated_index,success,"
        "queries,halt_reason\n";
  const std::string algo = config.noise.is_binary() ? "binary" : "kary";
  const std::string noise_desc = config.noise.description();
  const std::string delta_s = fmt_double(config.delta);
  for (const auto& r : records) {
    os << r.trial_index << ',' << r.seed << ',' << config.n << ',' << algo
       << ',' << config.noise.k() << ',' << noise_desc << ',' << delta_s << ','
       << r.true_index << ',' << r.estimated_index << ','
       << (r.success ? 1 : 0) << ',' << r.queries_used << ','
       << to_string(r.halt) << '\n';
  }
}

void write_trials_csv(const std::string& path, const ExperimentConfig& config,
                      const std::vector<TrialRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_trials_csv(out, config, records);
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_n = false, saw_trials = false, saw_p = false, saw_probs = false;
  std::optional<std::size_t> declared_k;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key or value");
    if (key == "n") {
      cfg.n = parse_config_u64(value, key, line_no);
      saw_n = true;
    } else if (key == "trials") {
      cfg.trials = parse_config_u64(value, key, line_no);
      saw_trials = true;
    } else if (key == "seed") {
      cfg.master_seed = parse_config_u64(value, key, line_no);
    } else if (key == "p") {
      cfg.noise = NoiseModel::binary(parse_config_f64(value, key, line_no));
      saw_p = true;
    } else if (key == "probs") {
      cfg.noise = NoiseModel::kary(parse_prob_list(value, key, line_no));
      saw_probs = true;
    } else if (key == "k") {
      declared_k = parse_config_u64(value, key, line_no);
    } else if (key == "delta") {
      cfg.delta = parse_config_f64(value, key, line_no);
    } else if (key == "eps_par") {
      cfg.eps_par = parse_config_f64(value, key, line_no);
    } else if (key == "l_sur") {
      cfg.l_sur = parse_config_u64(value, key, line_no);
    } else if (key == "gamma") {
      cfg.gamma = parse_config_f64(value, key, line_no);
    } else if (key == "max_queries") {
      cfg.max_queries = parse_config_u64(value, key, line_no);
    } else if (key == "verify_rounds") {
      cfg.verify_rounds = parse_config_u64(value, key, line_no);
    } else if (key == "out") {
      cfg.output_path = value;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }

  if (saw_p && saw_probs)
    throw std::invalid_argument("config: p and probs are mutually exclusive");
  if (!saw_p && !saw_probs)
    throw std::invalid_argument("config: one of p or probs is required");
  if (!saw_n) throw std::invalid_argument("config: n is required");
  if (!saw_trials) throw std::invalid_argument("config: trials is required");
  if (declared_k && *declared_k != cfg.noise.k())
    throw std::invalid_argument("config: k does not match the noise model");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

CoinListOracle::CoinListOracle(std::vector<double> reference_biases,
                               double unknown_bias, std::uint64_t seed)
    : biases_(std::move(reference_biases)), unknown_(unknown_bias), rng_(seed) {
  if (biases_.empty())
    throw std::invalid_argument("CoinListOracle: need at least one reference coin");
  if (unknown_ < 0.0 || unknown_ > 1.0)
    throw std::invalid_argument("CoinListOracle: unknown bias outside [0,1]");
  for (std::size_t i = 0; i < biases_.size(); ++i) {
    if (biases_[i] < 0.0 || biases_[i] > 1.0)
      throw std::invalid_argument("CoinListOracle: reference bias outside [0,1]");
    if (i > 0 && !(biases_[i] > biases_[i - 1]))
      throw std::invalid_argument("CoinListOracle: reference biases must be strictly increasing");
    if (biases_[i] == unknown_)
      throw std::invalid_argument("CoinListOracle: unknown bias equals a reference bias");
  }
}

int CoinListOracle::answer_binary(std::size_t i) {
  if (i < 1 || i > biases_.size())
    throw std::invalid_argument("CoinListOracle: comparison index outside 1..m");
  constexpr std::size_t kMaxFlipsPerComparison = 1000000;
  const double ref = biases_[i - 1];
  std::size_t flips_this_call = 0;
  for (;;) {
    if (flips_this_call >= kMaxFlipsPerComparison)
      throw std::runtime_error("CoinListOracle: comparison did not resolve");
    const bool ref_heads = rng_.next_uniform() < ref;
    const bool unk_heads = rng_.next_uniform() < unknown_;
    flips_ += 2;
    flips_this_call += 2;
    if (ref_heads != unk_heads) {
      ++comparisons_;
      count_query();
      return ref_heads ? 1 : 0;
    }
  }
}

double CoinListOracle::effective_p_at(std::size_t i) const {
  if (i < 1 || i > biases_.size())
    throw std::invalid_argument("CoinListOracle: comparison index outside 1..m");
  return CoinPairOracle::effective_p_for(biases_[i - 1], unknown_);
}

double CoinListOracle::min_effective_p() const {
  double mn = 1.0;
  for (std::size_t i = 1; i <= biases_.size(); ++i)
    mn = std::min(mn, effective_p_at(i));
  return mn;
}

std::size_t CoinListOracle::true_cell() const {
  std::size_t rank = 0;
  for (double b : biases_)
    if (b < unknown_) ++rank;
  return rank + 1;
}

DemoCoinsResult run_demo_coins(const std::vector<double>& reference_biases,
                               double unknown_bias, double delta,
                               std::uint64_t seed) {
  CoinListOracle oracle(reference_biases, unknown_bias, stream_value(seed, 1));

  SearchParams sp;
  sp.n = oracle.domain_size();
  sp.noise = NoiseModel::binary(oracle.min_effective_p());
  sp.delta = delta;

  DemoCoinsResult result;
  result.min_effective_p = oracle.min_effective_p();
  result.outcome = search_position_dependent(
      sp, oracle, [&oracle](std::size_t i) { return oracle.effective_p_at(i); });
  result.true_rank = oracle.true_cell() - 1;
  result.estimated_rank = result.outcome.estimated_index - 1;
  result.success = result.estimated_rank == result.true_rank;
  result.comparisons = oracle.queries_used();
  result.flips = oracle.flips();
  return result;
}

}  // namespace noisy_bisect
