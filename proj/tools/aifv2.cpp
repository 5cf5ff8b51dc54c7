// aifv2: build, apply, verify and benchmark two-tree AIFV-2 codes.
//
// Exit codes: 0 success, 1 property failure, 2 input error, 3 internal error.

#include <CLI11.hpp>

#include <aifv2/codec.hpp>
#include <aifv2/codetree.hpp>
#include <aifv2/distribution.hpp>
#include <aifv2/dp.hpp>
#include <aifv2/errors.hpp>
#include <aifv2/io.hpp>
#include <aifv2/numeric.hpp>
#include <aifv2/optimizer.hpp>
#include <aifv2/random.hpp>
#include <aifv2/rational.hpp>
#include <aifv2/rmq.hpp>
#include <aifv2/signature.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using aifv2::json;
using aifv2::Rat;
using aifv2::Side;
using aifv2::Signature;

constexpr long long kDefaultSeed = 0xA1F2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw aifv2::InputError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw aifv2::InputError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw aifv2::InputError("write to '" + path + "' failed");
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw aifv2::InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

aifv2::FillStrategy strategy_from_name(const std::string& name) {
  if (name == "batched") return aifv2::FillStrategy::batched;
  if (name == "naive") return aifv2::FillStrategy::naive;
  throw aifv2::InputError("unknown strategy '" + name + "' (expected batched or naive)");
}

// ---------------------------------------------------------------------------
// build

struct BuildConfig {
  std::string dist_path;
  std::string out_path;
  std::string report_path;
  std::string dump_tables_prefix;
  std::string epsilon;  // parsed in the selected numeric mode
  std::string strategy = "batched";
  bool exact = false;
  bool timestamps = false;
};

template <class V>
int run_build_mode(const BuildConfig& cfg) {
  auto dist = aifv2::dist_from_json<V>(load_json(cfg.dist_path));

  std::string eps_text = cfg.epsilon;
  if (eps_text.empty()) eps_text = cfg.exact ? "0" : "1/1000000000";
  const V epsilon = aifv2::num_traits<V>::parse(eps_text);
  if (!cfg.exact && !(aifv2::num_traits<V>::from_int(0) < epsilon))
    throw aifv2::InputError("epsilon 0 requires --exact");

  aifv2::OptimizeOptions<V> opts;
  opts.strategy = strategy_from_name(cfg.strategy);
  auto pair = aifv2::optimize<V>(dist, epsilon, opts);

  if (!cfg.out_path.empty())
    write_file(cfg.out_path, aifv2::pair_to_json(pair, dist).dump(2) + "\n");

  if (!cfg.report_path.empty()) {
    auto huff = aifv2::huffman(dist);
    json report = aifv2::report_to_json(pair, dist, huff);
    report["mode"] = cfg.exact ? "exact" : "float";
    if (cfg.timestamps) report["generated_at"] = iso_timestamp();
    write_file(cfg.report_path, report.dump(2) + "\n");
  }

  if (!cfg.dump_tables_prefix.empty()) {
    const aifv2::CostParam<V> C(pair.C);
    for (Side side : {Side::t0, Side::t1}) {
      auto tables = aifv2::DpTables<V>::fill(side, dist, C, opts.strategy);
      std::ostringstream csv;
      aifv2::dump_csv(tables, csv);
      const char* suffix = side == Side::t0 ? ".side0.csv" : ".side1.csv";
      write_file(cfg.dump_tables_prefix + suffix, csv.str());
    }
  }

  std::cout << "l_avg " << aifv2::num_traits<V>::to_string(pair.l_avg) << " after "
            << pair.iterations << " iterations\n";
  return 0;
}

int run_build(const BuildConfig& cfg) {
  return cfg.exact ? run_build_mode<Rat>(cfg) : run_build_mode<double>(cfg);
}

// ---------------------------------------------------------------------------
// encode / decode
//
// If every symbol label is a single character the data file is a raw
// character stream (every byte, including newlines, must be a symbol);
// otherwise it is read as whitespace-separated labels and decoded output puts
// one label per line.

struct CodecConfig {
  std::string pair_path;
  std::string input_path;
  std::string out_path;
};

struct LoadedCodec {
  std::vector<std::string> labels;  // sorted symbol order
  aifv2::CodeTree t0;
  aifv2::CodeTree t1;
  aifv2::EncoderTables tables;
};

LoadedCodec load_codec(const std::string& pair_path) {
  json j = load_json(pair_path);
  const bool exact = j.is_object() && j.value("mode", "exact") == "exact";
  if (exact) {
    auto loaded = aifv2::pair_from_json<Rat>(j);
    return LoadedCodec{loaded.dist.symbols(), std::move(loaded.pair.t0),
                       std::move(loaded.pair.t1),
                       aifv2::EncoderTables::from_pair(loaded.pair.f0, loaded.pair.f1)};
  }
  auto loaded = aifv2::pair_from_json<double>(j);
  return LoadedCodec{loaded.dist.symbols(), std::move(loaded.pair.t0),
                     std::move(loaded.pair.t1),
                     aifv2::EncoderTables::from_pair(loaded.pair.f0, loaded.pair.f1)};
}

bool single_char_alphabet(const std::vector<std::string>& labels) {
  return std::all_of(labels.begin(), labels.end(),
                     [](const std::string& s) { return s.size() == 1; });
}

int label_index(const std::vector<std::string>& labels, const std::string& s) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == s) return static_cast<int>(i);
  return -1;
}

std::vector<int> symbols_from_text(const std::vector<std::string>& labels,
                                   const std::string& text) {
  std::vector<int> out;
  if (single_char_alphabet(labels)) {
    out.reserve(text.size());
    for (char ch : text) {
      int idx = label_index(labels, std::string(1, ch));
      if (idx < 0)
        throw aifv2::InputError(std::string("input byte '") +
                                (std::isprint(static_cast<unsigned char>(ch))
                                     ? std::string(1, ch)
                                     : "\\x" + std::to_string(static_cast<unsigned char>(ch))) +
                                "' is not a symbol of this code");
      out.push_back(idx);
    }
    return out;
  }
  std::istringstream iss(text);
  std::string tok;
  while (iss >> tok) {
    int idx = label_index(labels, tok);
    if (idx < 0)
      throw aifv2::InputError("input token '" + tok + "' is not a symbol of this code");
    out.push_back(idx);
  }
  return out;
}

std::string text_from_symbols(const std::vector<std::string>& labels,
                              const std::vector<int>& symbols) {
  std::string out;
  const bool chars = single_char_alphabet(labels);
  for (int s : symbols) {
    out += labels.at(s);
    if (!chars) out += '\n';
  }
  return out;
}

int run_encode(const CodecConfig& cfg) {
  LoadedCodec codec = load_codec(cfg.pair_path);
  std::vector<int> symbols = symbols_from_text(codec.labels, read_file(cfg.input_path));
  aifv2::BitStream stream = aifv2::encode(codec.tables, symbols);
  auto bytes = aifv2::write_container(static_cast<std::uint32_t>(codec.labels.size()),
                                      symbols.size(), stream);
  write_file(cfg.out_path, std::string(bytes.begin(), bytes.end()));
  std::cout << "encoded " << symbols.size() << " symbols into " << stream.bit_len
            << " bits\n";
  return 0;
}

int run_decode(const CodecConfig& cfg) {
  LoadedCodec codec = load_codec(cfg.pair_path);
  std::string raw = read_file(cfg.input_path);
  auto container = aifv2::read_container(
      std::vector<std::uint8_t>(raw.begin(), raw.end()));
  if (container.alphabet_size != codec.labels.size())
    throw aifv2::InputError(
        "container alphabet size " + std::to_string(container.alphabet_size) +
        " does not match this code's " + std::to_string(codec.labels.size()));
  std::vector<int> symbols =
      aifv2::decode(codec.t0, codec.t1, container.stream, container.symbol_count);
  write_file(cfg.out_path, text_from_symbols(codec.labels, symbols));
  std::cout << "decoded " << symbols.size() << " symbols\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyConfig {
  int n_min = 3;
  int n_max = 8;
  int trials = 5;
  long long seed = kDefaultSeed;
  bool mutate = false;
  bool timestamps = false;
  std::string out_path;
};

struct TrialOutcome {
  // Parallel to kPropertyNames.
  std::array<int, 4> failures{};
  std::array<std::string, 4> first_failure{};
  bool mutation_detected = false;

  void fail(int prop, const std::string& msg) {
    if (failures[prop]++ == 0) first_failure[prop] = msg;
  }
};

constexpr std::array<const char*, 4> kPropertyNames{
    "dp_strategy_equivalence", "pair_optimality", "rmq_equivalence",
    "codec_roundtrip"};

void check_dp_equivalence(aifv2::Rng& rng, const VerifyConfig& cfg, int trial,
                          TrialOutcome& out) {
  static const std::array<Rat, 5> kGrid{Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
  const int n_max = std::min(cfg.n_max, 12);
  for (int n = std::max(3, cfg.n_min); n <= n_max; ++n) {
    auto dist = aifv2::random_distribution_exact(rng, n);
    const aifv2::CostParam<Rat> C(kGrid[trial % kGrid.size()]);
    for (Side side : {Side::t0, Side::t1}) {
      auto a = aifv2::DpTables<Rat>::fill(side, dist, C, aifv2::FillStrategy::naive);
      auto b = aifv2::DpTables<Rat>::fill(side, dist, C, aifv2::FillStrategy::batched);
      for (int m = 0; m <= n; ++m)
        for (int p = 0; p <= n; ++p)
          for (int z = 0; z <= m; ++z) {
            const Signature sig{m, p, z};
            const bool fa = a.has_finite(sig), fb = b.has_finite(sig);
            if (fa != fb || (fa && !(a.opt(sig) == b.opt(sig))) ||
                a.pred_of(sig) != b.pred_of(sig)) {
              out.fail(0, "tables differ at n=" + std::to_string(n) + " side " +
                              std::to_string(aifv2::side_index(side)) + " " +
                              sig.to_string());
              return;
            }
          }
    }
  }
}

void check_pair_optimality(aifv2::Rng& rng, const VerifyConfig& cfg, TrialOutcome& out) {
  const int hi = std::min(cfg.n_max, 5);
  for (int n = std::max(3, cfg.n_min); n <= hi; ++n) {
    auto dist = aifv2::random_distribution_exact(rng, n);
    auto pair = aifv2::optimize<Rat>(dist, Rat(0));
    auto bf = aifv2::brute_force_pair<Rat>(dist);
    if (!(pair.l_avg == bf.cost)) {
      out.fail(1, "optimize " + pair.l_avg.to_string() + " != brute force " +
                      bf.cost.to_string() + " at n=" + std::to_string(n));
      return;
    }
  }
}

void check_rmq(aifv2::Rng& rng, bool mutate_this_trial, TrialOutcome& out) {
  for (int rep = 0; rep < 10; ++rep) {
    const int rows = 2 + static_cast<int>(rng.uniform_int(0, 18));
    const int cols = 2 + static_cast<int>(rng.uniform_int(0, 18));
    std::vector<double> cells(static_cast<std::size_t>(rows) * cols);
    for (double& v : cells) {
      // Clustered small integers provoke ties; a fifth of cells are excluded.
      v = rng.uniform() < 0.2 ? aifv2::num_traits<double>::infinity()
                              : static_cast<double>(rng.uniform_int(0, 6));
    }
    aifv2::MatrixView<double> view{cells.data(), rows, cols};
    aifv2::RestrictedRmqTables<double> tables(view);

    // The reference scans run over `reference`; in fault-injection mode one
    // cell of the first matrix is lowered so the comparison must trip.
    std::vector<double> reference = cells;
    const bool mutated = mutate_this_trial && rep == 0;
    if (mutated) reference[(static_cast<std::size_t>(rows / 2)) * cols + cols / 2] = -1.0;

    bool mismatch = false;
    for (int a = 0; a < rows && !mismatch; ++a) {
      for (int b = 0; b < cols && !mismatch; ++b) {
        aifv2::MinCell<double> want{aifv2::num_traits<double>::infinity(), -1, -1};
        for (int r = a; r < rows; ++r) {
          for (int c = 0; c <= b; ++c) {
            const double v = reference[static_cast<std::size_t>(r) * cols + c];
            if (!std::isinf(v) && v < want.value) want = {v, r, c};
          }
        }
        const auto& got = tables.rrmq(a, b);
        mismatch = got.row != want.row || got.col != want.col ||
                   (want.row >= 0 && got.value != want.value);
        if (!mismatch) {
          // Column suffix query against an independent scan.
          aifv2::MinCell<double> cw{aifv2::num_traits<double>::infinity(), -1, -1};
          for (int r = a; r < rows; ++r) {
            const double v = reference[static_cast<std::size_t>(r) * cols + b];
            if (!std::isinf(v) && v < cw.value) cw = {v, r, b};
          }
          const auto& cg = tables.rcq(a, b);
          mismatch = cg.row != cw.row || (cw.row >= 0 && cg.value != cw.value);
        }
      }
    }
    if (mutated) {
      out.mutation_detected = mismatch;
      if (!mismatch) out.fail(2, "injected fault was not detected");
    } else if (mismatch) {
      out.fail(2, "query tables disagree with direct scans");
      return;
    }
  }
}

void check_codec(aifv2::Rng& rng, const VerifyConfig& cfg, TrialOutcome& out) {
  const int hi = std::min(cfg.n_max, 8);
  const int n = std::max(3, cfg.n_min) +
                static_cast<int>(rng.uniform_int(0, std::max(0, hi - std::max(3, cfg.n_min))));
  auto dist = aifv2::random_distribution_exact(rng, n);
  auto pair = aifv2::optimize<Rat>(dist, Rat(0));
  auto tables = aifv2::EncoderTables::from_pair(pair.f0, pair.f1);
  auto symbols = aifv2::sample_symbols(rng, dist, 2000);
  auto stream = aifv2::encode(tables, symbols);
  aifv2::DecodeStats stats;
  auto back = aifv2::decode(pair.t0, pair.t1, stream, symbols.size(), &stats);
  if (back != symbols) {
    out.fail(3, "round trip mismatch at n=" + std::to_string(n));
    return;
  }
  if (stats.max_lookahead > 2)
    out.fail(3, "decoder looked ahead " + std::to_string(stats.max_lookahead) + " bits");
}

TrialOutcome run_trial(const VerifyConfig& cfg, int trial) {
  TrialOutcome out;
  try {
    aifv2::Rng rng(static_cast<std::uint64_t>(cfg.seed) * 1000003u +
                   static_cast<std::uint64_t>(trial));
    check_dp_equivalence(rng, cfg, trial, out);
    check_pair_optimality(rng, cfg, out);
    check_rmq(rng, cfg.mutate && trial == 0, out);
    check_codec(rng, cfg, out);
  } catch (const std::exception& e) {
    for (int p = 0; p < 4; ++p) out.fail(p, std::string("exception: ") + e.what());
  }
  return out;
}

int verify_threads() {
  if (const char* env = std::getenv("AIFV2_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_verify(const VerifyConfig& cfg) {
  if (cfg.n_min < 3 || cfg.n_max < cfg.n_min)
    throw aifv2::InputError("verify: need 3 <= n-min <= n-max");
  if (cfg.trials < 1) throw aifv2::InputError("verify: need at least one trial");

  std::vector<TrialOutcome> outcomes(cfg.trials);
  const int threads = std::min(verify_threads(), cfg.trials);
  if (threads <= 1) {
    for (int t = 0; t < cfg.trials; ++t) outcomes[t] = run_trial(cfg, t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < cfg.trials; t += threads) outcomes[t] = run_trial(cfg, t);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Merge in trial order so the report is independent of the thread count.
  json props = json::array();
  bool all_pass = true;
  bool mutation_detected = false;
  for (int p = 0; p < 4; ++p) {
    int failures = 0;
    std::string first;
    for (const TrialOutcome& o : outcomes) {
      failures += o.failures[p];
      if (first.empty()) first = o.first_failure[p];
    }
    json pj;
    pj["name"] = kPropertyNames[p];
    pj["trials"] = cfg.trials;
    pj["failures"] = failures;
    pj["pass"] = failures == 0;
    if (!first.empty()) pj["first_failure"] = first;
    props.push_back(pj);
    all_pass = all_pass && failures == 0;
  }
  for (const TrialOutcome& o : outcomes) mutation_detected |= o.mutation_detected;

  json report;
  report["seed"] = cfg.seed;
  report["trials"] = cfg.trials;
  report["n_min"] = cfg.n_min;
  report["n_max"] = cfg.n_max;
  report["properties"] = props;
  if (cfg.mutate) report["mutation_detected"] = mutation_detected;
  report["pass"] = all_pass;
  if (cfg.timestamps) report["generated_at"] = iso_timestamp();

  const std::string text = report.dump(2) + "\n";
  if (cfg.out_path.empty())
    std::cout << text;
  else
    write_file(cfg.out_path, text);

  if (cfg.mutate && !mutation_detected) return 1;
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bench

struct BenchConfig {
  int n_min = 16;
  int n_max = 48;
  int n_step = 16;
  int repeats = 3;
  long long seed = kDefaultSeed;
  std::string strategies = "batched,naive";
  std::string out_path;
};

int run_bench(const BenchConfig& cfg) {
  if (cfg.n_min < 3 || cfg.n_max < cfg.n_min || cfg.n_step < 1)
    throw aifv2::InputError("bench: need 3 <= n-min <= n-max and n-step >= 1");
  if (cfg.repeats < 1) throw aifv2::InputError("bench: need at least one repeat");

  std::vector<std::string> names;
  {
    std::istringstream iss(cfg.strategies);
    std::string tok;
    while (std::getline(iss, tok, ',')) names.push_back(tok);
  }
  std::vector<aifv2::FillStrategy> strategies;
  for (const std::string& name : names) strategies.push_back(strategy_from_name(name));
  if (strategies.empty()) throw aifv2::InputError("bench: no strategies given");

  std::ostringstream csv;
  csv << "n,strategy,millis\n";
  const aifv2::CostParam<double> C(0.5);
  for (int n = cfg.n_min; n <= cfg.n_max; n += cfg.n_step) {
    aifv2::Rng rng(static_cast<std::uint64_t>(cfg.seed) + static_cast<std::uint64_t>(n));
    auto dist = aifv2::random_distribution_float(rng, n);
    for (std::size_t si = 0; si < strategies.size(); ++si) {
      double best = 0.0;
      for (int rep = 0; rep < cfg.repeats; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        auto tables = aifv2::DpTables<double>::fill(Side::t0, dist, C, strategies[si]);
        const auto t1 = std::chrono::steady_clock::now();
        // The table is consumed so the fill cannot be elided.
        if (!tables.has_finite(Signature{n, 0, 0}))
          throw aifv2::InternalError("bench: fill produced no finished tree");
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (rep == 0 || ms < best) best = ms;
      }
      csv << n << ',' << names[si] << ',';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", best);
      csv << buf << '\n';
    }
  }

  if (cfg.out_path.empty())
    std::cout << csv.str();
  else
    write_file(cfg.out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-tree AIFV-2 coding: optimal code construction, stream codec, "
               "self-verification, and DP benchmarks"};
  app.require_subcommand(1);

  BuildConfig build_cfg;
  CLI::App* build = app.add_subcommand(
      "build", "Construct the optimal code pair for a source distribution");
  build->add_option("--dist", build_cfg.dist_path, "distribution JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--out", build_cfg.out_path, "write the code pair JSON here");
  build->add_option("--report", build_cfg.report_path, "write the optimizer report here");
  build->add_option("--dump-tables", build_cfg.dump_tables_prefix,
                    "write final DP tables to PREFIX.side0.csv / PREFIX.side1.csv");
  build->add_option("--epsilon", build_cfg.epsilon,
                    "convergence threshold (default: 0 exact, 1e-9 float)");
  build->add_option("--strategy", build_cfg.strategy, "batched (default) or naive")
      ->check(CLI::IsMember({"batched", "naive"}));
  build->add_flag("--exact", build_cfg.exact, "exact rational arithmetic");
  build->add_flag("--timestamps", build_cfg.timestamps, "timestamp the report");

  CodecConfig encode_cfg;
  CLI::App* encode = app.add_subcommand("encode", "Encode a symbol file to a container");
  encode->add_option("--pair", encode_cfg.pair_path, "code pair JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  encode->add_option("--out", encode_cfg.out_path, "container output path")->required();
  encode->add_option("input", encode_cfg.input_path, "symbol data file")
      ->required()
      ->check(CLI::ExistingFile);

  CodecConfig decode_cfg;
  CLI::App* decode = app.add_subcommand("decode", "Decode a container to a symbol file");
  decode->add_option("--pair", decode_cfg.pair_path, "code pair JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  decode->add_option("--out", decode_cfg.out_path, "symbol output path")->required();
  decode->add_option("input", decode_cfg.input_path, "container file")
      ->required()
      ->check(CLI::ExistingFile);

  VerifyConfig verify_cfg;
  CLI::App* verify = app.add_subcommand(
      "verify", "Cross-check fast paths against reference oracles");
  verify->add_option("--n-min", verify_cfg.n_min, "smallest alphabet (default 3)");
  verify->add_option("--n-max", verify_cfg.n_max, "largest alphabet (default 8)");
  verify->add_option("--trials", verify_cfg.trials, "independent trials (default 5)");
  verify->add_option("--seed", verify_cfg.seed, "random seed");
  verify->add_flag("--mutate", verify_cfg.mutate,
                   "inject a fault to prove the harness detects mismatches");
  verify->add_flag("--timestamps", verify_cfg.timestamps, "timestamp the report");
  verify->add_option("--out", verify_cfg.out_path, "report path (default: stdout)");

  BenchConfig bench_cfg;
  CLI::App* bench = app.add_subcommand(
      "bench", "Time one side-0 table fill per size and strategy (CSV)");
  bench->add_option("--n-min", bench_cfg.n_min, "sweep start (default 16)");
  bench->add_option("--n-max", bench_cfg.n_max, "sweep end (default 48)");
  bench->add_option("--n-step", bench_cfg.n_step, "sweep step (default 16)");
  bench->add_option("--repeats", bench_cfg.repeats, "timings per point, minimum kept");
  bench->add_option("--seed", bench_cfg.seed, "random seed");
  bench->add_option("--strategies", bench_cfg.strategies,
                    "comma list of batched,naive");
  bench->add_option("--out", bench_cfg.out_path, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return run_build(build_cfg);
    if (encode->parsed()) return run_encode(encode_cfg);
    if (decode->parsed()) return run_decode(decode_cfg);
    if (verify->parsed()) return run_verify(verify_cfg);
    if (bench->parsed()) return run_bench(bench_cfg);
    throw aifv2::InternalError("no subcommand dispatched");
  } catch (const aifv2::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const aifv2::CorruptStreamError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const aifv2::Error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
