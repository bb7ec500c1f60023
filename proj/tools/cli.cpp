#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "permpat/avoiders.hpp"
#include "permpat/counting.hpp"
#include "permpat/oracle.hpp"
#include "permpat/pattern_set.hpp"
#include "permpat/sequences.hpp"
#include "permpat/vincular.hpp"

namespace permpat::cli {

namespace {

constexpr int kOracleLimit = 8;

class OracleMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Usage : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void for_each_perm(int m, const std::function<void(const PackedPerm&)>& fn) {
  std::vector<int> letters(static_cast<std::size_t>(m));
  std::iota(letters.begin(), letters.end(), 1);
  do {
    fn(PackedPerm::from_letters(letters));
  } while (std::next_permutation(letters.begin(), letters.end()));
}

void check_length(int n) {
  if (n < 1 || n > kMaxLength) {
    throw Usage("--max-n must lie in 1.." + std::to_string(kMaxLength) + " for this build");
  }
}

int oracle_top(int n, std::ostream& err) {
  if (n > kOracleLimit) err << "oracle-check: comparing lengths 1.." << kOracleLimit << " only\n";
  return std::min(n, kOracleLimit);
}

void expect_level(const CountTally& got, int m, const CountTally& want, const std::string& what) {
  if (got.level(m) != want.level(m)) {
    throw OracleMismatch("oracle-check failed: " + what + " histogram differs from the oracle at n=" +
                         std::to_string(m));
  }
}

void write_histogram(std::ostream& out, const CountTally& tally, int n, bool all_lengths) {
  out << "length,hits,multiplicity\n";
  for (const auto& row : tally.rows()) {
    if (row.length < 1 || (!all_lengths && row.length != n)) continue;
    out << row.length << ',' << row.hits << ',' << row.multiplicity << '\n';
  }
}

// --- avoid -----------------------------------------------------------------

struct AvoidArgs {
  std::string patterns;
  int max_n = 0;
  std::string engine = "fast";
  bool enumerate = false;
  bool oracle_check = false;
  int threads = 1;
};

void cmd_avoid(const AvoidArgs& a, std::ostream& out, std::ostream& err) {
  const PatternSet patterns = PatternSet::parse(a.patterns);
  check_length(a.max_n);
  const int n = a.max_n;

  std::vector<std::uint64_t> counts;
  std::vector<std::vector<PackedPerm>> lists;
  if (a.engine == "basic") {
    lists = build_avoiders_basic(patterns, n);
  } else if (a.engine == "fast") {
    if (a.enumerate || a.oracle_check) {
      lists.resize(static_cast<std::size_t>(n));
      enumerate_avoiders_fast(patterns, n, [&](const PackedPerm& tau, const ExtensionMap&) {
        lists[static_cast<std::size_t>(tau.size()) - 1].push_back(tau);
      });
      for (auto& level : lists) std::sort(level.begin(), level.end(), lex_less);
    } else {
      counts = count_avoiders_fast(patterns, n);
    }
  } else {
    if (a.enumerate) throw Usage("--enumerate is not available with --engine lowmem");
    counts = count_avoiders_lowmem(patterns, n, nullptr, a.threads);
  }
  if (counts.empty()) {
    for (const auto& level : lists) counts.push_back(level.size());
  }

  if (a.oracle_check) {
    const int top = oracle_top(n, err);
    for (int m = 1; m <= top; ++m) {
      std::vector<PackedPerm> truth;
      for_each_perm(m, [&](const PackedPerm& tau) {
        if (!oracle_contains(tau, patterns)) truth.push_back(tau);
      });
      const auto idx = static_cast<std::size_t>(m) - 1;
      if (counts[idx] != truth.size() || (!lists.empty() && lists[idx] != truth)) {
        throw OracleMismatch("oracle-check failed: " + a.engine + " engine finds " +
                             std::to_string(counts[idx]) + " avoiders of length " + std::to_string(m) +
                             ", the oracle " + std::to_string(truth.size()));
      }
    }
  }

  for (int m = 1; m <= n; ++m) {
    const auto idx = static_cast<std::size_t>(m) - 1;
    out << m << ',' << counts[idx] << '\n';
    if (a.enumerate) {
      for (const PackedPerm& tau : lists[idx]) out << to_string(tau) << '\n';
    }
  }
}

// --- count -----------------------------------------------------------------

struct CountArgs {
  std::string patterns;
  int max_n = 0;
  std::string engine = "auto";
  bool histogram = false;
  bool oracle_check = false;
  int threads = 1;
};

void cmd_count(const CountArgs& a, std::ostream& out, std::ostream& err) {
  const PatternSet patterns = PatternSet::parse(a.patterns);
  check_length(a.max_n);
  const int n = a.max_n;
  std::string engine = a.engine;
  if (engine == "auto") engine = patterns.size() == 1 ? "single-fast" : "standard";

  CountTally tally;
  if (engine == "standard") {
    tally = count_all(patterns, n);
  } else if (engine == "single-fast") {
    if (patterns.size() != 1) throw Usage("--engine single-fast takes exactly one pattern");
    tally = count_single_fast(patterns.patterns()[0], n);
  } else {
    tally = count_all_lowmem(patterns, n, nullptr, a.threads);
  }

  if (a.oracle_check) {
    const int top = oracle_top(n, err);
    CountTally truth(top);
    for (int m = 1; m <= top; ++m) {
      for_each_perm(m, [&](const PackedPerm& tau) { truth.add(m, oracle_count_hits(tau, patterns)); });
      expect_level(tally, m, truth, engine);
    }
  }
  write_histogram(out, tally, n, a.histogram);
}

// --- vincular-count ----------------------------------------------------------

struct VincularArgs {
  std::string pattern;
  std::string adjacencies;
  std::string dashed;
  int max_n = 0;
  bool histogram = false;
  bool oracle_check = false;
};

void cmd_vincular(const VincularArgs& a, std::ostream& out, std::ostream& err) {
  check_length(a.max_n);
  const int n = a.max_n;
  std::optional<VincularPattern> vincular;
  std::optional<CovincularPattern> covincular;
  if (!a.dashed.empty()) {
    if (!a.pattern.empty()) throw Usage("give either --pattern or --vincular, not both");
    vincular = VincularPattern::parse_dashed(a.dashed);
    covincular = to_covincular(*vincular);
  } else {
    if (a.pattern.empty()) throw Usage("--pattern or --vincular is required");
    covincular = CovincularPattern::parse(a.pattern, a.adjacencies);
  }
  const CountTally tally = covincular_count_all(*covincular, n);

  if (a.oracle_check) {
    const int top = oracle_top(n, err);
    CountTally truth(top);
    for (int m = 1; m <= top; ++m) {
      for_each_perm(m, [&](const PackedPerm& tau) {
        truth.add(m, vincular ? oracle_count_vincular(tau, vincular->pattern(), vincular->mask())
                              : oracle_count_covincular(tau, covincular->pattern(), covincular->mask()));
      });
      expect_level(tally, m, truth, vincular ? "vincular" : "covincular");
    }
  }
  write_histogram(out, tally, n, a.histogram);
}

// --- mine --------------------------------------------------------------------

struct MineArgs {
  MineOptions options;
  std::string oeis;
};

void cmd_mine(const MineArgs& a, std::ostream& out) {
  std::optional<OeisDb> db;
  if (!a.oeis.empty()) db = OeisDb::load(a.oeis);
  write_mine_csv(out, mine(a.options, db ? &*db : nullptr));
}

// --- bench -------------------------------------------------------------------

struct BenchArgs {
  std::string algos;
  std::string patterns;
  int min_n = 0;
  int max_n = 0;
  int threads = 1;
};

std::uint64_t sum(const std::vector<std::uint64_t>& xs) {
  return std::accumulate(xs.begin(), xs.end(), std::uint64_t{0});
}

// Generate-and-check: extend each avoider by every insertion and ask the
// oracle about each new child.
std::uint64_t bench_oracle_avoid(const PatternSet& patterns, int n) {
  OracleStats stats;
  std::vector<PackedPerm> level{PackedPerm{}};
  for (int m = 1; m <= n; ++m) {
    WordSet seen;
    std::vector<PackedPerm> next;
    for (const PackedPerm& parent : level) {
      for (int i = 1; i <= m; ++i) {
        const PackedPerm tau = insert_up(parent, i);
        if (!seen.insert(tau.word()).second) continue;
        if (!oracle_contains(tau, patterns, &stats)) next.push_back(tau);
      }
    }
    level = std::move(next);
  }
  return stats.subsequences;
}

std::uint64_t bench_oracle_count(const PatternSet& patterns, int n) {
  OracleStats stats;
  for (int m = 1; m <= n; ++m) {
    for_each_perm(m, [&](const PackedPerm& tau) { oracle_count_hits(tau, patterns, &stats); });
  }
  return stats.subsequences;
}

std::uint64_t bench_one(const std::string& algo, const PatternSet& patterns, int n, int threads) {
  std::uint64_t work = 0;
  if (algo == "basic") {
    for (const auto& level : build_avoiders_basic(patterns, n)) work += level.size();
  } else if (algo == "fast") {
    work = sum(count_avoiders_fast(patterns, n));
  } else if (algo == "lowmem") {
    work = sum(count_avoiders_lowmem(patterns, n, nullptr, threads));
  } else if (algo == "oracle") {
    work = bench_oracle_avoid(patterns, n);
  } else if (algo == "count") {
    count_all(patterns, n, true, &work);
  } else if (algo == "count-single") {
    count_single_fast(patterns.patterns()[0], n, &work);
  } else if (algo == "count-lowmem") {
    const CountTally tally = count_all_lowmem(patterns, n, nullptr, threads);
    for (int m = 1; m <= n; ++m) work += tally.permutations(m);
  } else {
    work = bench_oracle_count(patterns, n);
  }
  return work;
}

void cmd_bench(const BenchArgs& a, std::ostream& out) {
  static const std::vector<std::string> known = {"basic", "fast", "lowmem", "oracle",
                                                 "count", "count-single", "count-lowmem", "oracle-count"};
  const PatternSet patterns = PatternSet::parse(a.patterns);
  check_length(a.max_n);
  const int lo = a.min_n == 0 ? a.max_n : a.min_n;
  if (lo < 1 || lo > a.max_n) throw Usage("--min-n must lie in 1..max-n");

  std::vector<std::string> algos;
  std::stringstream list(a.algos);
  for (std::string item; std::getline(list, item, ',');) {
    if (item.empty()) continue;
    if (std::find(known.begin(), known.end(), item) == known.end()) throw Usage("unknown algorithm '" + item + "'");
    if (item == "count-single" && patterns.size() != 1) throw Usage("count-single takes exactly one pattern");
    algos.push_back(item);
  }
  if (algos.empty()) throw Usage("--algos is empty");

  out << "algorithm,n,seconds,work\n";
  for (int n = lo; n <= a.max_n; ++n) {
    for (const std::string& algo : algos) {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t work = bench_one(algo, patterns, n, a.threads);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      char seconds[32];
      std::snprintf(seconds, sizeof seconds, "%.6f", elapsed.count());
      out << algo << ',' << n << ',' << seconds << ',' << work << '\n';
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permutation pattern avoidance and hit counting"};
  app.name("permpat");
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write results to this file instead of stdout");

  const auto positive = CLI::PositiveNumber;

  AvoidArgs avoid;
  auto* avoid_cmd = app.add_subcommand("avoid", "Count (or list) the avoiders of a pattern set");
  avoid_cmd->add_option("--patterns", avoid.patterns, "Patterns separated by spaces or commas")->required();
  avoid_cmd->add_option("--max-n", avoid.max_n, "Largest length")->required();
  avoid_cmd->add_option("--engine", avoid.engine)->check(CLI::IsMember({"basic", "fast", "lowmem"}))->capture_default_str();
  avoid_cmd->add_flag("--enumerate", avoid.enumerate, "List the avoiders of each length in lex order");
  avoid_cmd->add_flag("--oracle-check", avoid.oracle_check, "Compare lengths up to 8 with brute force");
  avoid_cmd->add_option("--threads", avoid.threads)->check(positive)->capture_default_str();

  CountArgs count;
  auto* count_cmd = app.add_subcommand("count", "Histogram of hit counts over S_n");
  count_cmd->add_option("--patterns", count.patterns, "Patterns separated by spaces or commas")->required();
  count_cmd->add_option("--max-n", count.max_n, "Largest length")->required();
  count_cmd->add_option("--engine", count.engine)
      ->check(CLI::IsMember({"auto", "standard", "single-fast", "lowmem"}))
      ->capture_default_str();
  count_cmd->add_flag("--histogram", count.histogram, "Rows for every length, not just max-n");
  count_cmd->add_flag("--oracle-check", count.oracle_check, "Compare lengths up to 8 with brute force");
  count_cmd->add_option("--threads", count.threads)->check(positive)->capture_default_str();

  VincularArgs vinc;
  auto* vinc_cmd = app.add_subcommand("vincular-count", "Histogram of covincular or vincular hits");
  vinc_cmd->add_option("--pattern", vinc.pattern, "Covincular pattern letters");
  vinc_cmd->add_option("--adjacencies", vinc.adjacencies, "Value adjacencies, comma list in 0..k");
  vinc_cmd->add_option("--vincular", vinc.dashed, "Vincular pattern in dash notation, e.g. [2-31");
  vinc_cmd->add_option("--max-n", vinc.max_n, "Largest length")->required();
  vinc_cmd->add_flag("--histogram", vinc.histogram, "Rows for every length, not just max-n");
  vinc_cmd->add_flag("--oracle-check", vinc.oracle_check, "Compare lengths up to 8 with brute force");

  MineArgs mine_args;
  auto* mine_cmd = app.add_subcommand("mine", "Avoider sequences of every symmetry class of pattern sets");
  mine_cmd->add_option("--pattern-length", mine_args.options.pattern_length)->check(CLI::Range(1, 4))->capture_default_str();
  mine_cmd->add_option("--min-set-size", mine_args.options.min_set_size)->capture_default_str();
  mine_cmd->add_option("--max-set-size", mine_args.options.max_set_size, "-1 for no limit")->capture_default_str();
  mine_cmd->add_option("--max-n", mine_args.options.max_n)->capture_default_str();
  mine_cmd->add_option("--oeis", mine_args.oeis, "OEIS stripped file, plain or gzip");
  mine_cmd->add_option("--min-overlap", mine_args.options.match.min_overlap)->check(positive)->capture_default_str();
  mine_cmd->add_option("--max-shift", mine_args.options.match.max_shift)->check(CLI::NonNegativeNumber)->capture_default_str();
  mine_cmd->add_option("--threads", mine_args.options.threads)->check(positive)->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Wall time and work counters per engine");
  bench_cmd->add_option("--algos", bench.algos,
                        "Comma list of basic, fast, lowmem, oracle, count, count-single, count-lowmem, oracle-count")
      ->required();
  bench_cmd->add_option("--patterns", bench.patterns)->required();
  bench_cmd->add_option("--max-n", bench.max_n)->required();
  bench_cmd->add_option("--min-n", bench.min_n, "First length (default: max-n)");
  bench_cmd->add_option("--threads", bench.threads)->check(positive)->capture_default_str();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("permpat");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  std::ostringstream buffer;
  try {
    if (*avoid_cmd) cmd_avoid(avoid, buffer, err);
    if (*count_cmd) cmd_count(count, buffer, err);
    if (*vinc_cmd) cmd_vincular(vinc, buffer, err);
    if (*mine_cmd) cmd_mine(mine_args, buffer);
    if (*bench_cmd) cmd_bench(bench, buffer);
  } catch (const OracleMismatch& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ClosureViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }

  if (out_path.empty()) {
    out << buffer.str();
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  file << buffer.str();
  if (!file) {
    err << "error: cannot write " << out_path << '\n';
    return 1;
  }
  return 0;
}

}  // namespace permpat::cli
