#include <doctest.h>

#include <random>

#include "permpat/counting.hpp"
#include "permpat/oracle.hpp"
#include "support.hpp"

using namespace permpat;

namespace {

CountTally oracle_tally(const PatternSet& set, int n) {
  CountTally out(n);
  for (int m = 1; m <= n; ++m) {
    for (const auto& tau : testsupport::all_perms(m)) out.add(m, oracle_count_hits(tau, set));
  }
  return out;
}

HitProfile naive_profile(const PackedPerm& tau, const PatternSet& set) {
  const auto pats = testsupport::letters_of(set);
  HitProfile out;
  out.values.assign(static_cast<std::size_t>(set.max_length()) + 2, 0);
  for (int i = 0; i <= std::min(set.max_length(), tau.size()); ++i) {
    out.values[static_cast<std::size_t>(i)] = testsupport::naive_hits(tau.letters(), pats, i);
  }
  return out;
}

auto naive_lookup(const PatternSet& set) {
  const auto pats = testsupport::letters_of(set);
  return [pats](const PackedPerm& shorter, int i) { return testsupport::naive_hits(shorter.letters(), pats, i); };
}

}  // namespace

TEST_CASE("profile of the identity under 123") {
  const PatternSet set = PatternSet::parse("123");
  const HitProfile p = count_profile(parse_perm("1234"), set, naive_lookup(set));
  CHECK(p.values == std::vector<std::uint64_t>{4, 3, 2, 1, 0});
  CHECK(p.hits() == 4);
  CHECK(p[7] == 0);
}

TEST_CASE("the recurrence reproduces hits through the top letters") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const PatternSet set = testsupport::random_subset(rng, 1 + trial % 4, 0.3);
    const PackedPerm tau = testsupport::random_perm(rng, 1 + static_cast<int>(rng() % 8));
    REQUIRE(count_profile(tau, set, naive_lookup(set)) == naive_profile(tau, set));
  }
}

TEST_CASE("counting engines agree with oracle histograms") {
  std::mt19937_64 rng(42);
  std::vector<PatternSet> sets = {PatternSet::parse("123"), PatternSet::parse("2413"), PatternSet::parse("12"),
                                  PatternSet::parse("1"), PatternSet::parse("21 132")};
  for (int i = 0; i < 16; ++i) sets.push_back(testsupport::random_subset(rng, 2 + i % 3, 0.2));
  for (const PatternSet& set : sets) {
    CAPTURE(set.to_string());
    const int n = 7;
    const CountTally truth = oracle_tally(set, n);
    std::uint64_t pruned = 0;
    std::uint64_t full = 0;
    CHECK(count_all(set, n, true, &pruned) == truth);
    CHECK(count_all(set, n, false, &full) == truth);
    CHECK(pruned <= full);
    CHECK(count_all_lowmem(set, n) == truth);
    CHECK(count_all_lowmem(set, n, nullptr, 3) == truth);
    std::vector<PackedPerm> everything;
    for (int m = 1; m <= n; ++m) {
      for (const auto& tau : testsupport::all_perms(m)) everything.push_back(tau);
    }
    std::reverse(everything.begin(), everything.end());
    CHECK(count_downset(everything, set) == truth);
    if (set.size() == 1) CHECK(count_single_fast(set.patterns()[0], n) == truth);
  }
}

TEST_CASE("small tallies") {
  const CountTally t = count_single_fast(parse_perm("12"), 2);
  const std::vector<CountTally::Row> level2 = {{2, 0, 1}, {2, 1, 1}};
  std::vector<CountTally::Row> got;
  for (const auto& row : t.rows()) {
    if (row.length == 2) got.push_back(row);
  }
  CHECK(got == level2);
  const CountTally four = count_all(PatternSet::parse("123"), 4);
  CHECK(four.total_hits(4) == 16);
  CHECK(four.with_hits(4, 4) == 1);
  CHECK(four.permutations(4) == 24);
  CHECK(four.with_hits(4, 3) == 0);
}

TEST_CASE("tally bookkeeping") {
  CountTally a(2);
  a.add(1, 0);
  a.add(2, 1, 3);
  CountTally b;
  b.add(4, 2);
  b.add(2, 1);
  a.merge(b);
  CHECK(a.max_length() == 4);
  CHECK(a.with_hits(2, 1) == 4);
  CHECK(a.level(9).empty());
  CHECK(a.rows().back() == CountTally::Row{4, 2, 1});
  CHECK_THROWS_AS(a.add(-1, 0), std::invalid_argument);
}

TEST_CASE("downset counter over an avoider class") {
  // hits of 2413 among the avoiders of 321, a downset
  const PatternSet p321 = PatternSet::parse("321");
  const PatternSet p2413 = PatternSet::parse("2413");
  DownsetCounter counter(p2413);
  for (int m = 1; m <= 8; ++m) {
    for (const auto& tau : testsupport::all_perms(m)) {
      if (oracle_contains(tau, p321)) continue;
      const HitProfile p = counter.add(tau);
      REQUIRE(p.hits() == oracle_count_hits(tau, p2413));
    }
  }
  CHECK(counter.tally().permutations(8) == 1430);
}

TEST_CASE("downset counter rejects bad streams") {
  const PatternSet set = PatternSet::parse("123");
  {
    DownsetCounter c(set);
    c.add(parse_perm("1"));
    c.add(parse_perm("12"));
    CHECK_THROWS_AS(c.add(parse_perm("213")), ClosureViolation);
  }
  {
    DownsetCounter c(set);
    c.add(parse_perm("1"));
    c.add(parse_perm("12"));
    CHECK_THROWS_AS(c.add(parse_perm("1")), std::invalid_argument);
    CHECK_THROWS_AS(c.add(parse_perm("12")), std::invalid_argument);
  }
  {
    DownsetCounter c(set);
    CHECK_THROWS_AS(c.add(parse_perm("12")), ClosureViolation);
  }
}

TEST_CASE("bounded hit builder keeps exactly the permutations within budget") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 12; ++trial) {
    const PatternSet set = testsupport::random_subset(rng, 2 + trial % 3, 0.25);
    const std::uint64_t budget = trial % 4;
    CAPTURE(set.to_string());
    CAPTURE(budget);
    const auto levels = build_bounded_hits(set, 7, budget);
    REQUIRE(levels.size() == 7);
    for (int m = 1; m <= 7; ++m) {
      std::vector<PackedPerm> expect;
      for (const auto& tau : testsupport::all_perms(m)) {
        if (oracle_count_hits(tau, set) <= budget) expect.push_back(tau);
      }
      const auto& got = levels[m - 1];
      REQUIRE(got.size() == expect.size());
      for (std::size_t j = 0; j < got.size(); ++j) {
        REQUIRE(got[j].perm == expect[j]);
        if (m <= 6) REQUIRE(got[j].profile == naive_profile(got[j].perm, set));
      }
    }
  }
  const auto zero = build_bounded_hits(PatternSet::parse("231"), 8, 0);
  CHECK(zero[7].size() == 1430);
}

TEST_CASE("single-pattern fast path matches the standard engine") {
  for (int k = 1; k <= 5; ++k) {
    for (const auto& pi : testsupport::all_perms(k)) {
      if (k == 5 && pi.word() % 7 != 0) continue;
      std::uint64_t fast_work = 0;
      std::uint64_t plain_work = 0;
      const CountTally fast = count_single_fast(pi, 8, &fast_work);
      REQUIRE(fast == count_all(PatternSet({pi}), 8, false, &plain_work));
      CHECK(fast_work <= plain_work);
    }
  }
}

TEST_CASE("depth-first tally: threads and memory counter") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 6; ++trial) {
    const PatternSet set = testsupport::random_subset(rng, 3, 0.4);
    CountLowmemStats stats;
    const CountTally one = count_all_lowmem(set, 9, &stats, 1);
    CHECK(stats.peak_live_entries > 0);
    CHECK(one == count_all(set, 9));
    for (int t : {2, 4}) CHECK(count_all_lowmem(set, 9, nullptr, t) == one);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(count_all(PatternSet::parse("12"), 0), PermError);
  CHECK_THROWS_AS(count_all(PatternSet::parse("12"), kMaxLength + 1), PermError);
  CHECK_THROWS_AS(count_single_fast(PackedPerm{}, 3), PermError);
  CHECK_THROWS_AS(count_all_lowmem(PatternSet::parse("12"), kMaxLength + 1), PermError);
}
