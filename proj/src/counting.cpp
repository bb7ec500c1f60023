#include "permpat/counting.hpp"

#include <algorithm>

#include "profile_engine.hpp"

namespace permpat {

namespace {

void check_target_length(int n) {
  if (n < 1) throw PermError("target length must be at least 1");
  if (n > kMaxLength) {
    throw PermError("target length " + std::to_string(n) + " exceeds word capacity " +
                    std::to_string(kMaxLength));
  }
}

const std::map<std::uint64_t, std::uint64_t> kEmptyLevel;

// Depth-first tally. The frame of node u holds every descendant of u
// exactly k levels down, with profiles; their children are the
// descendants k+1 levels down, whose deletions of the k+1 largest letters
// all land back in the frame.
template <class Rule>
class CountWalker {
 public:
  CountWalker(const Rule& rule, int n, detail::SubtreeSplit split)
      : rule_(rule), n_(n), k_(rule.k()), keep_(rule.k() + 1), split_(split), tally_(n) {}

  void run(detail::ProfileBatch root) {
    const auto held = static_cast<std::int64_t>(root.stored_values());
    hold(held);
    expand(root, 0, 0);
    hold(-held);
  }

  const CountTally& tally() const { return tally_; }
  std::uint64_t peak_live() const { return peak_; }

 private:
  void hold(std::int64_t delta) {
    live_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(live_) + delta);
    peak_ = std::max(peak_, live_);
  }

  int slot_of(const detail::ProfileBatch::Item& x, int xlen, int base) const {
    const PartialInverse inv{x.inv, std::min(xlen, keep_)};
    const int p = inv.position_of(base + 1);
    int larger_left = 0;
    for (int v = base + 2; v <= xlen; ++v) larger_left += inv.position_of(v) < p ? 1 : 0;
    return p - larger_left;
  }

  void expand(detail::ProfileBatch& frame, int base, int depth) {
    const int xlen = base + k_;
    const int clen = xlen + 1;
    const bool tally = split_.tallies(depth);
    const bool last = clen == n_;

    auto& items = frame.items();
    for (auto& x : items) x.slot = slot_of(x, xlen, base);
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.slot < b.slot; });
    frame.build_index();
    auto lookup = [&](Word w, int i) { return frame.get(w, i); };

    std::array<std::uint64_t, detail::kProfileCapacity> profile{};
    detail::ProfileBatch child;
    for (std::size_t lo = 0; lo < items.size();) {
      std::size_t hi = lo;
      while (hi < items.size() && items[hi].slot == items[lo].slot) ++hi;
      const bool owned = !last && split_.owns(depth + 1);
      if (tally || owned) {
        child.clear();
        for (std::size_t a = lo; a < hi; ++a) {
          const PackedPerm parent = PackedPerm::from_word_unchecked(items[a].word, xlen);
          const PartialInverse pinv{items[a].inv, std::min(xlen, keep_)};
          for (int b = 1; b <= clen; ++b) {
            const PackedPerm tau = PackedPerm::from_word_unchecked(bits::insert_pos(parent.word(), b, clen), clen);
            const PartialInverse inv = update_inverse(pinv, parent, b, keep_);
            const int d = detail::profile_depth(tau, inv, rule_);
            detail::evaluate_profile(tau, inv, d, rule_, lookup, profile.data());
            if (tally) tally_.add(clen, profile[0]);
            if (owned) child.put(tau.word(), inv.word, d, profile.data());
          }
        }
        if (owned && child.size() > 0) {
          const auto held = static_cast<std::int64_t>(child.stored_values());
          hold(held);
          expand(child, base + 1, depth + 1);
          hold(-held);
        }
      }
      lo = hi;
    }
  }

  Rule rule_;
  int n_;
  int k_;
  int keep_;
  detail::SubtreeSplit split_;
  CountTally tally_;
  std::uint64_t live_ = 0;
  std::uint64_t peak_ = 0;
};

}  // namespace

void CountTally::add(int length, std::uint64_t hits, std::uint64_t multiplicity) {
  if (length < 0) throw std::invalid_argument("negative length in tally");
  if (length > max_length()) levels_.resize(static_cast<std::size_t>(length) + 1);
  levels_[static_cast<std::size_t>(length)][hits] += multiplicity;
}

void CountTally::merge(const CountTally& other) {
  for (int m = 0; m <= other.max_length(); ++m) {
    for (const auto& [hits, mult] : other.level(m)) add(m, hits, mult);
  }
}

const std::map<std::uint64_t, std::uint64_t>& CountTally::level(int length) const {
  if (length < 0 || length > max_length()) return kEmptyLevel;
  return levels_[static_cast<std::size_t>(length)];
}

std::uint64_t CountTally::permutations(int length) const {
  std::uint64_t total = 0;
  for (const auto& [hits, mult] : level(length)) total += mult;
  return total;
}

std::uint64_t CountTally::total_hits(int length) const {
  std::uint64_t total = 0;
  for (const auto& [hits, mult] : level(length)) total += hits * mult;
  return total;
}

std::uint64_t CountTally::with_hits(int length, std::uint64_t hits) const {
  const auto& lv = level(length);
  const auto it = lv.find(hits);
  return it == lv.end() ? 0 : it->second;
}

std::vector<CountTally::Row> CountTally::rows() const {
  std::vector<Row> out;
  for (int m = 0; m <= max_length(); ++m) {
    for (const auto& [hits, mult] : level(m)) out.push_back({m, hits, mult});
  }
  return out;
}

CountTally count_all(const PatternSet& patterns, int n, bool prune, std::uint64_t* work) {
  check_target_length(n);
  return detail::tally_levels(detail::ClassicRule(patterns, prune), n, work);
}

CountTally count_single_fast(const PackedPerm& pattern, int n, std::uint64_t* work) {
  check_target_length(n);
  if (pattern.empty()) throw PermError("empty pattern");
  return detail::tally_levels(detail::SingleRule(pattern, 0, true), n, work);
}

struct DownsetCounter::Impl {
  PatternSet patterns;
  detail::DownsetEngine<detail::ClassicRule> engine;

  Impl(const PatternSet& p, bool prune) : patterns(p), engine(detail::ClassicRule(patterns, prune)) {}
};

DownsetCounter::DownsetCounter(const PatternSet& patterns, bool prune)
    : impl_(std::make_unique<Impl>(patterns, prune)) {}
DownsetCounter::~DownsetCounter() = default;
DownsetCounter::DownsetCounter(DownsetCounter&&) noexcept = default;
DownsetCounter& DownsetCounter::operator=(DownsetCounter&&) noexcept = default;

HitProfile DownsetCounter::add(const PackedPerm& tau, const PartialInverse& inv) {
  return impl_->engine.add(tau, inv);
}

const CountTally& DownsetCounter::tally() const { return impl_->engine.tally(); }

CountTally count_downset(std::vector<PackedPerm> downset, const PatternSet& patterns) {
  std::stable_sort(downset.begin(), downset.end(),
                   [](const PackedPerm& a, const PackedPerm& b) { return a.size() < b.size(); });
  DownsetCounter counter(patterns);
  for (const PackedPerm& tau : downset) counter.add(tau);
  return counter.tally();
}

std::vector<std::vector<ProfiledPerm>> build_bounded_hits(const PatternSet& patterns, int n,
                                                          std::uint64_t budget) {
  check_target_length(n);
  const int k = patterns.max_length();
  const int keep = k + 1;
  const detail::ClassicRule rule(patterns, false);
  std::vector<std::vector<ProfiledPerm>> levels(static_cast<std::size_t>(n));
  detail::ProfileBatch previous = detail::empty_root();
  std::array<std::uint64_t, detail::kProfileCapacity> profile{};
  for (int m = 1; m <= n && previous.size() > 0; ++m) {
    detail::ProfileBatch next;
    WordSet tried;
    for (const auto& item : previous.items()) {
      const PackedPerm parent = PackedPerm::from_word_unchecked(item.word, m - 1);
      const PartialInverse pinv{item.inv, std::min(m - 1, keep)};
      for (int b = 1; b <= m; ++b) {
        const PackedPerm tau = PackedPerm::from_word_unchecked(bits::insert_pos(parent.word(), b, m), m);
        if (!tried.insert(tau.word()).second) continue;
        const PartialInverse inv = update_inverse(pinv, parent, b, keep);
        const int depth = std::min(k, m);
        bool outside = false;
        auto lookup = [&](Word w, int i) -> std::uint64_t {
          if (!previous.contains(w)) {
            outside = true;
            return 0;
          }
          return previous.get(w, i);
        };
        // Profiles go into a scratch row and are committed only on success.
        detail::evaluate_profile(tau, inv, depth, rule, lookup, profile.data());
        if (outside || profile[0] > budget) continue;
        next.put_indexed(tau.word(), inv.word, depth, profile.data());
      }
    }
    auto& level = levels[static_cast<std::size_t>(m) - 1];
    for (const auto& item : next.items()) {
      level.push_back({PackedPerm::from_word_unchecked(item.word, m), next.profile(item, k)});
    }
    std::sort(level.begin(), level.end(),
              [](const ProfiledPerm& a, const ProfiledPerm& b) { return lex_less(a.perm, b.perm); });
    previous = std::move(next);
  }
  return levels;
}

CountTally count_all_lowmem(const PatternSet& patterns, int n, CountLowmemStats* stats,
                            int threads) {
  check_target_length(n);
  const int k = patterns.max_length();
  const detail::ClassicRule rule(patterns, true);
  if (k < 1 || n <= k) {
    std::uint64_t ignored = 0;
    CountTally tally = detail::tally_levels(rule, n, &ignored);
    if (stats != nullptr) stats->peak_live_entries = 0;
    return tally;
  }

  CountTally tally(n);
  detail::LevelEngine<detail::ClassicRule> engine(rule);
  for (int m = 1; m <= k; ++m) {
    engine.advance(true, [&](const PackedPerm&, std::uint64_t hits) { tally.add(m, hits); }, nullptr);
  }

  threads = std::max(threads, 1);
  const int split_depth = std::clamp(n - k - 1, 1, 4);
  std::vector<CountTally> partial(static_cast<std::size_t>(threads));
  std::vector<std::uint64_t> peaks(static_cast<std::size_t>(threads), 0);
  detail::run_workers(threads, [&](int worker) {
    CountWalker<detail::ClassicRule> walker(rule, n, detail::SubtreeSplit(split_depth, worker, threads));
    walker.run(engine.level());
    partial[static_cast<std::size_t>(worker)] = walker.tally();
    peaks[static_cast<std::size_t>(worker)] = walker.peak_live();
  });
  for (const CountTally& part : partial) tally.merge(part);
  if (stats != nullptr) {
    stats->peak_live_entries = 0;
    for (std::uint64_t p : peaks) stats->peak_live_entries += p;
  }
  return tally;
}

}  // namespace permpat
