#include "permpat/avoiders.hpp"

#include <algorithm>
#include <bit>
#include <deque>

#include "tree_split.hpp"

namespace permpat {

namespace {

void check_target_length(int n) {
  if (n < 1) throw PermError("target length must be at least 1");
  if (n > kMaxLength) {
    throw PermError("target length " + std::to_string(n) + " exceeds word capacity " +
                    std::to_string(kMaxLength));
  }
}

constexpr ExtBits slot_mask(int width) {
  return width >= 32 ? ~ExtBits{0} : (ExtBits{1} << width) - 1;
}

constexpr ExtBits spread_bits(ExtBits x, int p) {
  return (x & slot_mask(p)) | ((x >> (p - 1)) << p);
}

struct Node {
  Word word = 0;
  Word inv = 0;
  ExtBits ext = 0;
  int slot = 0;  // partition key, lowmem engine only
};

// Inverse entries carried per node; deletions reach the k largest letters.
int inverse_keep(const PatternSet& patterns) { return std::max(patterns.max_length(), 1); }

PartialInverse node_inverse(const Node& node, int length, int keep) {
  return {node.inv, std::min(length, keep)};
}

// Ψ of the length-`len` permutation `word`, whose ↓_1 is `parent` with map
// `parent_ext`. lookup(word) gives Ψ of the other ↓_t, or 0 when that
// permutation is not an avoider.
template <class Lookup>
ExtBits extension_of(Word word, int len, const PartialInverse& inv, Word parent,
                     ExtBits parent_ext, const PatternSet& patterns, Lookup&& lookup) {
  const int k = patterns.max_length();
  const PackedPerm tau = PackedPerm::from_word_unchecked(word, len);
  ExtBits ext = slot_mask(len + 1);
  const int depth = std::min(k, len);
  if (depth >= 1) {
    PackedPerm down = PackedPerm::from_word_unchecked(parent, len - 1);
    ext &= spread_bits(parent_ext, inv.position_of(len));
    for (int t = 2; t <= depth && ext != 0; ++t) {
      down = delete_down_next_unchecked(tau, down, inv, t - 1);
      ext &= spread_bits(lookup(down.word()), inv.position_of(len - t + 1));
    }
  }
  // Near the bottom the deletions cannot see a hit that uses every letter.
  if (len + 1 <= k) {
    for (ExtBits rest = ext; rest != 0; rest &= rest - 1) {
      const int b = std::countr_zero(rest) + 1;
      if (patterns.contains_word(bits::insert_pos(word, b, len + 1))) ext &= ~(ExtBits{1} << (b - 1));
    }
  }
  return ext;
}

// Level-synchronous builder: holds S_m(Π) with partial inverses and maps.
class FastBuilder {
 public:
  explicit FastBuilder(const PatternSet& patterns)
      : patterns_(patterns), keep_(inverse_keep(patterns)) {
    const bool one_is_pattern = patterns.contains_word(Word{1});
    level_.push_back({0, 0, one_is_pattern ? ExtBits{0} : ExtBits{1}, 0});
    index_.emplace(Word{0}, level_.back().ext);
  }

  int length() const { return length_; }
  const std::vector<Node>& level() const { return level_; }

  std::uint64_t next_size() const {
    std::uint64_t total = 0;
    for (const Node& x : level_) total += static_cast<std::uint64_t>(std::popcount(x.ext));
    return total;
  }

  /// Moves to length m+1. Without maps the new level has width-0 maps and
  /// cannot be advanced again.
  void advance(bool with_maps, const AvoiderSink* sink) {
    const int len = length_ + 1;
    std::vector<Node> next;
    if (with_maps || sink != nullptr) next.reserve(static_cast<std::size_t>(next_size()));
    auto lookup = [&](Word w) {
      const auto it = index_.find(w);
      return it == index_.end() ? ExtBits{0} : it->second;
    };
    for (const Node& x : level_) {
      const PackedPerm parent = PackedPerm::from_word_unchecked(x.word, length_);
      const PartialInverse pinv = node_inverse(x, length_, keep_);
      for (ExtBits rest = x.ext; rest != 0; rest &= rest - 1) {
        const int b = std::countr_zero(rest) + 1;
        const Word word = bits::insert_pos(x.word, b, len);
        const PartialInverse inv = update_inverse(pinv, parent, b, keep_);
        ExtBits ext = 0;
        if (with_maps) ext = extension_of(word, len, inv, x.word, x.ext, patterns_, lookup);
        if (sink != nullptr) {
          (*sink)(PackedPerm::from_word_unchecked(word, len), ExtensionMap{ext, with_maps ? len + 1 : 0});
        }
        if (with_maps) next.push_back({word, inv.word, ext, 0});
      }
    }
    level_ = std::move(next);
    index_.clear();
    if (with_maps) {
      index_.reserve(level_.size());
      for (const Node& x : level_) index_.emplace(x.word, x.ext);
    }
    length_ = len;
  }

 private:
  const PatternSet& patterns_;
  int keep_;
  int length_ = 0;
  std::vector<Node> level_;
  WordMap<ExtBits> index_;
};

// Depth-first walk over inclusion-tree nodes u. The frame of u holds the
// avoiders among its descendants k-1 levels down, with their maps; the
// avoiders k levels down are generated from it, split by which child of u
// they descend from, and each child's batch becomes that child's frame.
class LowmemWalker {
 public:
  LowmemWalker(const PatternSet& patterns, int n, detail::SubtreeSplit split)
      : patterns_(patterns),
        n_(n),
        k_(patterns.max_length()),
        keep_(inverse_keep(patterns)),
        split_(split),
        counts_(static_cast<std::size_t>(n) + 1, 0) {}

  void run(std::vector<Node> root) {
    hold(static_cast<std::int64_t>(root.size()));
    expand(root, 0, 0);
    hold(-static_cast<std::int64_t>(root.size()));
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t peak_live() const { return peak_; }

 private:
  void hold(std::int64_t delta) {
    live_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(live_) + delta);
    peak_ = std::max(peak_, live_);
  }

  // Rank of letter base+1 among the letters 1..base+1 of x, i.e. the slot
  // at which base+1 was inserted into u.
  int slot_of(const Node& x, int xlen, int base) const {
    const PartialInverse inv = node_inverse(x, xlen, keep_);
    const int p = inv.position_of(base + 1);
    int larger_left = 0;
    for (int v = base + 2; v <= xlen; ++v) larger_left += inv.position_of(v) < p ? 1 : 0;
    return p - larger_left;
  }

  void expand(std::vector<Node>& frame, int base, int depth) {
    const int xlen = base + k_ - 1;
    const int clen = xlen + 1;
    const bool tally = split_.tallies(depth);
    if (tally) {
      for (const Node& x : frame) counts_[clen] += static_cast<std::uint64_t>(std::popcount(x.ext));
    }
    if (clen == n_) return;
    const bool last = clen == n_ - 1;

    WordMap<ExtBits> index;
    index.reserve(frame.size());
    for (Node& x : frame) {
      index.emplace(x.word, x.ext);
      x.slot = slot_of(x, xlen, base);
    }
    std::sort(frame.begin(), frame.end(), [](const Node& a, const Node& b) { return a.slot < b.slot; });
    auto lookup = [&](Word w) {
      const auto it = index.find(w);
      return it == index.end() ? ExtBits{0} : it->second;
    };

    std::vector<Node> child;
    for (std::size_t lo = 0; lo < frame.size();) {
      std::size_t hi = lo;
      while (hi < frame.size() && frame[hi].slot == frame[lo].slot) ++hi;
      if (last ? tally : split_.owns(depth + 1)) {
        child.clear();
        for (std::size_t a = lo; a < hi; ++a) {
          const Node& x = frame[a];
          const PackedPerm parent = PackedPerm::from_word_unchecked(x.word, xlen);
          const PartialInverse pinv = node_inverse(x, xlen, keep_);
          for (ExtBits rest = x.ext; rest != 0; rest &= rest - 1) {
            const int b = std::countr_zero(rest) + 1;
            const Word word = bits::insert_pos(x.word, b, clen);
            const PartialInverse inv = update_inverse(pinv, parent, b, keep_);
            const ExtBits ext = extension_of(word, clen, inv, x.word, x.ext, patterns_, lookup);
            if (last) {
              counts_[n_] += static_cast<std::uint64_t>(std::popcount(ext));
            } else {
              child.push_back({word, inv.word, ext, 0});
            }
          }
        }
        if (!last && !child.empty()) {
          const auto held = static_cast<std::int64_t>(child.size());
          hold(held);
          std::vector<Node> batch = std::move(child);
          expand(batch, base + 1, depth + 1);
          child = std::move(batch);
          hold(-held);
        }
      }
      lo = hi;
    }
  }

  const PatternSet& patterns_;
  int n_;
  int k_;
  int keep_;
  detail::SubtreeSplit split_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t live_ = 0;
  std::uint64_t peak_ = 0;
};

}  // namespace

int ExtensionMap::count() const { return std::popcount(bits & slot_mask(width)); }

std::string ExtensionMap::to_string() const {
  std::string out;
  for (int slot = 1; slot <= width; ++slot) out.push_back(bit(slot) ? '1' : '0');
  return out;
}

ExtensionMap spread_extension_map(const ExtensionMap& shorter, int p) {
  if (p < 1 || p > shorter.width) throw PermError("spread_extension_map: position out of range");
  return {spread_bits(shorter.bits, p) & slot_mask(shorter.width + 1), shorter.width + 1};
}

bool detect_avoider(const PackedPerm& tau, const PatternSet& patterns, const WordSet& known,
                    bool upfix_exit) {
  if (patterns.contains(tau)) return false;
  const int n = tau.size();
  if (n == 0) return true;
  const int limit = std::min(patterns.max_length() + 1, n);
  const PartialInverse inv = inverse_of(tau);
  UpfixCursor cursor(tau, inv);
  PackedPerm down = delete_max(tau, inv);
  for (int i = 1; i <= limit; ++i) {
    if (i > 1) down = delete_down_next_unchecked(tau, down, inv, i - 1);
    if (!down.empty() && !known.contains(down.word())) return false;
    if (upfix_exit && i < limit) {
      cursor.advance();
      if (!patterns.is_upfix(i, cursor.current().word())) return true;
    }
  }
  return true;
}

std::vector<std::vector<PackedPerm>> build_avoiders_basic(const PatternSet& patterns, int n,
                                                          const DownsetFilter& filter,
                                                          bool upfix_exit) {
  check_target_length(n);
  std::vector<std::vector<PackedPerm>> levels(static_cast<std::size_t>(n));
  WordSet known;
  std::deque<PackedPerm> unprocessed;
  const PackedPerm one = PackedPerm::from_word_unchecked(1, 1);
  if (!patterns.contains(one) && (!filter || filter(one))) {
    known.insert(one.word());
    levels[0].push_back(one);
    if (n > 1) unprocessed.push_back(one);
  }
  while (!unprocessed.empty()) {
    const PackedPerm tau = unprocessed.front();
    unprocessed.pop_front();
    for (int i = 1; i <= tau.size() + 1; ++i) {
      const PackedPerm child = insert_up(tau, i);
      if (known.contains(child.word())) continue;
      if (filter && !filter(child)) continue;
      if (!detect_avoider(child, patterns, known, upfix_exit)) continue;
      known.insert(child.word());
      levels[static_cast<std::size_t>(child.size()) - 1].push_back(child);
      if (child.size() < n) unprocessed.push_back(child);
    }
  }
  for (auto& level : levels) std::sort(level.begin(), level.end(), lex_less);
  return levels;
}

std::vector<std::uint64_t> count_avoiders_fast(const PatternSet& patterns, int n) {
  check_target_length(n);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  FastBuilder builder(patterns);
  for (int m = 1; m <= n; ++m) {
    counts[m - 1] = builder.next_size();
    if (m < n) builder.advance(true, nullptr);
  }
  return counts;
}

void enumerate_avoiders_fast(const PatternSet& patterns, int n, const AvoiderSink& sink) {
  check_target_length(n);
  FastBuilder builder(patterns);
  for (int m = 1; m <= n; ++m) builder.advance(m < n, &sink);
}

std::vector<std::uint64_t> count_avoiders_lowmem(const PatternSet& patterns, int n,
                                                 LowmemStats* stats, int threads) {
  check_target_length(n);
  const int k = patterns.max_length();
  if (k < 2 || n < k) {
    // Nothing to walk: the whole answer sits within the first k-1 levels.
    FastBuilder builder(patterns);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
    std::uint64_t peak = builder.level().size();
    for (int m = 1; m <= n; ++m) {
      counts[m - 1] = builder.next_size();
      if (m < n) builder.advance(true, nullptr);
      peak = std::max<std::uint64_t>(peak, builder.level().size());
    }
    if (stats != nullptr) stats->peak_live_maps = peak;
    return counts;
  }

  FastBuilder builder(patterns);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  while (builder.length() < k - 1) {
    builder.advance(true, nullptr);
    counts[builder.length() - 1] = builder.level().size();
  }

  threads = std::max(threads, 1);
  const int split_depth = std::clamp(n - k - 1, 1, 4);
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(threads));
  std::vector<std::uint64_t> peaks(static_cast<std::size_t>(threads), 0);
  detail::run_workers(threads, [&](int worker) {
    LowmemWalker walker(patterns, n, detail::SubtreeSplit(split_depth, worker, threads));
    walker.run(builder.level());
    partial[static_cast<std::size_t>(worker)] = walker.counts();
    peaks[static_cast<std::size_t>(worker)] = walker.peak_live();
  });
  for (const auto& part : partial) {
    for (int m = k; m <= n; ++m) counts[m - 1] += part[static_cast<std::size_t>(m)];
  }
  if (stats != nullptr) {
    stats->peak_live_maps = 0;
    for (std::uint64_t p : peaks) stats->peak_live_maps += p;
  }
  return counts;
}

}  // namespace permpat
