#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "permpat/counting.hpp"
#include "permpat/pattern_set.hpp"
#include "permpat/perm.hpp"
#include "tree_split.hpp"

// Machinery shared by the classical and covincular hit counters. A Rule
// supplies the pattern-specific parts of the recurrence:
//
//   int k() const                       longest pattern
//   bool prune() const                  stop at the first foreign upfix
//   bool upfix_ok(int i, Word st) const st(i-upfix) can still lead to a hit
//   bool is_pattern(Word w) const       the i == n case
//   bool passes_through(int i) const    P_i = P_{i+1}, no lookup

namespace permpat::detail {

inline constexpr int kProfileCapacity = kMaxLength + 2;

class ClassicRule {
 public:
  ClassicRule(const PatternSet& patterns, bool prune) : patterns_(&patterns), prune_(prune) {}
  int k() const { return patterns_->max_length(); }
  bool prune() const { return prune_; }
  bool upfix_ok(int i, Word st) const { return patterns_->is_upfix(i, st); }
  bool is_pattern(Word w) const { return patterns_->contains_word(w); }
  bool passes_through(int) const { return false; }

 private:
  const PatternSet* patterns_;
  bool prune_;
};

// One pattern, optionally with a mask of recurrence indices i whose P_i
// equals P_{i+1}.
class SingleRule {
 public:
  SingleRule(const PackedPerm& pattern, std::uint32_t through, bool prune)
      : pattern_(pattern), through_(through), prune_(prune) {
    upfix_.assign(static_cast<std::size_t>(pattern.size()) + 1, 0);
    for (int i = 1; i <= pattern.size(); ++i) upfix_[static_cast<std::size_t>(i)] = upfix_of(pattern, i).word();
  }
  int k() const { return pattern_.size(); }
  bool prune() const { return prune_; }
  bool upfix_ok(int i, Word st) const {
    return i <= pattern_.size() && upfix_[static_cast<std::size_t>(i)] == st;
  }
  bool is_pattern(Word w) const { return w == pattern_.word(); }
  bool passes_through(int i) const { return (through_ >> i) & 1u; }

 private:
  PackedPerm pattern_;
  std::vector<Word> upfix_;
  std::uint32_t through_;
  bool prune_;
};

/// Largest d such that P_{d+1}(tau) is known to vanish without evaluation.
template <class Rule>
int profile_depth(const PackedPerm& tau, const PartialInverse& inv, const Rule& rule) {
  const int top = std::min(rule.k(), tau.size());
  if (!rule.prune()) return top;
  return upfix_standardize_scan(tau, inv, top,
                                [&](int i, const PackedPerm& st) { return rule.upfix_ok(i, st.word()); });
}

/// Writes P_0..P_depth of tau into out. lookup(word, i) returns P_i of the
/// shorter permutation `word`.
template <class Rule, class Lookup>
void evaluate_profile(const PackedPerm& tau, const PartialInverse& inv, int depth, const Rule& rule,
                      Lookup&& lookup, std::uint64_t* out) {
  const int n = tau.size();
  std::array<Word, kProfileCapacity> downs{};
  const int needed = std::min(depth + 1, n);
  if (needed > 0) {
    PackedPerm down = delete_max(tau, inv);
    downs[0] = down.word();
    for (int t = 1; t < needed; ++t) {
      down = delete_down_next_unchecked(tau, down, inv, t);
      downs[static_cast<std::size_t>(t)] = down.word();
    }
  }
  std::uint64_t above = 0;
  for (int i = depth; i >= 0; --i) {
    std::uint64_t value;
    if (i == n) {
      value = rule.is_pattern(tau.word()) ? 1 : 0;
    } else if (rule.passes_through(i)) {
      value = above;
    } else {
      value = above + (n == 1 ? 0 : lookup(downs[static_cast<std::size_t>(i)], i));
    }
    out[i] = value;
    above = value;
  }
}

/// Permutations of one batch with their truncated profiles (P_0..P_depth)
/// and inverses valid for the k+1 largest letters.
class ProfileBatch {
 public:
  struct Item {
    Word word;
    Word inv;
    std::uint64_t offset;
    int depth;
    int slot;
  };

  void clear() {
    items_.clear();
    values_.clear();
    index_.clear();
  }
  void reserve(std::size_t count) { items_.reserve(count); }

  void put(Word word, Word inv, int depth, const std::uint64_t* profile) {
    items_.push_back({word, inv, values_.size(), depth, 0});
    values_.insert(values_.end(), profile, profile + depth + 1);
  }

  void put_indexed(Word word, Word inv, int depth, const std::uint64_t* profile) {
    put(word, inv, depth, profile);
    index_.emplace(word, static_cast<std::uint32_t>(items_.size() - 1));
  }

  /// Must be called after the last put and after any reordering of items.
  void build_index() {
    index_.clear();
    index_.reserve(items_.size());
    for (std::size_t a = 0; a < items_.size(); ++a) index_.emplace(items_[a].word, static_cast<std::uint32_t>(a));
  }

  bool contains(Word word) const { return index_.contains(word); }

  std::uint64_t get(Word word, int i) const {
    const auto it = index_.find(word);
    if (it == index_.end()) {
      throw ClosureViolation("no profile stored for a deletion of length " + std::to_string(word_length(word)));
    }
    const Item& item = items_[it->second];
    return i > item.depth ? 0 : values_[item.offset + static_cast<std::uint64_t>(i)];
  }

  HitProfile profile(const Item& item, int k) const {
    HitProfile out;
    out.values.assign(static_cast<std::size_t>(k) + 2, 0);
    for (int i = 0; i <= item.depth; ++i) out.values[static_cast<std::size_t>(i)] = values_[item.offset + static_cast<std::uint64_t>(i)];
    return out;
  }

  std::vector<Item>& items() { return items_; }
  const std::vector<Item>& items() const { return items_; }
  std::size_t stored_values() const { return values_.size(); }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Item> items_;
  std::vector<std::uint64_t> values_;
  WordMap<std::uint32_t> index_;
};

inline ProfileBatch empty_root() {
  ProfileBatch root;
  const std::uint64_t zero = 0;
  root.put(0, 0, 0, &zero);
  root.build_index();
  return root;
}

/// All of S_m, one length at a time, starting from the empty permutation.
template <class Rule>
class LevelEngine {
 public:
  explicit LevelEngine(const Rule& rule) : rule_(rule), keep_(rule.k() + 1), level_(empty_root()) {}

  int length() const { return length_; }
  const ProfileBatch& level() const { return level_; }

  /// Builds S_{m+1}; calls visit(perm, profile values) for each member.
  /// Without `store` the new level is not kept and this is the last step.
  template <class Visit>
  void advance(bool store, Visit&& visit, std::uint64_t* work) {
    const int len = length_ + 1;
    ProfileBatch next;
    if (store) next.reserve(level_.size() * static_cast<std::size_t>(len));
    std::array<std::uint64_t, kProfileCapacity> profile{};
    auto lookup = [&](Word w, int i) { return level_.get(w, i); };
    for (const auto& parent_item : level_.items()) {
      const PackedPerm parent = PackedPerm::from_word_unchecked(parent_item.word, length_);
      const PartialInverse pinv{parent_item.inv, std::min(length_, keep_)};
      for (int b = 1; b <= len; ++b) {
        const PackedPerm tau = PackedPerm::from_word_unchecked(bits::insert_pos(parent.word(), b, len), len);
        const PartialInverse inv = update_inverse(pinv, parent, b, keep_);
        const int depth = profile_depth(tau, inv, rule_);
        evaluate_profile(tau, inv, depth, rule_, lookup, profile.data());
        if (work != nullptr) *work += static_cast<std::uint64_t>(depth) + 1;
        visit(tau, profile[0]);
        if (store) next.put(tau.word(), inv.word, depth, profile.data());
      }
    }
    if (store) next.build_index();
    level_ = std::move(next);
    length_ = len;
  }

 private:
  Rule rule_;
  int keep_;
  int length_ = 0;
  ProfileBatch level_;
};

template <class Rule>
CountTally tally_levels(const Rule& rule, int n, std::uint64_t* work) {
  CountTally tally(n);
  LevelEngine<Rule> engine(rule);
  for (int m = 1; m <= n; ++m) {
    engine.advance(m < n, [&](const PackedPerm&, std::uint64_t hits) { tally.add(m, hits); }, work);
  }
  return tally;
}

/// Streams a downset in nondecreasing length, keeping two lengths.
template <class Rule>
class DownsetEngine {
 public:
  explicit DownsetEngine(const Rule& rule) : rule_(rule), current_(empty_root()) {}

  HitProfile add(const PackedPerm& tau, const PartialInverse& inv) {
    const int n = tau.size();
    if (n < length_) throw std::invalid_argument("downset stream must be in nondecreasing length");
    if (n == 0) throw std::invalid_argument("downset members must be nonempty");
    const int needed = std::min(rule_.k() + 1, n);
    if (inv.valid_count < needed) throw std::invalid_argument("inverse not valid for enough letters");
    if (n > length_) {
      if (n == length_ + 1) {
        previous_ = std::move(current_);
      } else {
        previous_.clear();
      }
      current_ = ProfileBatch{};
      length_ = n;
    }
    if (current_.contains(tau.word())) throw std::invalid_argument("duplicate downset member " + to_string(tau));
    std::array<std::uint64_t, kProfileCapacity> profile{};
    const int depth = profile_depth(tau, inv, rule_);
    evaluate_profile(tau, inv, depth, rule_, [&](Word w, int i) { return previous_.get(w, i); },
                     profile.data());
    current_.put_indexed(tau.word(), inv.word, depth, profile.data());
    tally_.add(n, profile[0]);
    HitProfile out;
    out.values.assign(static_cast<std::size_t>(rule_.k()) + 2, 0);
    std::copy(profile.begin(), profile.begin() + depth + 1, out.values.begin());
    return out;
  }

  const CountTally& tally() const { return tally_; }

 private:
  Rule rule_;
  int length_ = 0;
  ProfileBatch previous_;
  ProfileBatch current_;
  CountTally tally_;
};

}  // namespace permpat::detail
