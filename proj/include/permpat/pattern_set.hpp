#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "permpat/perm.hpp"

namespace permpat {

// Packed words are unique across lengths (blocks 1..n are nonzero, the
// rest zero), so a single word-keyed table can hold several lengths.
using WordSet = absl::flat_hash_set<Word, WordHash>;
template <class Value>
using WordMap = absl::flat_hash_map<Word, Value, WordHash>;

/// A set of distinct patterns of possibly different lengths, together with
/// the standardized upfixes of every pattern for constant-time lookups.
class PatternSet {
 public:
  PatternSet() = default;

  /// Throws PermError on duplicates or an empty pattern.
  explicit PatternSet(std::vector<PackedPerm> patterns);

  /// Space- or comma-separated patterns; each a digit string or a
  /// bracketed letter list such as "[1 10 2 3 4 5 6 7 8 9]".
  static PatternSet parse(std::string_view text);

  /// Patterns in lex order (shorter first).
  std::span<const PackedPerm> patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }

  /// k: the longest pattern length (0 for the empty set).
  int max_length() const { return max_length_; }

  bool contains(const PackedPerm& tau) const { return members_.contains(tau.word()); }
  bool contains_word(Word w) const { return members_.contains(w); }

  /// True when `standardized` is st(i-upfix) of some pattern of length >= i.
  bool is_upfix(int i, Word standardized) const {
    return i <= max_length_ && upfixes_[static_cast<std::size_t>(i)].contains(standardized);
  }

  const WordSet& upfix_table(int i) const { return upfixes_.at(static_cast<std::size_t>(i)); }

  /// Space-joined pattern strings in lex order.
  std::string to_string() const;

  friend bool operator==(const PatternSet& a, const PatternSet& b) {
    return a.patterns_ == b.patterns_;
  }

 private:
  std::vector<PackedPerm> patterns_;
  WordSet members_;
  std::vector<WordSet> upfixes_;
  int max_length_ = 0;
};

/// st of the i largest letters of tau, read in position order. O(n log n);
/// used to build tables and as a reference in tests.
PackedPerm upfix_of(const PackedPerm& tau, int i);

}  // namespace permpat
