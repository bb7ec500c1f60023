#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "permpat/config.hpp"

namespace permpat {

/// Thrown for malformed permutations: duplicate letters, bad text, or
/// lengths beyond the word capacity.
class PermError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raw block arithmetic on packed words. Block 1 is the least significant
// block; positions and letters are 1-based throughout.
namespace bits {

inline constexpr Word kBlockMask = (Word{1} << kBlockBits) - 1;

constexpr Word shl(Word w, int s) { return s >= kWordBits ? Word{0} : w << s; }
constexpr Word shr(Word w, int s) { return s >= kWordBits ? Word{0} : w >> s; }

/// Mask covering blocks 1..count.
constexpr Word low_blocks(int count) { return shl(Word{1}, count * kBlockBits) - 1; }

inline constexpr auto kOnes = [] {
  std::array<Word, kMaxLength + 2> table{};
  for (int c = 1; c < static_cast<int>(table.size()); ++c) {
    table[c] = table[c - 1] | shl(Word{1}, (c - 1) * kBlockBits);
  }
  return table;
}();

/// Word holding the value 1 in each of blocks 1..count.
constexpr Word ones(int count) { return kOnes[count]; }

constexpr int get(Word w, int i) {
  return static_cast<int>((w >> (kBlockBits * (i - 1))) & kBlockMask);
}

constexpr Word set(Word w, int i, int v) {
  const int lo = kBlockBits * (i - 1);
  return (w & ~(kBlockMask << lo)) | (static_cast<Word>(v) << lo);
}

/// insertpos: slide blocks u.. one block up and write v into block u.
constexpr Word insert_pos(Word w, int u, int v) {
  const int lo = kBlockBits * (u - 1);
  return (w & low_blocks(u - 1)) | shl(shr(w, lo), lo + kBlockBits) |
         (static_cast<Word>(v) << lo);
}

/// killpos: w mod 2^{j(i-1)} + floor(w / 2^{ij}) * 2^{j(i-1)}.
constexpr Word kill_pos(Word w, int i) {
  const int lo = kBlockBits * (i - 1);
  return (w & low_blocks(i - 1)) | shl(shr(w, lo + kBlockBits), lo);
}

}  // namespace bits

/// A permutation of {1..n} packed into one machine word, letter i in block i.
/// Blocks above n are zero, so two values are equal exactly when their words
/// are equal (the length is implied by the word, and kept for convenience).
class PackedPerm {
 public:
  constexpr PackedPerm() = default;

  static constexpr PackedPerm from_word_unchecked(Word word, int length) {
    PackedPerm p;
    p.word_ = word;
    p.size_ = length;
    return p;
  }

  /// Validates that `word` holds a permutation of 1..length.
  static PackedPerm from_word(Word word, int length);

  /// Validates that `letters` is a permutation of 1..n.
  static PackedPerm from_letters(std::span<const int> letters);

  constexpr Word word() const { return word_; }
  constexpr int size() const { return size_; }
  constexpr bool empty() const { return size_ == 0; }

  /// Letter at 1-based position `pos`.
  constexpr int operator()(int pos) const { return bits::get(word_, pos); }

  std::vector<int> letters() const;

  friend constexpr bool operator==(const PackedPerm&, const PackedPerm&) = default;

 private:
  Word word_ = 0;
  int size_ = 0;
};

/// Inverse permutation stored like a PackedPerm (block v holds the position
/// of letter v) but only trusted for the `valid_count` largest values.
struct PartialInverse {
  Word word = 0;
  int valid_count = 0;

  constexpr int position_of(int value) const { return bits::get(word, value); }

  friend constexpr bool operator==(const PartialInverse&, const PartialInverse&) = default;
};

/// Length of the permutation stored in a canonical word.
constexpr int word_length(Word w) {
  int n = 0;
  while (w != 0) {
    w = bits::shr(w, kBlockBits);
    ++n;
  }
  return n;
}

PackedPerm standardize(std::span<const int> letters);

/// tau ↑^i: insert n+1 at position i.
inline PackedPerm insert_up(const PackedPerm& tau, int i) {
  const int n = tau.size();
  if (i < 1 || i > n + 1) throw PermError("insert_up: position out of range");
  if (n + 1 > kMaxLength) throw PermError("insert_up: word capacity exceeded");
  return PackedPerm::from_word_unchecked(bits::insert_pos(tau.word(), i, n + 1), n + 1);
}

/// tau ↓_i: remove the i-th largest letter and standardize. O(n).
PackedPerm delete_down(const PackedPerm& tau, int i);

/// tau ↓_1 given the position of the maximum; no standardization needed.
inline PackedPerm delete_max(const PackedPerm& tau, const PartialInverse& inv) {
  const int n = tau.size();
  return PackedPerm::from_word_unchecked(bits::kill_pos(tau.word(), inv.position_of(n)), n - 1);
}

/// tau ↓_{i+1} from prev = tau ↓_i in O(1): put the letter n-i back where
/// n-i+1 used to be, then remove the original n-i. Needs inv valid for the
/// values n-i and n-i+1.
inline PackedPerm delete_down_next_unchecked(const PackedPerm& tau, const PackedPerm& prev,
                                             const PartialInverse& inv, int i) {
  const int n = tau.size();
  const Word restored = bits::insert_pos(prev.word(), inv.position_of(n - i + 1), n - i);
  return PackedPerm::from_word_unchecked(bits::kill_pos(restored, inv.position_of(n - i)), n - 1);
}

PackedPerm delete_down_next(const PackedPerm& tau, const PackedPerm& prev,
                            const PartialInverse& inv, int i);

/// Raw splice removing block i, no standardization.
constexpr Word kill_pos(Word w, int i) { return bits::kill_pos(w, i); }
constexpr Word insert_pos(Word w, int u, int v) { return bits::insert_pos(w, u, v); }

/// Full inverse (valid_count = n).
PartialInverse inverse_of(const PackedPerm& tau);

/// Inverse of tau ↑^i from the inverse of tau. Only the values that were
/// valid are updated, so the cost is O(valid_count); `keep` caps how many
/// of the largest values are carried forward (the new maximum included).
inline PartialInverse update_inverse(const PartialInverse& inv, const PackedPerm& tau, int i,
                                     int keep) {
  const int n = tau.size();
  const int carried = std::min(inv.valid_count, keep - 1);
  Word w = inv.word;
  for (int v = n; v > n - carried; --v) {
    if (bits::get(w, v) >= i) w += bits::shl(Word{1}, kBlockBits * (v - 1));
  }
  w = bits::set(w, n + 1, i);
  return {w, carried + 1};
}

inline PartialInverse update_inverse(const PartialInverse& inv, const PackedPerm& tau, int i) {
  return update_inverse(inv, tau, i, tau.size() + 1);
}

// Symmetries of the square.
PackedPerm reverse(const PackedPerm& tau);
PackedPerm complement(const PackedPerm& tau);
PackedPerm inverse(const PackedPerm& tau);

int inversion_count(const PackedPerm& tau);

/// Lexicographic order on letter sequences, shorter permutations first.
bool lex_less(const PackedPerm& a, const PackedPerm& b);

/// Accepts "13524", "1 3 5 2 4", "1,3,5,2,4" and the bracketed "[1 3 5 2 4]".
PackedPerm parse_perm(std::string_view text);

/// Digit string for n <= 9, space-separated letters otherwise.
std::string to_string(const PackedPerm& tau);

/// Walks the standardized i-upfixes of tau for i = 1, 2, ... in O(1) per
/// step. Each step places the next smallest upfix letter using a popcount
/// over the bitmap of positions already in the upfix.
class UpfixCursor {
 public:
  UpfixCursor(const PackedPerm& tau, const PartialInverse& inv)
      : size_(tau.size()), inverse_(inv.word) {}

  int depth() const { return depth_; }
  bool can_advance() const { return depth_ < size_; }

  /// st(depth-upfix of tau).
  PackedPerm current() const { return PackedPerm::from_word_unchecked(standardized_, depth_); }

  /// Bit p-1 set iff position p holds one of the `depth` largest letters.
  std::uint32_t positions() const { return positions_; }

  void advance() {
    const int value = size_ - depth_;
    const int pos = bits::get(inverse_, value);
    const std::uint32_t left_mask = (std::uint32_t{1} << (pos - 1)) - 1;
    const int left = std::popcount(positions_ & left_mask);
    standardized_ = bits::insert_pos(standardized_ + bits::ones(depth_), left + 1, 1);
    positions_ |= std::uint32_t{1} << (pos - 1);
    ++depth_;
  }

 private:
  int size_;
  Word inverse_;
  Word standardized_ = 0;
  std::uint32_t positions_ = 0;
  int depth_ = 0;
};

/// Largest i <= min(r, n) such that accept(i', st(i'-upfix)) holds for
/// every i' <= i. `inv` must be valid for the r largest values.
template <class Accept>
int upfix_standardize_scan(const PackedPerm& tau, const PartialInverse& inv, int r,
                           Accept&& accept) {
  UpfixCursor cursor(tau, inv);
  const int limit = std::min(r, tau.size());
  while (cursor.depth() < limit) {
    cursor.advance();
    if (!accept(cursor.depth(), cursor.current())) return cursor.depth() - 1;
  }
  return limit;
}

/// Hash for packed words (splitmix64 finalizer).
struct WordHash {
  static constexpr std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }
  std::size_t operator()(Word w) const {
    if constexpr (sizeof(Word) > 8) {
      return mix(static_cast<std::uint64_t>(w) ^ mix(static_cast<std::uint64_t>(bits::shr(w, 64))));
    } else {
      return mix(static_cast<std::uint64_t>(w));
    }
  }
};

struct PackedPermHash {
  std::size_t operator()(const PackedPerm& p) const { return WordHash{}(p.word()); }
};

}  // namespace permpat
