#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "permpat/counting.hpp"
#include "permpat/perm.hpp"

namespace permpat {

/// Raised for operations that are deliberately not provided.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A pattern pi of length k with value-adjacency constraints X ⊆ {0..k}.
/// For 1 <= x < k, x ∈ X makes the letters playing x and x+1 consecutive
/// values of the host; 0 ∈ X pins the smallest letter of a hit to 1 and
/// k ∈ X pins the largest to n.
class CovincularPattern {
 public:
  CovincularPattern(const PackedPerm& pattern, std::span<const int> constrained);
  CovincularPattern(const PackedPerm& pattern, std::uint32_t mask);

  /// "--pattern 123 --adjacencies 0,2" style input.
  static CovincularPattern parse(std::string_view pattern, std::string_view adjacencies);

  const PackedPerm& pattern() const { return pattern_; }
  int length() const { return pattern_.size(); }
  std::uint32_t mask() const { return mask_; }
  bool constrained(int x) const { return (mask_ >> x) & 1u; }
  std::vector<int> constraints() const;

  /// e.g. "(123,{0,2})".
  std::string to_string() const;

  friend bool operator==(const CovincularPattern&, const CovincularPattern&) = default;

 private:
  PackedPerm pattern_;
  std::uint32_t mask_ = 0;
};

/// A pattern with position-adjacency constraints, same bit layout: y ∈ Y
/// for 1 <= y < k forces the y-th and (y+1)-th letters of a hit to sit in
/// adjacent positions; 0 forces the hit to start at position 1 and k to
/// end at position n.
///
/// Dash notation: letters of pi written in order; a '-' between two letters
/// allows a gap and its absence forces adjacency; a leading '[' anchors the
/// hit at the first position and a trailing ']' at the last. "1-2-3" is the
/// classical pattern 123, "[2-31" is (231, {0, 2}).
class VincularPattern {
 public:
  VincularPattern(const PackedPerm& pattern, std::uint32_t mask);

  static VincularPattern parse_dashed(std::string_view text);
  std::string to_dashed() const;

  const PackedPerm& pattern() const { return pattern_; }
  std::uint32_t mask() const { return mask_; }

  friend bool operator==(const VincularPattern&, const VincularPattern&) = default;

 private:
  PackedPerm pattern_;
  std::uint32_t mask_ = 0;
};

/// Taking inverses swaps positions with values: the vincular hits of
/// (pi, Y) in tau are the covincular hits of (pi^{-1}, Y) in tau^{-1}.
CovincularPattern to_covincular(const VincularPattern& v);
VincularPattern to_vincular(const CovincularPattern& c);

/// Indices i of the recurrence for which P_i = P_{i+1}. P_i counts hits
/// through the i largest letters, so the pattern values that meet at the
/// boundary are k-i and k-i+1: index i passes through when k-i ∈ X.
std::uint32_t covincular_pass_through(const CovincularPattern& p);

/// Covincular profile; lookup as for count_profile.
template <class Lookup>
HitProfile covincular_profile(const PackedPerm& tau, const CovincularPattern& p, Lookup&& lookup);

/// Tally of (pi, X)-hits over S_1 .. S_n, stopping each profile at the
/// first upfix of tau that differs from pi's.
CountTally covincular_count_all(const CovincularPattern& p, int n, std::uint64_t* work = nullptr);

/// Vincular tally over S_1 .. S_n. Inversion permutes each S_m, so this is
/// the covincular tally of the converted pattern.
CountTally vincular_count_all(const VincularPattern& v, int n);

class CovincularDownsetCounter {
 public:
  explicit CovincularDownsetCounter(const CovincularPattern& p);
  ~CovincularDownsetCounter();
  CovincularDownsetCounter(CovincularDownsetCounter&&) noexcept;
  CovincularDownsetCounter& operator=(CovincularDownsetCounter&&) noexcept;

  HitProfile add(const PackedPerm& tau, const PartialInverse& inv);
  HitProfile add(const PackedPerm& tau) { return add(tau, inverse_of(tau)); }
  const CountTally& tally() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CountTally covincular_count_downset(std::vector<PackedPerm> downset, const CovincularPattern& p);

/// Always throws Unsupported: covincular avoiders need not form a downset
/// (1342 avoids (123, {1}), but deleting its 2 leaves st(134) = 123,
/// which contains it), so growing avoiders from shorter avoiders can miss
/// members.
[[noreturn]] void build_covincular_avoiders(const CovincularPattern& p, int n);

// ---------------------------------------------------------------------------

template <class Lookup>
HitProfile covincular_profile(const PackedPerm& tau, const CovincularPattern& p, Lookup&& lookup) {
  const int n = tau.size();
  const int k = p.length();
  const std::uint32_t through = covincular_pass_through(p);
  HitProfile out;
  out.values.assign(static_cast<std::size_t>(k) + 2, 0);
  if (n == 0) return out;
  const PartialInverse inv = inverse_of(tau);
  std::vector<PackedPerm> downs;
  PackedPerm down = delete_max(tau, inv);
  downs.push_back(down);
  for (int i = 1; i < std::min(k + 1, n); ++i) {
    down = delete_down_next_unchecked(tau, down, inv, i);
    downs.push_back(down);
  }
  for (int i = std::min(k, n); i >= 0; --i) {
    const std::uint64_t above = out.values[static_cast<std::size_t>(i) + 1];
    std::uint64_t value;
    if (i == n) {
      value = tau == p.pattern() ? 1 : 0;
    } else if ((through >> i) & 1u) {
      value = above;
    } else {
      const PackedPerm& shorter = downs[static_cast<std::size_t>(i)];
      value = above + (shorter.empty() ? 0 : static_cast<std::uint64_t>(lookup(shorter, i)));
    }
    out.values[static_cast<std::size_t>(i)] = value;
  }
  return out;
}

}  // namespace permpat
