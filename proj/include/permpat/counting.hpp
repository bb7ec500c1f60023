#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "permpat/pattern_set.hpp"
#include "permpat/perm.hpp"

namespace permpat {

/// A P_i lookup asked for a permutation that was never processed: the
/// input was not closed under deletion.
class ClosureViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P_0 .. P_{k+1} for one permutation: P_i counts the hits that use all of
/// the i largest letters, so P_0 is the total hit count.
struct HitProfile {
  std::vector<std::uint64_t> values;

  std::uint64_t operator[](int i) const {
    return i < static_cast<int>(values.size()) ? values[static_cast<std::size_t>(i)] : 0;
  }
  std::uint64_t hits() const { return (*this)[0]; }

  friend bool operator==(const HitProfile&, const HitProfile&) = default;
};

/// For each length, how many permutations have each hit count.
class CountTally {
 public:
  struct Row {
    int length;
    std::uint64_t hits;
    std::uint64_t multiplicity;
    friend bool operator==(const Row&, const Row&) = default;
  };

  explicit CountTally(int max_length = 0) : levels_(static_cast<std::size_t>(max_length) + 1) {}

  int max_length() const { return static_cast<int>(levels_.size()) - 1; }

  void add(int length, std::uint64_t hits, std::uint64_t multiplicity = 1);
  void merge(const CountTally& other);

  /// hits -> multiplicity at one length (empty when out of range).
  const std::map<std::uint64_t, std::uint64_t>& level(int length) const;

  std::uint64_t permutations(int length) const;
  std::uint64_t total_hits(int length) const;
  std::uint64_t with_hits(int length, std::uint64_t hits) const;

  /// Rows ordered by (length, hits).
  std::vector<Row> rows() const;

  friend bool operator==(const CountTally& a, const CountTally& b) { return a.rows() == b.rows(); }

 private:
  std::vector<std::map<std::uint64_t, std::uint64_t>> levels_;
};

/// Profile of tau by the recurrence
///   P_i = P_{i+1}(tau) + P_i(tau↓_{i+1})  for i < n, i <= k
///   P_n = [tau ∈ Π],  otherwise 0.
/// lookup(shorter, i) must return P_i of a shorter permutation; it may
/// throw ClosureViolation. The empty permutation is answered internally.
template <class Lookup>
HitProfile count_profile(const PackedPerm& tau, const PatternSet& patterns, Lookup&& lookup);

/// Tally of P_0 over S_1 .. S_n. With `prune`, P_i is only evaluated while
/// the i-upfix of tau is still an i-upfix of some pattern, which leaves the
/// counts unchanged. `work` receives the number of P entries evaluated.
CountTally count_all(const PatternSet& patterns, int n, bool prune = true,
                     std::uint64_t* work = nullptr);

/// Counts hits over a downset streamed in nondecreasing length. Only the
/// previous length's profiles are retained.
class DownsetCounter {
 public:
  explicit DownsetCounter(const PatternSet& patterns, bool prune = true);
  ~DownsetCounter();
  DownsetCounter(DownsetCounter&&) noexcept;
  DownsetCounter& operator=(DownsetCounter&&) noexcept;

  /// inv must be valid for the k+1 largest letters of tau (or all of them).
  /// Throws ClosureViolation if some needed deletion of tau was not added
  /// earlier, and std::invalid_argument if lengths go backwards.
  HitProfile add(const PackedPerm& tau, const PartialInverse& inv);
  HitProfile add(const PackedPerm& tau) { return add(tau, inverse_of(tau)); }

  const CountTally& tally() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: sorts by length and feeds a DownsetCounter.
CountTally count_downset(std::vector<PackedPerm> downset, const PatternSet& patterns);

struct ProfiledPerm {
  PackedPerm perm;
  HitProfile profile;
};

/// All permutations of length 1..n with at most `budget` hits, grown
/// breadth first; a candidate's profile is kept only if it is accepted.
/// Element m-1 holds length m, sorted in lex order.
std::vector<std::vector<ProfiledPerm>> build_bounded_hits(const PatternSet& patterns, int n,
                                                          std::uint64_t budget);

/// Single-pattern tally that stops evaluating P_i at the first upfix of tau
/// that disagrees with the pattern's upfix. `work` as in count_all.
CountTally count_single_fast(const PackedPerm& pattern, int n, std::uint64_t* work = nullptr);

struct CountLowmemStats {
  /// Largest number of stored profile entries (values) alive at once,
  /// summed over workers.
  std::uint64_t peak_live_entries = 0;
};

/// Same tally as count_all, depth first over the inclusion tree so that
/// only profiles along one root-to-leaf path are stored.
CountTally count_all_lowmem(const PatternSet& patterns, int n, CountLowmemStats* stats = nullptr,
                            int threads = 1);

// ---------------------------------------------------------------------------

template <class Lookup>
HitProfile count_profile(const PackedPerm& tau, const PatternSet& patterns, Lookup&& lookup) {
  const int n = tau.size();
  const int k = patterns.max_length();
  HitProfile out;
  out.values.assign(static_cast<std::size_t>(k) + 2, 0);
  const PartialInverse inv = inverse_of(tau);
  std::vector<PackedPerm> downs;
  const int top = std::min(k, n);
  if (n > 0) {
    PackedPerm down = delete_max(tau, inv);
    downs.push_back(down);
    for (int i = 1; i < std::min(k + 1, n); ++i) {
      down = delete_down_next_unchecked(tau, down, inv, i);
      downs.push_back(down);
    }
  }
  for (int i = top; i >= 0; --i) {
    std::uint64_t value = 0;
    if (i == n) {
      value = patterns.contains(tau) ? 1 : 0;
    } else {
      const PackedPerm& shorter = downs[static_cast<std::size_t>(i)];
      const std::uint64_t below = shorter.empty() ? 0 : static_cast<std::uint64_t>(lookup(shorter, i));
      value = out.values[static_cast<std::size_t>(i) + 1] + below;
    }
    out.values[static_cast<std::size_t>(i)] = value;
  }
  return out;
}

}  // namespace permpat
