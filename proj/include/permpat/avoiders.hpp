#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "permpat/pattern_set.hpp"
#include "permpat/perm.hpp"

namespace permpat {

/// Bit map over the n+1 insertion slots of a length-n permutation. Slot i
/// (1-based) lives in bit i-1; for the avoider map it is set exactly when
/// inserting n+1 at position i keeps the permutation Π-avoiding.
struct ExtensionMap {
  ExtBits bits = 0;
  int width = 0;

  bool bit(int slot) const { return (bits >> (slot - 1)) & 1u; }
  int count() const;

  /// Slot 1 first, e.g. "110".
  std::string to_string() const;

  friend bool operator==(const ExtensionMap&, const ExtensionMap&) = default;
};

/// Re-index the map of st(tau with the letter at position p removed) onto
/// the slots of tau: slots 1..p keep their bit and slots p+1.. take the bit
/// one to their left. This is the map that ignores the removed letter.
ExtensionMap spread_extension_map(const ExtensionMap& shorter, int p);

/// tau ∉ Π and tau↓_i ∈ known for i = 1..min(k+1, n). `known` must contain
/// every avoider of length n-1 (other lengths may be present too); the
/// empty permutation always counts as known. With `upfix_exit`, once
/// tau↓_1..tau↓_i all pass and st(i-upfix) is no pattern's i-upfix, the
/// remaining deletions are skipped: every hit would have to contain the
/// whole i-upfix.
bool detect_avoider(const PackedPerm& tau, const PatternSet& patterns, const WordSet& known,
                    bool upfix_exit = false);

/// Optional downset restriction for the basic builder. Must describe a
/// downset (closed under deletion followed by standardization).
using DownsetFilter = std::function<bool(const PackedPerm&)>;

/// Avoiders of each length 1..n (element m-1 holds length m), found by a
/// breadth-first search that extends each avoider by every insertion and
/// keeps the ones detect_avoider accepts. Each level is sorted in
/// lex order.
std::vector<std::vector<PackedPerm>> build_avoiders_basic(const PatternSet& patterns, int n,
                                                          const DownsetFilter& filter = {},
                                                          bool upfix_exit = false);

/// |S_1(Π)| .. |S_n(Π)| via extension maps. Level n is counted with popcount
/// and never materialized.
std::vector<std::uint64_t> count_avoiders_fast(const PatternSet& patterns, int n);

/// Called once per avoider, levels in increasing length, any order within a
/// level. At length n the map is not computed and has width 0.
using AvoiderSink = std::function<void(const PackedPerm&, const ExtensionMap&)>;

void enumerate_avoiders_fast(const PatternSet& patterns, int n, const AvoiderSink& sink);

struct LowmemStats {
  /// Largest number of extension maps held at once (per worker, summed
  /// over workers).
  std::uint64_t peak_live_maps = 0;
};

/// Same counts as count_avoiders_fast, walking the inclusion tree depth
/// first so only the maps along one root-to-leaf path are alive. With
/// threads > 1 the subtrees below a fixed depth are shared out among
/// workers; the result does not depend on the thread count.
std::vector<std::uint64_t> count_avoiders_lowmem(const PatternSet& patterns, int n,
                                                 LowmemStats* stats = nullptr, int threads = 1);

}  // namespace permpat
