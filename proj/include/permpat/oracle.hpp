#pragma once

#include <cstdint>
#include <span>

#include "permpat/pattern_set.hpp"
#include "permpat/perm.hpp"

// Generate-and-check reference implementations. Subsequences are grown from
// the largest letter down, pruning any partial subsequence whose
// standardization is not an upfix of some pattern. Nothing here uses the
// dynamic-programming machinery, so these serve as ground truth.

namespace permpat {

struct OracleStats {
  /// Number of candidate subsequences examined.
  std::uint64_t subsequences = 0;
};

bool oracle_contains(const PackedPerm& tau, const PatternSet& patterns,
                     OracleStats* stats = nullptr);

/// Exact number of (pattern, subsequence) hits.
std::uint64_t oracle_count_hits(const PackedPerm& tau, const PatternSet& patterns,
                                OracleStats* stats = nullptr);

/// Covincular hits of (pi, X) in tau by plain enumeration of |pi|-subsets.
/// Bit x of `adjacency` set means x is in X: for 1 <= x < k the letters
/// playing x and x+1 are consecutive values in tau, 0 pins the hit's
/// minimum to 1 and k pins its maximum to n.
std::uint64_t oracle_count_covincular(const PackedPerm& tau, const PackedPerm& pi,
                                      std::uint32_t adjacency);

/// Vincular (position-adjacency) hits: bit y of `adjacency` for 1 <= y < k
/// forces positions of the y-th and (y+1)-th hit letters to be adjacent;
/// 0 forces the hit to start at position 1 and k to end at position n.
std::uint64_t oracle_count_vincular(const PackedPerm& tau, const PackedPerm& pi,
                                    std::uint32_t adjacency);

}  // namespace permpat
