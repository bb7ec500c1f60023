#pragma once

#include <algorithm>
#include <cstdint>

// Word layout. The default build packs one letter per 4-bit nibble of a
// 64-bit integer (letters 1..15). Defining PERMPAT_WIDE_WORD switches to
// one letter per byte of a 128-bit integer, which admits n = 16.

namespace permpat {

#if defined(PERMPAT_WIDE_WORD) && PERMPAT_WIDE_WORD
using Word = unsigned __int128;
inline constexpr int kBlockBits = 8;
#else
using Word = std::uint64_t;
inline constexpr int kBlockBits = 4;
#endif

inline constexpr int kWordBits = static_cast<int>(sizeof(Word) * 8);

/// Longest permutation that fits: limited both by the number of blocks
/// and by the largest letter a block can hold.
inline constexpr int kMaxLength =
    std::min(kWordBits / kBlockBits, (1 << kBlockBits) - 1);

/// Extension maps have one bit per insertion slot, so n + 1 <= 17 bits.
using ExtBits = std::uint32_t;

static_assert(kMaxLength + 1 <= 32, "extension maps must fit in ExtBits");

}  // namespace permpat
