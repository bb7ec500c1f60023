#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "permpat/pattern_set.hpp"
#include "permpat/perm.hpp"

namespace permpat {

using BigInt = boost::multiprecision::cpp_int;

// --- symmetries of the square --------------------------------------------

/// The eight symmetries, encoded as bit 0 = inverse, bit 1 = reverse,
/// bit 2 = complement, applied in that order.
inline constexpr int kSymmetryCount = 8;

PackedPerm apply_symmetry(int g, const PackedPerm& pi);
PatternSet apply_symmetry(int g, const PatternSet& patterns);

/// The image of Π that is least when each image is listed in lex order and
/// the lists are compared lexicographically.
PatternSet canonicalize(const PatternSet& patterns);

/// Subsets of S_k (k <= 4) as bit masks. The bit of pi is k! - 1 - (lex
/// rank of pi), which makes the numerically largest mask of a class the one
/// canonicalize picks.
class SubsetCodec {
 public:
  explicit SubsetCodec(int k);

  int k() const { return k_; }
  int universe() const { return static_cast<int>(perms_.size()); }
  const PackedPerm& perm(int bit) const { return perms_[static_cast<std::size_t>(bit)]; }

  PatternSet decode(std::uint32_t mask) const;
  std::uint32_t encode(const PatternSet& patterns) const;

  std::uint32_t image(int g, std::uint32_t mask) const;
  std::uint32_t canonical(std::uint32_t mask) const;
  bool is_canonical(std::uint32_t mask) const;

 private:
  int k_;
  std::vector<PackedPerm> perms_;
  // Byte-wise lookup: images_[g][byte][value] is the image of those 8 bits.
  std::array<std::vector<std::array<std::uint32_t, 256>>, kSymmetryCount> images_;
};

/// Number of symmetry classes among the subsets of S_k whose size lies in
/// [min_size, max_size].
std::uint64_t count_symmetry_classes(int k, int min_size, int max_size);

// --- growth ----------------------------------------------------------------

/// A degree in 0..3, or nothing for faster-than-cubic growth.
struct GrowthDegree {
  std::optional<int> degree;

  bool polynomial() const { return degree.has_value(); }
  /// "0".."3" or "super".
  std::string to_string() const;
  friend bool operator==(const GrowthDegree&, const GrowthDegree&) = default;
};

/// terms[j] is the value at n = first_n + j. The degree is the smallest
/// d <= 3 whose (d+1)-th backward difference vanishes at every n >= 10; a
/// sequence of degree d has a constant d-th difference from there on.
/// Throws std::invalid_argument if the terms stop before n = 10.
GrowthDegree growth_degree(const std::vector<BigInt>& terms, int first_n = 5);

// --- OEIS ------------------------------------------------------------------

class OeisParseError : public std::runtime_error {
 public:
  OeisParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct OeisEntry {
  std::uint32_t anum = 0;
  std::vector<BigInt> terms;
};

struct OeisMatch {
  std::uint32_t anum = 0;
  int shift = 0;
  friend bool operator==(const OeisMatch&, const OeisMatch&) = default;
};

/// "A000045" style label.
std::string format_anum(std::uint32_t anum);

class OeisDb {
 public:
  OeisDb() = default;

  /// Reads an OEIS "stripped" file, plain or gzip-compressed. Lines look
  /// like "A000045 ,0,1,1,2,3,5," and lines starting with '#' are skipped.
  static OeisDb load(const std::string& path);
  static OeisDb parse(std::string_view text, const std::string& source = "<memory>");
  static OeisDb from_entries(std::vector<OeisEntry> entries);

  const std::vector<OeisEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  void add(OeisEntry entry);

  std::vector<OeisEntry> entries_;
};

struct MatchOptions {
  int max_shift = 14;
  int min_overlap = 8;
};

/// Smallest A-number (then smallest shift s <= max_shift) whose terms from
/// offset s agree with the query over their whole overlap, where the overlap
/// min(|query|, |entry| - s) must be at least min(min_overlap, |query|).
std::optional<OeisMatch> oeis_match(const std::vector<BigInt>& query, const OeisDb& db,
                                    const MatchOptions& options = {});

/// Reusable index over all (entry, shift) windows for repeated queries.
/// Gives the same answers as oeis_match. The db must outlive the matcher.
class OeisMatcher {
 public:
  OeisMatcher(const OeisDb& db, MatchOptions options = {});
  std::optional<OeisMatch> match(const std::vector<BigInt>& query) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// --- mining ----------------------------------------------------------------

struct MineOptions {
  int pattern_length = 4;
  int min_set_size = 1;
  int max_set_size = -1;  // -1: all of S_k
  int max_n = 16;
  MatchOptions match;
  int threads = 1;
};

struct MineRow {
  PatternSet patterns;        // canonical representative
  std::vector<BigInt> terms;  // |S_5(Π)| .. |S_max_n(Π)|
  GrowthDegree degree;
  std::optional<OeisMatch> match;  // only looked up for superpolynomial rows
  // "filtered: polynomial growth", "no match" after a failed lookup, or empty
  std::string note;
};

/// One row per symmetry class of Π ⊆ S_k with the requested sizes, sorted
/// by canonical pattern list. Needs max_n >= 10; db may be null.
std::vector<MineRow> mine(const MineOptions& options, const OeisDb* db);

/// Header plus one CSV line per row. The A-number column reads "no match"
/// when a lookup found nothing and is empty when none was made.
void write_mine_csv(std::ostream& out, const std::vector<MineRow>& rows);

/// |S_5(Π)| .. |S_max_n(Π)| as exact integers.
std::vector<BigInt> avoider_terms(const PatternSet& patterns, int max_n);

}  // namespace permpat
