#include "permpat/sequences.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <numeric>

#include <zlib.h>

#include "permpat/avoiders.hpp"
#include "tree_split.hpp"

namespace permpat {

PackedPerm apply_symmetry(int g, const PackedPerm& pi) {
  if (g < 0 || g >= kSymmetryCount) throw std::invalid_argument("symmetry index out of range");
  PackedPerm out = pi;
  if (g & 1) out = inverse(out);
  if (g & 2) out = reverse(out);
  if (g & 4) out = complement(out);
  return out;
}

PatternSet apply_symmetry(int g, const PatternSet& patterns) {
  std::vector<PackedPerm> image;
  image.reserve(patterns.size());
  for (const PackedPerm& pi : patterns.patterns()) image.push_back(apply_symmetry(g, pi));
  return PatternSet(std::move(image));
}

PatternSet canonicalize(const PatternSet& patterns) {
  PatternSet best = patterns;
  for (int g = 1; g < kSymmetryCount; ++g) {
    PatternSet image = apply_symmetry(g, patterns);
    const auto a = image.patterns();
    const auto b = best.patterns();
    if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), lex_less)) best = std::move(image);
  }
  return best;
}

SubsetCodec::SubsetCodec(int k) : k_(k) {
  if (k < 1 || k > 4) throw std::invalid_argument("subset masks need 1 <= k <= 4");
  std::vector<int> letters(static_cast<std::size_t>(k));
  std::iota(letters.begin(), letters.end(), 1);
  std::vector<PackedPerm> by_rank;
  do {
    by_rank.push_back(PackedPerm::from_letters(letters));
  } while (std::next_permutation(letters.begin(), letters.end()));
  perms_.assign(by_rank.rbegin(), by_rank.rend());

  WordMap<int> bit_of;
  for (int b = 0; b < universe(); ++b) bit_of.emplace(perms_[static_cast<std::size_t>(b)].word(), b);
  const int bytes = (universe() + 7) / 8;
  for (int g = 0; g < kSymmetryCount; ++g) {
    std::vector<std::uint32_t> single(static_cast<std::size_t>(universe()));
    for (int b = 0; b < universe(); ++b) {
      single[static_cast<std::size_t>(b)] = std::uint32_t{1} << bit_of.at(apply_symmetry(g, perm(b)).word());
    }
    auto& table = images_[static_cast<std::size_t>(g)];
    table.assign(static_cast<std::size_t>(bytes), {});
    for (int byte = 0; byte < bytes; ++byte) {
      for (int value = 0; value < 256; ++value) {
        std::uint32_t img = 0;
        for (int j = 0; j < 8; ++j) {
          const int b = byte * 8 + j;
          if (((value >> j) & 1) && b < universe()) img |= single[static_cast<std::size_t>(b)];
        }
        table[static_cast<std::size_t>(byte)][static_cast<std::size_t>(value)] = img;
      }
    }
  }
}

PatternSet SubsetCodec::decode(std::uint32_t mask) const {
  std::vector<PackedPerm> out;
  for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
    const int b = std::countr_zero(rest);
    if (b >= universe()) throw std::invalid_argument("mask has bits outside S_k");
    out.push_back(perm(b));
  }
  return PatternSet(std::move(out));
}

std::uint32_t SubsetCodec::encode(const PatternSet& patterns) const {
  std::uint32_t mask = 0;
  for (const PackedPerm& pi : patterns.patterns()) {
    if (pi.size() != k_) throw std::invalid_argument("pattern length differs from codec length");
    for (int b = 0; b < universe(); ++b) {
      if (perm(b) == pi) mask |= std::uint32_t{1} << b;
    }
  }
  return mask;
}

std::uint32_t SubsetCodec::image(int g, std::uint32_t mask) const {
  const auto& table = images_[static_cast<std::size_t>(g)];
  std::uint32_t out = 0;
  for (std::size_t byte = 0; byte < table.size(); ++byte) out |= table[byte][(mask >> (8 * byte)) & 0xffu];
  return out;
}

std::uint32_t SubsetCodec::canonical(std::uint32_t mask) const {
  std::uint32_t best = mask;
  for (int g = 1; g < kSymmetryCount; ++g) best = std::max(best, image(g, mask));
  return best;
}

bool SubsetCodec::is_canonical(std::uint32_t mask) const {
  for (int g = 1; g < kSymmetryCount; ++g) {
    if (image(g, mask) > mask) return false;
  }
  return true;
}

std::uint64_t count_symmetry_classes(int k, int min_size, int max_size) {
  const SubsetCodec codec(k);
  const std::uint64_t limit = std::uint64_t{1} << codec.universe();
  std::uint64_t classes = 0;
  for (std::uint64_t m = 0; m < limit; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    const int size = std::popcount(mask);
    if (size < min_size || size > max_size) continue;
    if (codec.is_canonical(mask)) ++classes;
  }
  return classes;
}

std::string GrowthDegree::to_string() const {
  return degree ? std::to_string(*degree) : std::string("super");
}

GrowthDegree growth_degree(const std::vector<BigInt>& terms, int first_n) {
  constexpr int kFrom = 10;
  constexpr int kMaxDegree = 3;
  const int last_n = first_n + static_cast<int>(terms.size()) - 1;
  if (terms.empty() || last_n < kFrom) {
    throw std::invalid_argument("growth degree needs terms through n = 10");
  }
  if (kFrom - (kMaxDegree + 1) < first_n) {
    throw std::invalid_argument("growth degree needs terms from n = 6 or earlier");
  }
  for (int d = 0; d <= kMaxDegree; ++d) {
    const int order = d + 1;
    bool vanishes = true;
    for (int n = kFrom; n <= last_n && vanishes; ++n) {
      BigInt diff = 0;
      BigInt binom = 1;
      for (int i = 0; i <= order; ++i) {
        const BigInt& term = terms[static_cast<std::size_t>(n - i - first_n)];
        if (i % 2 == 0) {
          diff += binom * term;
        } else {
          diff -= binom * term;
        }
        binom = binom * (order - i) / (i + 1);
      }
      vanishes = diff == 0;
    }
    if (vanishes) return {d};
  }
  return {std::nullopt};
}

// --- OEIS ------------------------------------------------------------------

OeisParseError::OeisParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_anum(std::uint32_t anum) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "A%06u", anum);
  return buf;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Returns false for lines to skip.
bool parse_line(std::string_view line, const std::string& source, std::size_t line_no, OeisEntry& out) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ')) line.remove_suffix(1);
  if (line.empty() || line.front() == '#') return false;
  auto fail = [&](const std::string& what) -> bool { throw OeisParseError(source, line_no, what); };
  if (line.front() != 'A') fail("expected an A-number");
  std::size_t i = 1;
  std::uint64_t anum = 0;
  while (i < line.size() && is_digit(line[i])) {
    anum = anum * 10 + static_cast<std::uint64_t>(line[i] - '0');
    if (anum > 0xffffffffu) fail("A-number too large");
    ++i;
  }
  if (i == 1) fail("expected digits after 'A'");
  out.anum = static_cast<std::uint32_t>(anum);
  out.terms.clear();
  while (i < line.size() && line[i] == ' ') ++i;
  if (i == line.size()) return true;
  if (line[i] != ',') fail("expected ',' after the A-number");
  ++i;
  while (i < line.size()) {
    const std::size_t start = i;
    if (line[i] == '-') ++i;
    const std::size_t digits = i;
    while (i < line.size() && is_digit(line[i])) ++i;
    if (i == digits) fail("malformed term at column " + std::to_string(start + 1));
    out.terms.emplace_back(std::string(line.substr(start, i - start)));
    if (i < line.size()) {
      if (line[i] != ',') fail("unexpected character at column " + std::to_string(i + 1));
      ++i;
    }
  }
  return true;
}

}  // namespace

void OeisDb::add(OeisEntry entry) { entries_.push_back(std::move(entry)); }

OeisDb OeisDb::parse(std::string_view text, const std::string& source) {
  OeisDb db;
  absl::flat_hash_map<std::uint32_t, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    OeisEntry entry;
    if (parse_line(text.substr(pos, end - pos), source, line_no, entry)) {
      if (!seen.emplace(entry.anum, line_no).second) {
        throw OeisParseError(source, line_no, "duplicate " + format_anum(entry.anum));
      }
      db.add(std::move(entry));
    }
    pos = end + 1;
  }
  return db;
}

OeisDb OeisDb::load(const std::string& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw std::runtime_error("cannot open OEIS file " + path);
  std::string text;
  char buf[1 << 16];
  int got = 0;
  while ((got = gzread(file, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(got));
  int err = 0;
  const char* message = got < 0 ? gzerror(file, &err) : nullptr;
  const std::string error_text = message != nullptr ? message : "";
  gzclose(file);
  if (got < 0) throw std::runtime_error("error reading " + path + ": " + error_text);
  return parse(text, path);
}

OeisDb OeisDb::from_entries(std::vector<OeisEntry> entries) {
  OeisDb db;
  absl::flat_hash_map<std::uint32_t, std::size_t> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!seen.emplace(entries[i].anum, i).second) {
      throw std::invalid_argument("duplicate " + format_anum(entries[i].anum));
    }
    db.add(std::move(entries[i]));
  }
  return db;
}

namespace {

// Smallest shift at which `query` matches this entry.
std::optional<int> best_shift(const std::vector<BigInt>& query, const OeisEntry& entry,
                              const MatchOptions& options) {
  const int q = static_cast<int>(query.size());
  const int needed = std::min(options.min_overlap, q);
  for (int s = 0; s <= options.max_shift; ++s) {
    const int overlap = std::min(q, static_cast<int>(entry.terms.size()) - s);
    if (overlap < needed || overlap <= 0) break;
    bool equal = true;
    for (int j = 0; j < overlap && equal; ++j) equal = entry.terms[static_cast<std::size_t>(s + j)] == query[static_cast<std::size_t>(j)];
    if (equal) return s;
  }
  return std::nullopt;
}

std::uint64_t mix64(std::uint64_t x) { return WordHash::mix(x); }

std::uint64_t term_hash(const BigInt& t) {
  static const BigInt kLow = (BigInt(1) << 64) - 1;
  const BigInt magnitude = abs(t);
  const auto low = static_cast<std::uint64_t>(magnitude & kLow);
  const auto bits = static_cast<std::uint64_t>(t.is_zero() ? 0 : msb(magnitude));
  return mix64(low ^ mix64(bits + (t.sign() < 0 ? 0x9e3779b97f4a7c15ULL : 0)));
}

std::uint64_t window_hash(const std::uint64_t* hashes, int length) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (int i = 0; i < length; ++i) h = mix64(h ^ hashes[i]) + 0x9e3779b97f4a7c15ULL;
  return h;
}

}  // namespace

std::optional<OeisMatch> oeis_match(const std::vector<BigInt>& query, const OeisDb& db,
                                    const MatchOptions& options) {
  if (query.empty()) return std::nullopt;
  std::optional<OeisMatch> best;
  for (const OeisEntry& entry : db.entries()) {
    if (best && entry.anum > best->anum) continue;
    if (const auto s = best_shift(query, entry, options)) best = OeisMatch{entry.anum, *s};
  }
  return best;
}

struct OeisMatcher::Impl {
  struct Window {
    std::uint64_t key;
    std::uint32_t entry;
  };

  const OeisDb* db;
  MatchOptions options;
  std::vector<Window> windows;  // sorted by key
};

OeisMatcher::OeisMatcher(const OeisDb& db, MatchOptions options) {
  auto impl = std::make_shared<Impl>();
  impl->db = &db;
  impl->options = options;
  const int length = std::max(options.min_overlap, 1);
  std::vector<std::uint64_t> hashes;
  for (std::size_t e = 0; e < db.entries().size(); ++e) {
    const auto& terms = db.entries()[e].terms;
    hashes.resize(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) hashes[t] = term_hash(terms[t]);
    for (int s = 0; s <= options.max_shift && s + length <= static_cast<int>(terms.size()); ++s) {
      impl->windows.push_back({window_hash(hashes.data() + s, length), static_cast<std::uint32_t>(e)});
    }
  }
  std::sort(impl->windows.begin(), impl->windows.end(),
            [](const Impl::Window& a, const Impl::Window& b) { return a.key < b.key; });
  impl_ = std::move(impl);
}

std::optional<OeisMatch> OeisMatcher::match(const std::vector<BigInt>& query) const {
  const Impl& impl = *impl_;
  const int length = std::max(impl.options.min_overlap, 1);
  // Short queries must fit entirely, which the window index cannot see.
  if (static_cast<int>(query.size()) < length) return oeis_match(query, *impl.db, impl.options);

  std::vector<std::uint64_t> hashes(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) hashes[static_cast<std::size_t>(t)] = term_hash(query[static_cast<std::size_t>(t)]);
  const std::uint64_t key = window_hash(hashes.data(), length);
  auto lo = std::lower_bound(impl.windows.begin(), impl.windows.end(), key,
                             [](const Impl::Window& w, std::uint64_t k) { return w.key < k; });
  std::optional<OeisMatch> best;
  for (; lo != impl.windows.end() && lo->key == key; ++lo) {
    const OeisEntry& entry = impl.db->entries()[lo->entry];
    if (best && entry.anum >= best->anum) continue;
    if (const auto s = best_shift(query, entry, impl.options)) best = OeisMatch{entry.anum, *s};
  }
  return best;
}

// --- mining ----------------------------------------------------------------

std::vector<BigInt> avoider_terms(const PatternSet& patterns, int max_n) {
  std::vector<BigInt> terms;
  if (max_n < 5) return terms;
  const auto counts = count_avoiders_fast(patterns, max_n);
  for (int n = 5; n <= max_n; ++n) terms.emplace_back(counts[static_cast<std::size_t>(n) - 1]);
  return terms;
}

std::vector<MineRow> mine(const MineOptions& options, const OeisDb* db) {
  if (options.max_n < 10) throw std::invalid_argument("mining needs max_n >= 10 for the growth filter");
  if (options.max_n > kMaxLength) {
    throw std::invalid_argument("max_n exceeds word capacity " + std::to_string(kMaxLength));
  }
  const SubsetCodec codec(options.pattern_length);
  const int max_size = options.max_set_size < 0 ? codec.universe() : options.max_set_size;
  std::vector<std::uint32_t> classes;
  const std::uint64_t limit = std::uint64_t{1} << codec.universe();
  for (std::uint64_t m = 1; m < limit; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    const int size = std::popcount(mask);
    if (size >= options.min_set_size && size <= max_size && codec.is_canonical(mask)) classes.push_back(mask);
  }

  std::optional<OeisMatcher> matcher;
  if (db != nullptr) matcher.emplace(*db, options.match);

  std::vector<MineRow> rows(classes.size());
  std::atomic<std::size_t> next{0};
  detail::run_workers(std::max(options.threads, 1), [&](int) {
    for (std::size_t i = next++; i < classes.size(); i = next++) {
      MineRow& row = rows[i];
      row.patterns = codec.decode(classes[i]);
      row.terms = avoider_terms(row.patterns, options.max_n);
      row.degree = growth_degree(row.terms);
      if (row.degree.polynomial()) {
        row.note = "filtered: polynomial growth";
      } else if (matcher) {
        row.match = matcher->match(row.terms);
        if (!row.match) row.note = "no match";
      }
    }
  });
  std::sort(rows.begin(), rows.end(), [](const MineRow& a, const MineRow& b) {
    const auto x = a.patterns.patterns();
    const auto y = b.patterns.patterns();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), lex_less);
  });
  return rows;
}

void write_mine_csv(std::ostream& out, const std::vector<MineRow>& rows) {
  out << "canonical_patterns,terms,degree,oeis_anum,shift\n";
  for (const MineRow& row : rows) {
    out << row.patterns.to_string() << ',';
    for (std::size_t i = 0; i < row.terms.size(); ++i) out << (i ? ";" : "") << row.terms[i];
    out << ',' << row.degree.to_string() << ',';
    if (row.match) {
      out << format_anum(row.match->anum) << ',' << row.match->shift;
    } else if (row.note == "no match") {
      out << "no match,";
    } else {
      out << ',';
    }
    out << '\n';
  }
}

}  // namespace permpat
