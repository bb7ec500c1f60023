#include "permpat/vincular.hpp"

#include <algorithm>
#include <charconv>

#include "profile_engine.hpp"

namespace permpat {

namespace {

std::uint32_t checked_mask(const PackedPerm& pattern, std::uint32_t mask) {
  if (pattern.empty()) throw PermError("empty pattern");
  const int k = pattern.size();
  if (k + 1 < 32 && (mask >> (k + 1)) != 0) {
    throw PermError("adjacency constraint outside 0.." + std::to_string(k));
  }
  return mask;
}

}  // namespace

CovincularPattern::CovincularPattern(const PackedPerm& pattern, std::span<const int> constrained)
    : pattern_(pattern) {
  if (pattern.empty()) throw PermError("empty pattern");
  for (int x : constrained) {
    if (x < 0 || x > pattern.size()) {
      throw PermError("adjacency constraint " + std::to_string(x) + " outside 0.." +
                      std::to_string(pattern.size()));
    }
    mask_ |= std::uint32_t{1} << x;
  }
}

CovincularPattern::CovincularPattern(const PackedPerm& pattern, std::uint32_t mask)
    : pattern_(pattern), mask_(checked_mask(pattern, mask)) {}

CovincularPattern CovincularPattern::parse(std::string_view pattern, std::string_view adjacencies) {
  std::vector<int> xs;
  std::size_t i = 0;
  while (i < adjacencies.size()) {
    const char c = adjacencies[i];
    if (c == ',' || c == ' ' || c == '{' || c == '}') {
      ++i;
      continue;
    }
    int value = 0;
    const auto [end, ec] = std::from_chars(adjacencies.data() + i, adjacencies.data() + adjacencies.size(), value);
    if (ec != std::errc{}) throw PermError("bad adjacency list '" + std::string(adjacencies) + "'");
    xs.push_back(value);
    i = static_cast<std::size_t>(end - adjacencies.data());
  }
  return CovincularPattern(parse_perm(pattern), xs);
}

std::vector<int> CovincularPattern::constraints() const {
  std::vector<int> out;
  for (int x = 0; x <= length(); ++x) {
    if (constrained(x)) out.push_back(x);
  }
  return out;
}

std::string CovincularPattern::to_string() const {
  std::string out = "(" + permpat::to_string(pattern_) + ",{";
  bool first = true;
  for (int x : constraints()) {
    if (!first) out.push_back(',');
    out += std::to_string(x);
    first = false;
  }
  return out + "})";
}

VincularPattern::VincularPattern(const PackedPerm& pattern, std::uint32_t mask)
    : pattern_(pattern), mask_(checked_mask(pattern, mask)) {}

VincularPattern VincularPattern::parse_dashed(std::string_view text) {
  std::vector<int> letters;
  std::uint32_t mask = 0;
  bool gap = true;  // before the first letter nothing is adjacent
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') {
      if (i != 0) throw PermError("'[' must open a dashed pattern");
      mask |= 1u;
    } else if (c == ']') {
      if (i + 1 != text.size()) throw PermError("']' must close a dashed pattern");
      if (letters.empty()) throw PermError("']' without letters");
      mask |= std::uint32_t{1} << letters.size();
    } else if (c == '-') {
      if (letters.empty() || gap) throw PermError("misplaced '-' in '" + std::string(text) + "'");
      gap = true;
    } else if (c >= '1' && c <= '9') {
      if (!letters.empty() && !gap) mask |= std::uint32_t{1} << letters.size();
      letters.push_back(c - '0');
      gap = false;
    } else {
      throw PermError("bad dashed pattern '" + std::string(text) + "'");
    }
  }
  if (letters.empty()) throw PermError("empty dashed pattern");
  if (gap) throw PermError("dashed pattern ends with '-'");
  return VincularPattern(PackedPerm::from_letters(letters), mask);
}

std::string VincularPattern::to_dashed() const {
  const int k = pattern_.size();
  if (k > 9) throw PermError("dash notation needs single-digit letters");
  std::string out;
  if (mask_ & 1u) out.push_back('[');
  for (int y = 1; y <= k; ++y) {
    if (y > 1 && !((mask_ >> (y - 1)) & 1u)) out.push_back('-');
    out.push_back(static_cast<char>('0' + pattern_(y)));
  }
  if ((mask_ >> k) & 1u) out.push_back(']');
  return out;
}

CovincularPattern to_covincular(const VincularPattern& v) {
  return CovincularPattern(inverse(v.pattern()), v.mask());
}

VincularPattern to_vincular(const CovincularPattern& c) {
  return VincularPattern(inverse(c.pattern()), c.mask());
}

std::uint32_t covincular_pass_through(const CovincularPattern& p) {
  const int k = p.length();
  std::uint32_t through = 0;
  for (int i = 0; i <= k; ++i) {
    if (p.constrained(k - i)) through |= std::uint32_t{1} << i;
  }
  return through;
}

CountTally covincular_count_all(const CovincularPattern& p, int n, std::uint64_t* work) {
  if (n < 1 || n > kMaxLength) throw PermError("target length out of range");
  return detail::tally_levels(detail::SingleRule(p.pattern(), covincular_pass_through(p), true), n, work);
}

CountTally vincular_count_all(const VincularPattern& v, int n) {
  return covincular_count_all(to_covincular(v), n);
}

struct CovincularDownsetCounter::Impl {
  detail::DownsetEngine<detail::SingleRule> engine;
  explicit Impl(const CovincularPattern& p)
      : engine(detail::SingleRule(p.pattern(), covincular_pass_through(p), true)) {}
};

CovincularDownsetCounter::CovincularDownsetCounter(const CovincularPattern& p)
    : impl_(std::make_unique<Impl>(p)) {}
CovincularDownsetCounter::~CovincularDownsetCounter() = default;
CovincularDownsetCounter::CovincularDownsetCounter(CovincularDownsetCounter&&) noexcept = default;
CovincularDownsetCounter& CovincularDownsetCounter::operator=(CovincularDownsetCounter&&) noexcept = default;

HitProfile CovincularDownsetCounter::add(const PackedPerm& tau, const PartialInverse& inv) {
  return impl_->engine.add(tau, inv);
}

const CountTally& CovincularDownsetCounter::tally() const { return impl_->engine.tally(); }

CountTally covincular_count_downset(std::vector<PackedPerm> downset, const CovincularPattern& p) {
  std::stable_sort(downset.begin(), downset.end(),
                   [](const PackedPerm& a, const PackedPerm& b) { return a.size() < b.size(); });
  CovincularDownsetCounter counter(p);
  for (const PackedPerm& tau : downset) counter.add(tau);
  return counter.tally();
}

void build_covincular_avoiders(const CovincularPattern& p, int) {
  throw Unsupported("building avoiders of the covincular pattern " + p.to_string() +
                    " is unsupported: its avoiders are not closed under deletion");
}

}  // namespace permpat
