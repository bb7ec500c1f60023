#include "permpat/pattern_set.hpp"

#include <algorithm>

namespace permpat {

PackedPerm upfix_of(const PackedPerm& tau, int i) {
  const int n = tau.size();
  std::vector<int> kept;
  for (int pos = 1; pos <= n; ++pos) {
    if (tau(pos) > n - i) kept.push_back(tau(pos));
  }
  return standardize(kept);
}

PatternSet::PatternSet(std::vector<PackedPerm> patterns) : patterns_(std::move(patterns)) {
  std::sort(patterns_.begin(), patterns_.end(), lex_less);
  for (std::size_t a = 0; a < patterns_.size(); ++a) {
    if (patterns_[a].empty()) throw PermError("empty pattern");
    if (a > 0 && patterns_[a] == patterns_[a - 1]) {
      throw PermError("duplicate pattern " + permpat::to_string(patterns_[a]));
    }
    max_length_ = std::max(max_length_, patterns_[a].size());
    members_.insert(patterns_[a].word());
  }
  upfixes_.resize(static_cast<std::size_t>(max_length_) + 1);
  for (const PackedPerm& pi : patterns_) {
    for (int i = 0; i <= pi.size(); ++i) {
      upfixes_[static_cast<std::size_t>(i)].insert(upfix_of(pi, i).word());
    }
  }
}

PatternSet PatternSet::parse(std::string_view text) {
  std::vector<PackedPerm> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == ',' || c == '\t' || c == '\n'; };
  while (i < text.size()) {
    if (is_sep(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    if (text[i] == '[') {
      end = text.find(']', i);
      if (end == std::string_view::npos) throw PermError("unterminated '[' in pattern list");
      ++end;
    } else {
      while (end < text.size() && !is_sep(text[end])) ++end;
    }
    out.push_back(parse_perm(text.substr(i, end - i)));
    i = end;
  }
  return PatternSet(std::move(out));
}

std::string PatternSet::to_string() const {
  std::string out;
  for (const PackedPerm& p : patterns_) {
    if (!out.empty()) out.push_back(' ');
    out += p.size() <= 9 ? permpat::to_string(p) : "[" + permpat::to_string(p) + "]";
  }
  return out;
}

}  // namespace permpat
