#include "permpat/perm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

namespace permpat {

namespace {

void check_capacity(std::size_t n) {
  if (n > static_cast<std::size_t>(kMaxLength)) {
    throw PermError("permutation of length " + std::to_string(n) +
                    " exceeds word capacity " + std::to_string(kMaxLength));
  }
}

}  // namespace

PackedPerm PackedPerm::from_letters(std::span<const int> letters) {
  check_capacity(letters.size());
  const int n = static_cast<int>(letters.size());
  std::uint32_t seen = 0;
  Word w = 0;
  for (int pos = 1; pos <= n; ++pos) {
    const int v = letters[pos - 1];
    if (v < 1 || v > n) throw PermError("letter " + std::to_string(v) + " outside 1.." + std::to_string(n));
    if (seen & (1u << v)) throw PermError("duplicate letter " + std::to_string(v));
    seen |= 1u << v;
    w = bits::set(w, pos, v);
  }
  return from_word_unchecked(w, n);
}

PackedPerm PackedPerm::from_word(Word word, int length) {
  if (length < 0) throw PermError("negative length");
  check_capacity(static_cast<std::size_t>(length));
  if ((word & ~bits::low_blocks(length)) != 0) throw PermError("nonzero blocks above length");
  std::vector<int> ls(static_cast<std::size_t>(length));
  for (int pos = 1; pos <= length; ++pos) ls[pos - 1] = bits::get(word, pos);
  return from_letters(ls);
}

std::vector<int> PackedPerm::letters() const {
  std::vector<int> out(static_cast<std::size_t>(size_));
  for (int pos = 1; pos <= size_; ++pos) out[pos - 1] = (*this)(pos);
  return out;
}

PackedPerm standardize(std::span<const int> letters) {
  check_capacity(letters.size());
  std::vector<std::size_t> order(letters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return letters[a] < letters[b]; });
  Word w = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (rank > 0 && letters[order[rank]] == letters[order[rank - 1]]) {
      throw PermError("standardize: duplicate letter " + std::to_string(letters[order[rank]]));
    }
    w = bits::set(w, static_cast<int>(order[rank]) + 1, static_cast<int>(rank) + 1);
  }
  return PackedPerm::from_word_unchecked(w, static_cast<int>(letters.size()));
}

PackedPerm delete_down(const PackedPerm& tau, int i) {
  const int n = tau.size();
  if (i < 1 || i > n) throw PermError("delete_down: rank out of range");
  const int removed = n - i + 1;
  int pos = 1;
  while (tau(pos) != removed) ++pos;
  Word w = bits::kill_pos(tau.word(), pos);
  for (int p = 1; p < n; ++p) {
    if (bits::get(w, p) > removed) w -= bits::shl(Word{1}, kBlockBits * (p - 1));
  }
  return PackedPerm::from_word_unchecked(w, n - 1);
}

PackedPerm delete_down_next(const PackedPerm& tau, const PackedPerm& prev,
                            const PartialInverse& inv, int i) {
  const int n = tau.size();
  if (i < 1 || i + 1 > n) throw PermError("delete_down_next: i + 1 exceeds length");
  if (inv.valid_count < i + 1) throw PermError("delete_down_next: inverse not valid deep enough");
  if (prev.size() != n - 1) throw PermError("delete_down_next: predecessor has wrong length");
  return delete_down_next_unchecked(tau, prev, inv, i);
}

PartialInverse inverse_of(const PackedPerm& tau) {
  Word w = 0;
  for (int pos = 1; pos <= tau.size(); ++pos) w = bits::set(w, tau(pos), pos);
  return {w, tau.size()};
}

PackedPerm reverse(const PackedPerm& tau) {
  const int n = tau.size();
  Word w = 0;
  for (int pos = 1; pos <= n; ++pos) w = bits::set(w, n + 1 - pos, tau(pos));
  return PackedPerm::from_word_unchecked(w, n);
}

PackedPerm complement(const PackedPerm& tau) {
  // Each block becomes n+1-x, which never borrows across blocks.
  const int n = tau.size();
  const Word w = static_cast<Word>(n + 1) * bits::ones(n) - tau.word();
  return PackedPerm::from_word_unchecked(w, n);
}

PackedPerm inverse(const PackedPerm& tau) {
  return PackedPerm::from_word_unchecked(inverse_of(tau).word, tau.size());
}

int inversion_count(const PackedPerm& tau) {
  int count = 0;
  for (int a = 1; a <= tau.size(); ++a) {
    for (int b = a + 1; b <= tau.size(); ++b) count += tau(a) > tau(b) ? 1 : 0;
  }
  return count;
}

bool lex_less(const PackedPerm& a, const PackedPerm& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (int pos = 1; pos <= a.size(); ++pos) {
    if (a(pos) != b(pos)) return a(pos) < b(pos);
  }
  return false;
}

PackedPerm parse_perm(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  if (text.empty()) throw PermError("empty permutation text");

  std::vector<int> letters;
  const bool separated = text.find_first_of(" ,\t") != std::string_view::npos;
  if (!separated) {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw PermError("bad permutation text '" + std::string(text) + "'");
      letters.push_back(ch - '0');
    }
  } else {
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] == ' ' || text[i] == ',' || text[i] == '\t') {
        ++i;
        continue;
      }
      int value = 0;
      const auto [end, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
      if (ec != std::errc{}) throw PermError("bad permutation text '" + std::string(text) + "'");
      letters.push_back(value);
      i = static_cast<std::size_t>(end - text.data());
      if (i < text.size() && text[i] != ' ' && text[i] != ',' && text[i] != '\t') {
        throw PermError("bad permutation text '" + std::string(text) + "'");
      }
    }
  }
  return PackedPerm::from_letters(letters);
}

std::string to_string(const PackedPerm& tau) {
  std::string out;
  const int n = tau.size();
  for (int pos = 1; pos <= n; ++pos) {
    if (n <= 9) {
      out.push_back(static_cast<char>('0' + tau(pos)));
    } else {
      if (pos > 1) out.push_back(' ');
      out += std::to_string(tau(pos));
    }
  }
  return out;
}

}  // namespace permpat
