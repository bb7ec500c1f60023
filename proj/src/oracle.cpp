#include "permpat/oracle.hpp"

#include <algorithm>
#include <vector>

namespace permpat {

namespace {

class SubsequenceSearch {
 public:
  SubsequenceSearch(const PackedPerm& tau, const PatternSet& patterns, bool stop_on_first,
                    OracleStats* stats)
      : patterns_(patterns), stop_on_first_(stop_on_first), stats_(stats) {
    const int n = tau.size();
    position_of_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int pos = 1; pos <= n; ++pos) position_of_[static_cast<std::size_t>(tau(pos))] = pos;
  }

  std::uint64_t run() {
    if (!patterns_.empty()) grow(static_cast<int>(position_of_.size()) - 1);
    return hits_;
  }

 private:
  // Candidate letters are taken in decreasing value, so the newest letter is
  // always the smallest of the partial subsequence.
  void grow(int max_value) {
    const int depth = static_cast<int>(chosen_.size());
    for (int v = max_value; v >= 1; --v) {
      const int pos = position_of_[static_cast<std::size_t>(v)];
      const auto at = std::lower_bound(chosen_.begin(), chosen_.end(), pos) - chosen_.begin();
      for (int& letter : shape_) ++letter;
      chosen_.insert(chosen_.begin() + at, pos);
      shape_.insert(shape_.begin() + at, 1);
      if (stats_ != nullptr) ++stats_->subsequences;

      Word key = 0;
      for (std::size_t i = 0; i < shape_.size(); ++i) key = bits::set(key, static_cast<int>(i) + 1, shape_[i]);
      if (patterns_.is_upfix(depth + 1, key)) {
        if (patterns_.contains_word(key)) ++hits_;
        if (!(stop_on_first_ && hits_ > 0) && depth + 1 < patterns_.max_length()) grow(v - 1);
      }

      chosen_.erase(chosen_.begin() + at);
      shape_.erase(shape_.begin() + at);
      for (int& letter : shape_) --letter;
      if (stop_on_first_ && hits_ > 0) return;
    }
  }

  const PatternSet& patterns_;
  bool stop_on_first_;
  OracleStats* stats_;
  std::vector<int> position_of_;
  std::vector<int> chosen_;  // positions, ascending
  std::vector<int> shape_;   // standardization of the chosen letters
  std::uint64_t hits_ = 0;
};

// Calls visit(positions) for every k-subset of {1..n}, positions ascending.
template <class Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  std::vector<int> pos(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(i)] = i + 1;
  if (k > n) return;
  while (true) {
    visit(pos);
    int i = k - 1;
    while (i >= 0 && pos[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) return;
    ++pos[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j) - 1] + 1;
  }
}

bool order_isomorphic(const PackedPerm& tau, const std::vector<int>& pos, const PackedPerm& pi) {
  const int k = pi.size();
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const bool host = tau(pos[static_cast<std::size_t>(a)]) < tau(pos[static_cast<std::size_t>(b)]);
      if (host != (pi(a + 1) < pi(b + 1))) return false;
    }
  }
  return true;
}

}  // namespace

bool oracle_contains(const PackedPerm& tau, const PatternSet& patterns, OracleStats* stats) {
  return SubsequenceSearch(tau, patterns, true, stats).run() > 0;
}

std::uint64_t oracle_count_hits(const PackedPerm& tau, const PatternSet& patterns,
                                OracleStats* stats) {
  return SubsequenceSearch(tau, patterns, false, stats).run();
}

std::uint64_t oracle_count_covincular(const PackedPerm& tau, const PackedPerm& pi,
                                      std::uint32_t adjacency) {
  const int n = tau.size();
  const int k = pi.size();
  if (k == 0) return 1;
  std::uint64_t hits = 0;
  std::vector<int> value_of_rank(static_cast<std::size_t>(k) + 1);
  for_each_subset(n, k, [&](const std::vector<int>& pos) {
    if (!order_isomorphic(tau, pos, pi)) return;
    // value_of_rank[r] = host letter playing pattern value r
    for (int a = 0; a < k; ++a) value_of_rank[static_cast<std::size_t>(pi(a + 1))] = tau(pos[static_cast<std::size_t>(a)]);
    if ((adjacency & 1u) && value_of_rank[1] != 1) return;
    if ((adjacency >> k & 1u) && value_of_rank[static_cast<std::size_t>(k)] != n) return;
    for (int x = 1; x < k; ++x) {
      if ((adjacency >> x & 1u) &&
          value_of_rank[static_cast<std::size_t>(x) + 1] != value_of_rank[static_cast<std::size_t>(x)] + 1) {
        return;
      }
    }
    ++hits;
  });
  return hits;
}

std::uint64_t oracle_count_vincular(const PackedPerm& tau, const PackedPerm& pi,
                                    std::uint32_t adjacency) {
  const int n = tau.size();
  const int k = pi.size();
  if (k == 0) return 1;
  std::uint64_t hits = 0;
  for_each_subset(n, k, [&](const std::vector<int>& pos) {
    if (!order_isomorphic(tau, pos, pi)) return;
    if ((adjacency & 1u) && pos.front() != 1) return;
    if ((adjacency >> k & 1u) && pos.back() != n) return;
    for (int y = 1; y < k; ++y) {
      if ((adjacency >> y & 1u) && pos[static_cast<std::size_t>(y)] != pos[static_cast<std::size_t>(y) - 1] + 1) return;
    }
    ++hits;
  });
  return hits;
}

}  // namespace permpat
