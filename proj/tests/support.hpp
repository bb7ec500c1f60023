#pragma once

// Test-only reference code. Everything here works on plain letter vectors
// and touches the library only to convert at the edges.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "permpat/pattern_set.hpp"
#include "permpat/perm.hpp"

namespace testsupport {

using Letters = std::vector<int>;

inline Letters naive_standardize(const Letters& w) {
  Letters order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
  Letters out(w.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = static_cast<int>(r) + 1;
  return out;
}

inline std::vector<Letters> all_letters(int m) {
  std::vector<Letters> out;
  Letters p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 1);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<permpat::PackedPerm> all_perms(int m) {
  std::vector<permpat::PackedPerm> out;
  for (const auto& p : all_letters(m)) out.push_back(permpat::PackedPerm::from_letters(p));
  return out;
}

// Calls fn on every sorted index set of size k drawn from 0..n-1.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int j = k - 1;
    while (j >= 0 && idx[j] == n - k + j) --j;
    if (j < 0) return;
    ++idx[j];
    for (int t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

// Hits of pi in tau that include every letter > n - top (the top-i letters).
inline std::uint64_t naive_hits(const Letters& tau, const Letters& pi, int top = 0) {
  const int n = static_cast<int>(tau.size());
  const int k = static_cast<int>(pi.size());
  std::uint64_t hits = 0;
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    int big = 0;
    Letters sub;
    for (int i : idx) {
      sub.push_back(tau[i]);
      if (tau[i] > n - top) ++big;
    }
    if (big == top && naive_standardize(sub) == pi) ++hits;
  });
  return hits;
}

inline std::uint64_t naive_hits(const Letters& tau, const std::vector<Letters>& patterns, int top = 0) {
  std::uint64_t total = 0;
  for (const auto& pi : patterns) total += naive_hits(tau, pi, top);
  return total;
}

// Covincular: pattern values x and x+1 (x in X) adjacent in value, 0 and k
// pinning the minimum to 1 and the maximum to n.
inline std::uint64_t naive_covincular(const Letters& tau, const Letters& pi, const std::vector<int>& xs) {
  const int n = static_cast<int>(tau.size());
  const int k = static_cast<int>(pi.size());
  std::uint64_t hits = 0;
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    Letters sub;
    for (int i : idx) sub.push_back(tau[i]);
    if (naive_standardize(sub) != pi) return;
    Letters sorted = sub;
    std::sort(sorted.begin(), sorted.end());
    for (int x : xs) {
      if (x == 0 && sorted.front() != 1) return;
      if (x == k && sorted.back() != n) return;
      if (x > 0 && x < k && sorted[x] != sorted[x - 1] + 1) return;
    }
    ++hits;
  });
  return hits;
}

// Vincular: positions of hit letters y and y+1 adjacent, 0 and k anchoring.
inline std::uint64_t naive_vincular(const Letters& tau, const Letters& pi, const std::vector<int>& ys) {
  const int n = static_cast<int>(tau.size());
  const int k = static_cast<int>(pi.size());
  std::uint64_t hits = 0;
  for_each_subset(n, k, [&](const std::vector<int>& idx) {
    Letters sub;
    for (int i : idx) sub.push_back(tau[i]);
    if (naive_standardize(sub) != pi) return;
    for (int y : ys) {
      if (y == 0 && idx.front() != 0) return;
      if (y == k && idx.back() != n - 1) return;
      if (y > 0 && y < k && idx[y] != idx[y - 1] + 1) return;
    }
    ++hits;
  });
  return hits;
}

inline std::vector<Letters> letters_of(const permpat::PatternSet& patterns) {
  std::vector<Letters> out;
  for (const auto& p : patterns.patterns()) out.push_back(p.letters());
  return out;
}

// Random nonempty subset of S_k, each permutation kept with probability q.
inline permpat::PatternSet random_subset(std::mt19937_64& rng, int k, double q = 0.5) {
  const auto perms = all_perms(k);
  std::bernoulli_distribution keep(q);
  std::vector<permpat::PackedPerm> chosen;
  while (chosen.empty()) {
    for (const auto& p : perms) {
      if (keep(rng)) chosen.push_back(p);
    }
  }
  return permpat::PatternSet(chosen);
}

// Random subset of S_k of exactly `size` elements.
inline permpat::PatternSet random_subset_of_size(std::mt19937_64& rng, int k, int size) {
  auto perms = all_perms(k);
  std::shuffle(perms.begin(), perms.end(), rng);
  perms.resize(static_cast<std::size_t>(size));
  return permpat::PatternSet(perms);
}

inline permpat::PackedPerm random_perm(std::mt19937_64& rng, int n) {
  Letters p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng);
  return permpat::PackedPerm::from_letters(p);
}

// Avoiders of each length 1..n by filtering all of S_m with naive_hits.
inline std::vector<std::vector<permpat::PackedPerm>> naive_avoiders(const permpat::PatternSet& patterns, int n) {
  const auto pats = letters_of(patterns);
  std::vector<std::vector<permpat::PackedPerm>> out;
  for (int m = 1; m <= n; ++m) {
    std::vector<permpat::PackedPerm> level;
    for (const auto& p : all_letters(m)) {
      if (naive_hits(p, pats) == 0) level.push_back(permpat::PackedPerm::from_letters(p));
    }
    out.push_back(level);
  }
  return out;
}

}  // namespace testsupport
