// Copyright 2026 The mua Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// Truthful PTAS for k-minded bidders. The range is the set of t-round
// allocations; the solver enumerates the set T of "precise" bidders and
// their bid quantities, and splits the remaining supply into equal bundles
// that are allocated optimally by dynamic programming.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mua/core.hpp"

namespace mua {

struct BundleSplit {
  std::vector<Quantity> counts;
  Value value = 0;
};

/// Optimal split of at most `qmax` bundles of `b` items among `bidders`:
/// maximizes sum v_i(c_i * b) subject to sum c_i <= qmax.
///
/// M(i, q) = max over q' <= q of v_i(q' b) + M(i - 1, q - q'). Ties keep
/// the smallest q', so later bidders receive as few bundles as possible.
template <BidderValuation V>
BundleSplit dp_equal_bundles(std::span<const V* const> bidders, Quantity b,
                             Quantity qmax) {
  if (b == 0) throw InvalidInput("bundle size must be positive");
  const std::size_t k = bidders.size();
  const std::size_t width = static_cast<std::size_t>(qmax) + 1;

  std::vector<std::vector<Value>> values(k, std::vector<Value>(width, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 1; c < width; ++c) values[i][c] = bidders[i]->value(c * b);
  }

  std::vector<std::vector<Value>> best(k + 1, std::vector<Value>(width, 0));
  std::vector<std::vector<Quantity>> choice(k + 1, std::vector<Quantity>(width, 0));
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t q = 0; q < width; ++q) {
      Value top = 0;
      Quantity arg = 0;
      for (std::size_t own = 0; own <= q; ++own) {
        const Value candidate = values[i - 1][own] + best[i - 1][q - own];
        if (own == 0 || candidate > top) {
          top = candidate;
          arg = own;
        }
      }
      best[i][q] = top;
      choice[i][q] = arg;
    }
  }

  BundleSplit split;
  split.counts.assign(k, 0);
  split.value = best[k][width - 1];
  std::size_t q = width - 1;
  for (std::size_t i = k; i >= 1; --i) {
    split.counts[i - 1] = choice[i][q];
    q -= static_cast<std::size_t>(choice[i][q]);
  }
  return split;
}

template <BidderValuation V>
BundleSplit dp_equal_bundles(std::span<const V> bidders, Quantity b, Quantity qmax) {
  std::vector<const V*> ptrs;
  ptrs.reserve(bidders.size());
  for (const V& v : bidders) ptrs.push_back(&v);
  return dp_equal_bundles(std::span<const V* const>(ptrs), b, qmax);
}

struct PtasConfig {
  /// Size bound on the set of precisely served bidders; clamped to n.
  std::size_t t = 1;
};

namespace detail {

inline const KMindedValuation& require_k_minded(const Valuation& v, const char* who) {
  const auto* k_minded = v.get_if<KMindedValuation>();
  if (k_minded == nullptr) {
    throw KindMismatch(std::string(who) + " requires k_minded valuations, got " +
                       to_string(v.kind()));
  }
  return *k_minded;
}

}  // namespace detail

/// Welfare-maximizing t-round allocation for k-minded bidders.
template <BidderValuation V>
MechanismResult solve_ptas(Quantity m, std::span<const V> bidders, PtasConfig config) {
  const std::size_t n = bidders.size();
  if (n == 0) throw InvalidInput("solve_ptas needs at least one bidder");
  const std::size_t t = std::min(config.t, n);

  std::vector<std::vector<Bid>> priced(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Bid& bid : detail::require_k_minded(underlying(bidders[i]), "solve_ptas").bids())
      if (bid.price > 0) priced[i].push_back(bid);
  }

  std::optional<MechanismResult> best;
  std::vector<bool> in_set(n);
  std::vector<const V*> outsiders;
  std::vector<std::size_t> outsider_ids;
  std::vector<std::size_t> odometer;

  for_each_subset(n, t, [&](std::span<const std::size_t> members) {
    for (std::size_t i : members)
      if (priced[i].empty()) return true;

    std::fill(in_set.begin(), in_set.end(), false);
    for (std::size_t i : members) in_set[i] = true;
    outsiders.clear();
    outsider_ids.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_set[i]) {
        outsiders.push_back(&bidders[i]);
        outsider_ids.push_back(i);
      }
    }
    const Quantity d2 = outsiders.empty() ? 1 : detail::round_divisor(n, t, members.size());

    odometer.assign(members.size(), 0);
    while (true) {
      unsigned __int128 l_wide = 0;
      for (std::size_t j = 0; j < members.size(); ++j)
        l_wide += priced[members[j]][odometer[j]].quantity;

      if (l_wide <= m) {
        const auto l = static_cast<Quantity>(l_wide);
        const Quantity b = std::max<Quantity>((m - l) / d2, 1);
        const Quantity budget = std::min<Quantity>(d2, (m - l) / b);

        MechanismResult candidate;
        candidate.allocation.assign(n, 0);
        RoundWitness witness{{members.begin(), members.end()}, l, b, budget,
                             std::vector<Quantity>(n, 0)};
        Value value = 0;
        for (std::size_t j = 0; j < members.size(); ++j) {
          const Quantity share = priced[members[j]][odometer[j]].quantity;
          candidate.allocation[members[j]] = share;
          value += bidders[members[j]].value(share);
        }
        if (!outsiders.empty()) {
          const BundleSplit split =
              dp_equal_bundles(std::span<const V* const>(outsiders), b, budget);
          for (std::size_t j = 0; j < outsider_ids.size(); ++j) {
            candidate.allocation[outsider_ids[j]] = split.counts[j] * b;
            witness.counts[outsider_ids[j]] = split.counts[j];
          }
          value += split.value;
        }
        candidate.welfare = value;
        candidate.witness = std::move(witness);
        if (!best || candidate.welfare > best->welfare) best = std::move(candidate);
      }

      // Next bid tuple, first member varying slowest.
      std::size_t j = members.size();
      while (j > 0) {
        if (++odometer[j - 1] < priced[members[j - 1]].size()) break;
        odometer[j - 1] = 0;
        --j;
      }
      if (j == 0) break;
    }
    return true;
  });

  // T = {} always yields a candidate.
  return std::move(*best);
}

inline MechanismResult solve_ptas(const Instance& instance, PtasConfig config) {
  return solve_ptas(instance.m, std::span<const Valuation>(instance.bidders), config);
}

/// Every t-round allocation of at most m items among n bidders, in
/// lexicographic order. Exponential; test scale only.
inline std::vector<Allocation> enumerate_t_round_range(Quantity m, std::size_t n,
                                                       std::size_t t) {
  std::vector<Allocation> out;
  for_each_allocation(m, n, [&](const Allocation& a) {
    if (is_t_round(m, n, a, t)) out.push_back(a);
  });
  return out;
}

}  // namespace mua
