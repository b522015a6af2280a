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

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <tuple>
#include <vector>

#include "mua/core.hpp"

namespace mua {

/// Size guard of the exhaustive welfare oracle.
inline constexpr Quantity kBruteForceMaxItems = 64;
inline constexpr std::uint64_t kBruteForceMaxAllocations = 5'000'000;

inline bool brute_force_feasible(Quantity m, std::size_t n) {
  return m <= kBruteForceMaxItems &&
         count_allocations(m, n, kBruteForceMaxAllocations + 1) <= kBruteForceMaxAllocations;
}

struct OptimumResult {
  Allocation allocation;
  Value welfare = 0;
};

/// Exact welfare optimum by enumerating every allocation. Among optimal
/// allocations the lexicographically smallest is returned.
template <BidderValuation V>
OptimumResult brute_force_opt(Quantity m, std::span<const V> bidders) {
  const std::size_t n = bidders.size();
  if (!brute_force_feasible(m, n)) {
    throw SizeGuardExceeded("brute force refuses m = " + std::to_string(m) + ", n = " +
                            std::to_string(n));
  }
  std::vector<std::vector<Value>> table(n, std::vector<Value>(m + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (Quantity q = 0; q <= m; ++q) table[i][q] = bidders[i].value(q);

  OptimumResult best{Allocation(n, 0), 0};
  bool have = false;
  Allocation current(n, 0);
  std::function<void(std::size_t, Quantity, Value)> rec = [&](std::size_t i, Quantity left,
                                                              Value acc) {
    if (i == n) {
      if (!have || acc > best.welfare) {
        best = {current, acc};
        have = true;
      }
      return;
    }
    for (Quantity s = 0; s <= left; ++s) {
      current[i] = s;
      rec(i + 1, left - s, acc + table[i][s]);
    }
    current[i] = 0;
  };
  rec(0, m, 0);
  return best;
}

inline OptimumResult brute_force_opt(const Instance& instance) {
  return brute_force_opt(instance.m, std::span<const Valuation>(instance.bidders));
}

/// Non-MIR foil: scan every priced bid by decreasing price per item and
/// award it when its bidder has nothing yet and it still fits.
template <BidderValuation V>
MechanismResult greedy_by_density(Quantity m, std::span<const V> bidders) {
  struct Entry {
    std::size_t bidder;
    Bid bid;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const auto* k_minded = underlying(bidders[i]).template get_if<KMindedValuation>();
    if (k_minded == nullptr) throw KindMismatch("greedy baseline requires k_minded valuations");
    for (const Bid& bid : k_minded->bids())
      if (bid.price > 0) entries.push_back({i, bid});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    const auto lhs = static_cast<unsigned __int128>(a.bid.price) * b.bid.quantity;
    const auto rhs = static_cast<unsigned __int128>(b.bid.price) * a.bid.quantity;
    if (lhs != rhs) return lhs > rhs;
    return std::tie(a.bidder, a.bid.quantity) < std::tie(b.bidder, b.bid.quantity);
  });

  MechanismResult result;
  result.allocation.assign(bidders.size(), 0);
  std::vector<bool> awarded(bidders.size(), false);
  Quantity left = m;
  for (const Entry& e : entries) {
    if (awarded[e.bidder] || e.bid.quantity > left) continue;
    awarded[e.bidder] = true;
    result.allocation[e.bidder] = e.bid.quantity;
    left -= e.bid.quantity;
  }
  result.welfare = welfare(m, bidders, result.allocation);
  return result;
}

}  // namespace mua
