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

// Independent reference implementations used only by tests. Nothing here
// calls into the mechanisms; valuations are evaluated from their raw
// definitions.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mua/core.hpp"

namespace mua::oracle {

/// v(q) straight from the definitions: XOR max, item-by-item marginal sum,
/// table lookup.
inline Value value(const Valuation& v, Quantity q) {
  if (const auto* k = v.get_if<KMindedValuation>()) {
    Value best = 0;
    for (const Bid& bid : k->bids())
      if (bid.quantity <= q && bid.price > best) best = bid.price;
    return best;
  }
  if (const auto* p = v.get_if<MarginalPiecewiseValuation>()) {
    const auto pieces = p->pieces();
    Value total = 0;
    for (Quantity item = 1; item <= q; ++item) {
      Value marginal = 0;
      for (const MarginalPiece& piece : pieces)
        if (piece.start <= item) marginal = piece.marginal;
      total += marginal;
    }
    return total;
  }
  const auto values = v.get_if<TableValuation>()->values();
  return q < values.size() ? values[q] : values.back();
}

/// Every vector of n non-negative integers with sum <= m, odometer style.
inline std::vector<Allocation> allocations(Quantity m, std::size_t n) {
  std::vector<Allocation> out;
  Allocation a(n, 0);
  while (true) {
    out.push_back(a);
    std::size_t i = n;
    while (i > 0) {
      --i;
      Quantity used = 0;
      for (Quantity s : a) used += s;
      if (used < m) {
        ++a[i];
        break;
      }
      a[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

inline Value welfare(const Instance& instance, const Allocation& a) {
  Value total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += value(instance.bidders[i], a[i]);
  return total;
}

inline Value opt(const Instance& instance) {
  Value best = 0;
  for (const Allocation& a : allocations(instance.m, instance.size()))
    best = std::max(best, welfare(instance, a));
  return best;
}

/// The t-round predicate over bitmask subsets, for t < n.
inline bool t_round(Quantity m, const Allocation& a, std::size_t t) {
  const std::size_t n = a.size();
  if (t >= n) return true;
  const Quantity d2 = (n - t) * (n - t);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > t) continue;
    Quantity l = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) l += a[i];
    const Quantity b = std::max<Quantity>((m - l) / d2, 1);
    bool ok = true;
    Quantity outside = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) continue;
      ok = ok && a[i] % b == 0;
      outside += a[i];
    }
    if (ok && outside <= b * d2) return true;
  }
  return false;
}

/// Best split of at most qmax bundles of size b, by trying every count
/// vector.
inline Value bundle_split(const std::vector<Valuation>& bidders, Quantity b, Quantity qmax) {
  Value best = 0;
  for (const Allocation& counts : allocations(qmax, bidders.size())) {
    Value total = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) total += value(bidders[i], counts[i] * b);
    best = std::max(best, total);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Seeded random instances built without the library generators.

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

inline KMindedValuation random_k_minded(std::mt19937_64& rng, Quantity m, std::size_t k,
                                        Value cap) {
  std::vector<Bid> bids;
  const auto count = draw(rng, 0, k);
  for (std::uint64_t j = 0; j < count; ++j) {
    const Quantity q = draw(rng, 1, m);
    bool dup = false;
    for (const Bid& b : bids) dup = dup || b.quantity == q;
    if (!dup) bids.push_back({q, draw(rng, 0, cap)});
  }
  return KMindedValuation(std::move(bids));
}

inline MarginalPiecewiseValuation random_piecewise(std::mt19937_64& rng, Quantity m,
                                                   std::size_t k, Value cap) {
  std::vector<MarginalPiece> pieces{{1, draw(rng, 0, cap)}};
  Quantity start = 1;
  const auto extra = draw(rng, 0, k - 1);
  for (std::uint64_t j = 0; j < extra && start < m; ++j) {
    start = draw(rng, start + 1, m);
    pieces.push_back({start, draw(rng, 0, cap)});
  }
  return MarginalPiecewiseValuation(std::move(pieces));
}

inline TableValuation random_table(std::mt19937_64& rng, Quantity m, Value cap) {
  std::vector<Value> v(m + 1, 0);
  for (Quantity q = 1; q <= m; ++q) v[q] = v[q - 1] + (draw(rng, 0, 2) == 0 ? draw(rng, 0, cap) : 0);
  return TableValuation(std::move(v));
}

inline Instance random_k_minded_instance(std::mt19937_64& rng, std::size_t n, Quantity m,
                                         std::size_t k, Value cap) {
  std::vector<Valuation> bidders;
  for (std::size_t i = 0; i < n; ++i) bidders.emplace_back(random_k_minded(rng, m, k, cap));
  return make_instance(m, std::move(bidders));
}

inline Instance random_piecewise_instance(std::mt19937_64& rng, std::size_t n, Quantity m,
                                          std::size_t k, Value cap) {
  std::vector<Valuation> bidders;
  for (std::size_t i = 0; i < n; ++i) bidders.emplace_back(random_piecewise(rng, m, k, cap));
  return make_instance(m, std::move(bidders));
}

/// Each bidder independently k-minded, marginal-piecewise or a table.
inline Instance random_mixed_instance(std::mt19937_64& rng, std::size_t n, Quantity m,
                                      std::size_t k, Value cap) {
  std::vector<Valuation> bidders;
  for (std::size_t i = 0; i < n; ++i) {
    switch (draw(rng, 0, 2)) {
      case 0: bidders.emplace_back(random_k_minded(rng, m, k, cap)); break;
      case 1: bidders.emplace_back(random_piecewise(rng, m, k, cap)); break;
      default: bidders.emplace_back(random_table(rng, m, cap));
    }
  }
  return make_instance(m, std::move(bidders));
}

/// Subadditive tables: v'(s) = v(s) + v(m) over a random monotone table.
inline Instance random_subadditive_instance(std::mt19937_64& rng, std::size_t n, Quantity m,
                                            Value cap) {
  std::vector<Valuation> bidders;
  for (std::size_t i = 0; i < n; ++i) {
    const TableValuation base = random_table(rng, m, cap);
    std::vector<Value> v(m + 1, 0);
    for (Quantity q = 1; q <= m; ++q) v[q] = base.value(q) + base.value(m);
    bidders.emplace_back(TableValuation(std::move(v)));
  }
  return make_instance(m, std::move(bidders));
}

}  // namespace mua::oracle
