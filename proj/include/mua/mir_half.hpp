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

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mua/core.hpp"

namespace mua {

/// n^2 bundles of floor(m / n^2) items plus a remainder bundle. When m < n^2
/// every item is its own bundle and there is no remainder.
inline BundleScheme bundle_scheme(Quantity m, std::size_t n) {
  const Quantity n2 = static_cast<Quantity>(n) * n;
  const Quantity b = m / n2;
  if (b == 0) return {1, m, 0};
  return {b, n2, m - n2 * b};
}

/// Black-box 1/2-approximation: the optimal allocation of whole bundles of
/// bundle_scheme(m, n), at most one bidder also taking the remainder.
///
/// Two tables over bidders 1..i and q regular bundles: M(i, q) without the
/// remainder and M+(i, q) with the remainder possibly handed out. Only
/// quantities c*b and c*b + r are ever queried.
template <BidderValuation V>
MechanismResult solve_half(Quantity m, std::span<const V> bidders) {
  const std::size_t n = bidders.size();
  if (n == 0) throw InvalidInput("solve_half needs at least one bidder");
  const BundleScheme scheme = bundle_scheme(m, n);
  const auto width = static_cast<std::size_t>(scheme.count) + 1;
  const bool has_remainder = scheme.r > 0;

  std::vector<std::vector<Value>> regular(n, std::vector<Value>(width, 0));
  std::vector<std::vector<Value>> extended(n, std::vector<Value>(width, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < width; ++c) {
      regular[i][c] = bidders[i].value(c * scheme.b);
      if (has_remainder) extended[i][c] = bidders[i].value(c * scheme.b + scheme.r);
    }
  }

  struct Choice {
    Quantity own = 0;
    bool remainder = false;
  };
  std::vector<std::vector<Value>> plain(n + 1, std::vector<Value>(width, 0));
  std::vector<std::vector<Value>> plus(n + 1, std::vector<Value>(width, 0));
  std::vector<std::vector<Quantity>> plain_choice(n + 1, std::vector<Quantity>(width, 0));
  std::vector<std::vector<Choice>> plus_choice(n + 1, std::vector<Choice>(width));

  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t q = 0; q < width; ++q) {
      Value top = regular[i - 1][0] + plain[i - 1][q];
      Quantity arg = 0;
      for (std::size_t own = 1; own <= q; ++own) {
        const Value candidate = regular[i - 1][own] + plain[i - 1][q - own];
        if (candidate > top) {
          top = candidate;
          arg = own;
        }
      }
      plain[i][q] = top;
      plain_choice[i][q] = arg;

      Value top_plus = regular[i - 1][0] + plus[i - 1][q];
      Choice arg_plus{};
      for (std::size_t own = 1; own <= q; ++own) {
        const Value candidate = regular[i - 1][own] + plus[i - 1][q - own];
        if (candidate > top_plus) {
          top_plus = candidate;
          arg_plus = {own, false};
        }
      }
      if (has_remainder) {
        for (std::size_t own = 0; own <= q; ++own) {
          const Value candidate = extended[i - 1][own] + plain[i - 1][q - own];
          if (candidate > top_plus) {
            top_plus = candidate;
            arg_plus = {own, true};
          }
        }
      }
      plus[i][q] = top_plus;
      plus_choice[i][q] = arg_plus;
    }
  }

  HalfWitness witness{scheme, std::nullopt, std::vector<Quantity>(n, 0)};
  MechanismResult result;
  result.allocation.assign(n, 0);
  std::size_t q = width - 1;
  bool in_plus = true;
  for (std::size_t i = n; i >= 1; --i) {
    Quantity own = 0;
    bool remainder = false;
    if (in_plus) {
      own = plus_choice[i][q].own;
      remainder = plus_choice[i][q].remainder;
    } else {
      own = plain_choice[i][q];
    }
    witness.counts[i - 1] = own;
    result.allocation[i - 1] = own * scheme.b + (remainder ? scheme.r : 0);
    if (remainder) {
      witness.remainder_holder = i - 1;
      in_plus = false;
    }
    q -= static_cast<std::size_t>(own);
  }
  result.welfare = plus[n][width - 1];
  result.witness = std::move(witness);
  return result;
}

inline MechanismResult solve_half(const Instance& instance) {
  return solve_half(instance.m, std::span<const Valuation>(instance.bidders));
}

/// Whether `allocation` is a whole-bundle allocation of bundle_scheme(m, n).
inline bool is_in_half_range(Quantity m, std::size_t n,
                             std::span<const Quantity> allocation) {
  if (!validate_allocation(m, n, allocation)) return false;
  const BundleScheme scheme = bundle_scheme(m, n);
  auto fits = [&](std::optional<std::size_t> holder) {
    Quantity bundles = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Quantity share = allocation[i];
      if (holder == i) {
        if (share < scheme.r) return false;
        share -= scheme.r;
      }
      if (share % scheme.b != 0) return false;
      bundles += share / scheme.b;
    }
    return bundles <= scheme.count;
  };
  if (fits(std::nullopt)) return true;
  if (scheme.r == 0) return false;
  for (std::size_t h = 0; h < n; ++h)
    if (fits(h)) return true;
  return false;
}

/// The whole-bundle range of solve_half, sorted and deduplicated.
inline std::vector<Allocation> enumerate_half_range(Quantity m, std::size_t n) {
  const BundleScheme scheme = bundle_scheme(m, n);
  std::set<Allocation> range;
  Allocation counts(n, 0);
  std::function<void(std::size_t, Quantity)> rec = [&](std::size_t i, Quantity left) {
    if (i == n) {
      Allocation a(n);
      for (std::size_t j = 0; j < n; ++j) a[j] = counts[j] * scheme.b;
      range.insert(a);
      if (scheme.r > 0) {
        for (std::size_t h = 0; h < n; ++h) {
          Allocation with_r = a;
          with_r[h] += scheme.r;
          range.insert(with_r);
        }
      }
      return;
    }
    for (Quantity c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, scheme.count);
  return {range.begin(), range.end()};
}

}  // namespace mua
