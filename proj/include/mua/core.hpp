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
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mua/types.hpp"
#include "mua/valuations.hpp"

namespace mua {

/// Item counts per bidder. Allocations may leave items unassigned.
using Allocation = std::vector<Quantity>;

/// m identical items and an ordered list of bidders.
struct Instance {
  Quantity m = 0;
  std::vector<Valuation> bidders;

  std::size_t size() const { return bidders.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Checks m >= 1, 1 <= n <= kMaxBidders and v_i(m) <= kMaxBidderValue.
inline void validate_instance(const Instance& instance) {
  if (instance.m == 0) throw InvalidInput("instance needs m >= 1");
  if (instance.bidders.empty()) throw InvalidInput("instance needs at least one bidder");
  if (instance.bidders.size() > kMaxBidders) throw InvalidInput("too many bidders");
  for (const Valuation& v : instance.bidders) {
    try {
      (void)v.value(instance.m);
    } catch (const ValueOverflow& e) {
      throw InvalidInput(e.what());
    }
  }
}

inline Instance make_instance(Quantity m, std::vector<Valuation> bidders) {
  Instance instance{m, std::move(bidders)};
  validate_instance(instance);
  return instance;
}

/// Same instance with bidder `i` replaced by the zero valuation of its kind.
inline Instance with_bidder_zeroed(const Instance& instance, std::size_t i) {
  Instance out = instance;
  out.bidders.at(i) = zero_like(out.bidders[i]);
  return out;
}

inline Instance with_bidder_replaced(const Instance& instance, std::size_t i,
                                     Valuation v) {
  Instance out = instance;
  out.bidders.at(i) = std::move(v);
  return out;
}

struct AllocationCheck {
  enum class Code { ok, length_mismatch, oversubscribed };

  Code code = Code::ok;
  std::string message;

  explicit operator bool() const { return code == Code::ok; }
};

inline AllocationCheck validate_allocation(Quantity m, std::size_t n,
                                           std::span<const Quantity> allocation) {
  if (allocation.size() != n) {
    return {AllocationCheck::Code::length_mismatch,
            "allocation has " + std::to_string(allocation.size()) +
                " shares for " + std::to_string(n) + " bidders"};
  }
  unsigned __int128 total = 0;
  for (Quantity s : allocation) total += s;
  if (total > m) {
    return {AllocationCheck::Code::oversubscribed,
            "allocation assigns " + std::to_string(static_cast<Quantity>(total)) +
                " items but only " + std::to_string(m) + " exist"};
  }
  return {};
}

inline AllocationCheck validate_allocation(const Instance& instance,
                                           std::span<const Quantity> allocation) {
  return validate_allocation(instance.m, instance.size(), allocation);
}

/// Sum of v_i(s_i). Throws InvalidInput on an invalid allocation.
template <BidderValuation V>
Value welfare(Quantity m, std::span<const V> bidders,
              std::span<const Quantity> allocation) {
  if (auto check = validate_allocation(m, bidders.size(), allocation); !check)
    throw InvalidInput(check.message);
  Value total = 0;
  for (std::size_t i = 0; i < bidders.size(); ++i) total += bidders[i].value(allocation[i]);
  return total;
}

inline Value welfare(const Instance& instance, std::span<const Quantity> allocation) {
  return welfare(instance.m, std::span<const Valuation>(instance.bidders), allocation);
}

/// Calls fn(members) for every subset of {0..n-1} with at most `max_size`
/// members: by size, then lexicographically. Stops early if fn returns false.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t max_size, Fn&& fn) {
  max_size = std::min(max_size, n);
  std::vector<std::size_t> members;
  for (std::size_t size = 0; size <= max_size; ++size) {
    members.resize(size);
    std::iota(members.begin(), members.end(), std::size_t{0});
    while (true) {
      if (!fn(std::span<const std::size_t>(members))) return;
      // Advance to the next combination of this size.
      std::size_t k = size;
      while (k > 0 && members[k - 1] == n - size + k - 1) --k;
      if (k == 0) break;
      ++members[k - 1];
      for (std::size_t j = k; j < size; ++j) members[j] = members[j - 1] + 1;
    }
  }
}

/// Calls fn(allocation) for every allocation of at most `m` items among `n`
/// bidders, in lexicographic order. Exponential; test scale only.
template <class Fn>
void for_each_allocation(Quantity m, std::size_t n, Fn&& fn) {
  Allocation current(n, 0);
  std::function<void(std::size_t, Quantity)> rec = [&](std::size_t i, Quantity left) {
    if (i == n) {
      fn(std::as_const(current));
      return;
    }
    for (Quantity s = 0; s <= left; ++s) {
      current[i] = s;
      rec(i + 1, left - s);
    }
    current[i] = 0;
  };
  rec(0, m);
}

/// C(m + n, n), the number of allocations of at most m items among n
/// bidders, saturated at `cap`.
inline std::uint64_t count_allocations(Quantity m, std::size_t n, std::uint64_t cap) {
  unsigned __int128 c = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    c = c * (m + k) / k;
    if (c > cap) return cap;
  }
  return static_cast<std::uint64_t>(c);
}

namespace detail {

/// Divisor (n - t)^2 of the t-round bundle size. For t >= n the range is
/// everything; candidate sets T with |T| < n then use n - |T| instead.
inline Quantity round_divisor(std::size_t n, std::size_t t, std::size_t set_size) {
  const Quantity d = (t < n) ? n - t : n - set_size;
  return d * d;
}

}  // namespace detail

/// Whether `allocation` is t-round: some T with |T| <= t, l = sum of shares
/// in T, b = max((m - l) / (n - t)^2, 1), every share outside T a multiple
/// of b and at most b * (n - t)^2 items outside T. Exhaustive over T.
inline bool is_t_round(Quantity m, std::size_t n, std::span<const Quantity> allocation,
                       std::size_t t) {
  if (auto check = validate_allocation(m, n, allocation); !check)
    throw InvalidInput(check.message);
  if (t >= n) return true;
  bool found = false;
  std::vector<bool> in_set(n);
  for_each_subset(n, t, [&](std::span<const std::size_t> members) {
    std::fill(in_set.begin(), in_set.end(), false);
    Quantity l = 0;
    for (std::size_t i : members) {
      in_set[i] = true;
      l += allocation[i];
    }
    const Quantity d2 = detail::round_divisor(n, t, members.size());
    const Quantity b = std::max<Quantity>((m - l) / d2, 1);
    Quantity outside = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_set[i]) continue;
      if (allocation[i] % b != 0) return true;
      outside += allocation[i];
    }
    if (outside <= b * d2) found = true;
    return !found;
  });
  return found;
}

/// Regular bundles of size b plus one remainder bundle of size r, with
/// count * b + r = m.
struct BundleScheme {
  Quantity b = 1;
  Quantity count = 0;
  Quantity r = 0;

  friend bool operator==(const BundleScheme&, const BundleScheme&) = default;
};

/// Range parameters realizing a t-round output: the set T, its item total
/// l, bundle size b, bundle budget and the bundle count of every bidder
/// outside T (0 for members of T).
struct RoundWitness {
  std::vector<std::size_t> members;
  Quantity l = 0;
  Quantity b = 1;
  Quantity budget = 0;
  std::vector<Quantity> counts;

  friend bool operator==(const RoundWitness&, const RoundWitness&) = default;
};

struct HalfWitness {
  BundleScheme scheme;
  std::optional<std::size_t> remainder_holder;
  std::vector<Quantity> counts;

  friend bool operator==(const HalfWitness&, const HalfWitness&) = default;
};

/// Branch of the lift construction that produced the output: inner set T,
/// grid level l (items reserved for bundles), bundle size and counts.
struct LiftWitness {
  std::vector<std::size_t> members;
  Quantity level = 0;
  Quantity b = 1;
  Quantity budget = 0;
  std::vector<Quantity> counts;

  friend bool operator==(const LiftWitness&, const LiftWitness&) = default;
};

struct NoWitness {
  friend bool operator==(const NoWitness&, const NoWitness&) = default;
};

using Witness = std::variant<NoWitness, RoundWitness, HalfWitness, LiftWitness>;

struct MechanismResult {
  Allocation allocation;
  Value welfare = 0;
  std::optional<std::vector<Money>> payments;
  Witness witness;
};

}  // namespace mua
