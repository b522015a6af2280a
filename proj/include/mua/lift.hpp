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

// Lifting a maximal-in-range solver for t bidders to n bidders.
//
// For every set T of at most t bidders and every level l of a geometric
// grid over 0..m, the inner solver allocates m - l items to T, and the l
// remaining items are cut into at most 2n^2 equal bundles that are split
// optimally among the bidders outside T. The best of all these candidates
// is returned. If the inner solver is an alpha-approximation, the result is
// an (alpha - 1/(t+1))-approximation over a valuation-independent range.

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mua/core.hpp"
#include "mua/mir_ptas.hpp"

namespace mua {

/// Distinct values floor((num/den)^j), j = 0, 1, ..., that do not exceed
/// `limit`, ascending. Exact rational arithmetic; requires num > den.
inline std::vector<Quantity> floor_powers(std::uint64_t num, std::uint64_t den,
                                          Quantity limit) {
  using boost::multiprecision::cpp_int;
  std::vector<Quantity> out;
  cpp_int p_num = 1;
  cpp_int p_den = 1;
  while (true) {
    const cpp_int floor = p_num / p_den;
    if (floor > limit) break;
    const auto value = floor.convert_to<Quantity>();
    if (out.empty() || out.back() != value) out.push_back(value);
    p_num *= num;
    p_den *= den;
  }
  return out;
}

/// Levels {0, 1, floor(u^j) for u^j <= m, m} with u = 1 + 1/(2n).
struct LGrid {
  std::vector<Quantity> levels;

  bool contains(Quantity l) const {
    return std::binary_search(levels.begin(), levels.end(), l);
  }
};

inline LGrid build_l_grid(Quantity m, std::size_t n) {
  if (m == 0 || n == 0) throw InvalidInput("build_l_grid needs m >= 1 and n >= 1");
  const std::uint64_t twice_n = 2 * static_cast<std::uint64_t>(n);
  std::vector<Quantity> levels = floor_powers(twice_n + 1, twice_n, m);
  levels.push_back(0);
  levels.push_back(1);
  levels.push_back(m);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return {std::move(levels)};
}

/// Bundle size max(floor(l / 2n^2), 1) and the number of bundles available
/// at level l: 2n^2, or fewer when single items are all there is.
inline std::pair<Quantity, Quantity> lift_bundles(Quantity level, std::size_t n) {
  const Quantity slots = 2 * static_cast<Quantity>(n) * n;
  const Quantity b = std::max<Quantity>(level / slots, 1);
  return {b, std::min(slots, level / b)};
}

/// Contract for solvers the lift can call on sub-instances of at most
/// capacity() bidders. solve() must be maximal in range() and feasible.
template <class S>
concept InnerMIRSolver = requires(const S& s, std::span<const Valuation* const> bidders,
                                  std::size_t count, Quantity items) {
  { s.name() } -> std::convertible_to<std::string_view>;
  { s.capacity() } -> std::convertible_to<std::size_t>;
  { s.alpha() } -> std::same_as<Ratio>;
  { s.solve(bidders, items) } -> std::same_as<Allocation>;
  { s.range(count, items) } -> std::same_as<std::vector<Allocation>>;
};

namespace detail {

/// Every allocation of at most `items` among `count` bidders.
inline std::vector<Allocation> full_range(std::size_t count, Quantity items) {
  std::vector<Allocation> out;
  for_each_allocation(items, count, [&](const Allocation& a) { out.push_back(a); });
  return out;
}

/// Best combination of one candidate share per bidder with total <= items.
/// `free_bidder`, when set, gets no candidate list and takes what is left.
/// Candidates are tried in list order; the first maximum wins.
template <BidderValuation V>
std::optional<std::pair<Allocation, Value>> best_combination(
    std::span<const V* const> bidders, const std::vector<std::vector<Quantity>>& candidates,
    Quantity items, std::optional<std::size_t> free_bidder) {
  const std::size_t k = bidders.size();
  std::optional<std::pair<Allocation, Value>> best;
  Allocation current(k, 0);
  std::function<void(std::size_t, Quantity)> rec = [&](std::size_t i, Quantity left) {
    if (i == k) {
      Allocation a = current;
      if (free_bidder) a[*free_bidder] = left;
      Value value = 0;
      for (std::size_t j = 0; j < k; ++j) value += bidders[j]->value(a[j]);
      if (!best || value > best->second) best = std::make_pair(std::move(a), value);
      return;
    }
    if (free_bidder == i) {
      rec(i + 1, left);
      return;
    }
    for (Quantity share : candidates[i]) {
      if (share > left) continue;
      current[i] = share;
      rec(i + 1, left - share);
    }
    current[i] = 0;
  };
  rec(0, items);
  return best;
}

}  // namespace detail

/// Exact solver for k-minded bidders: every bidder gets one of its priced
/// bid quantities or nothing. Full range, alpha = 1.
class ExhaustiveKMindedInner {
 public:
  explicit ExhaustiveKMindedInner(std::size_t capacity) : capacity_(capacity) {}

  std::string_view name() const { return "exhaustive"; }
  std::size_t capacity() const { return capacity_; }
  Ratio alpha() const { return {1, 1}; }

  template <BidderValuation V>
  Allocation solve(std::span<const V* const> bidders, Quantity items) const {
    std::vector<std::vector<Quantity>> candidates(bidders.size());
    for (std::size_t i = 0; i < bidders.size(); ++i) {
      candidates[i].push_back(0);
      const auto& bids =
          detail::require_k_minded(underlying(*bidders[i]), "exhaustive inner solver").bids();
      for (const Bid& bid : bids)
        if (bid.price > 0 && bid.quantity <= items) candidates[i].push_back(bid.quantity);
    }
    return detail::best_combination(bidders, candidates, items, std::nullopt)->first;
  }

  std::vector<Allocation> range(std::size_t count, Quantity items) const {
    return detail::full_range(count, items);
  }

 private:
  std::size_t capacity_;
};

/// One bidder takes everything. alpha = 1.
class SingleBidderInner {
 public:
  std::string_view name() const { return "single"; }
  std::size_t capacity() const { return 1; }
  Ratio alpha() const { return {1, 1}; }

  template <BidderValuation V>
  Allocation solve(std::span<const V* const> bidders, Quantity items) const {
    if (bidders.size() > 1) throw InvalidInput("single-bidder inner solver got several bidders");
    return Allocation(bidders.size(), items);
  }

  std::vector<Allocation> range(std::size_t count, Quantity items) const {
    return {Allocation(count, items)};
  }
};

/// Exact solver for marginal-piecewise bidders. Some optimum has all but one
/// bidder at a piece boundary (u_j - 1) or at 0 or at the full supply; the
/// remaining bidder absorbs what is left. Full range, alpha = 1.
class PiecewiseExactInner {
 public:
  explicit PiecewiseExactInner(std::size_t capacity) : capacity_(capacity) {}

  std::string_view name() const { return "piecewise"; }
  std::size_t capacity() const { return capacity_; }
  Ratio alpha() const { return {1, 1}; }

  template <BidderValuation V>
  Allocation solve(std::span<const V* const> bidders, Quantity items) const {
    const std::size_t k = bidders.size();
    if (k == 0) return {};
    std::vector<std::vector<Quantity>> candidates(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto* piecewise = underlying(*bidders[i]).template get_if<MarginalPiecewiseValuation>();
      if (piecewise == nullptr) {
        throw KindMismatch("piecewise inner solver requires marginal_piecewise valuations, got " +
                           std::string(to_string(underlying(*bidders[i]).kind())));
      }
      std::set<Quantity> shares{0, items};
      for (const MarginalPiece& piece : piecewise->pieces().subspan(1))
        if (piece.start - 1 <= items) shares.insert(piece.start - 1);
      candidates[i].assign(shares.begin(), shares.end());
    }
    std::optional<std::pair<Allocation, Value>> best;
    for (std::size_t free_bidder = 0; free_bidder < k; ++free_bidder) {
      auto found = detail::best_combination(bidders, candidates, items, free_bidder);
      if (found && (!best || found->second > best->second)) best = std::move(found);
    }
    return best->first;
  }

  std::vector<Allocation> range(std::size_t count, Quantity items) const {
    return detail::full_range(count, items);
  }

 private:
  std::size_t capacity_;
};

/// Exhaustive search over allocations where all bidders but one designated
/// bidder receive a size from {0} u {floor(delta^i)} and the designated
/// bidder takes the rest. 3/4-approximation for subadditive bidders.
class SubadditiveInner {
 public:
  explicit SubadditiveInner(std::size_t capacity, Ratio delta = {4, 3})
      : capacity_(capacity), delta_(delta) {
    if (delta.den == 0 || delta.num <= delta.den)
      throw InvalidInput("subadditive inner solver needs delta > 1");
  }

  std::string_view name() const { return "subadditive"; }
  std::size_t capacity() const { return capacity_; }
  Ratio alpha() const { return {3, 4}; }
  Ratio delta() const { return delta_; }

  /// {0} together with the distinct floor(delta^i) <= items.
  std::vector<Quantity> grid(Quantity items) const {
    std::vector<Quantity> g{0};
    for (Quantity x : floor_powers(delta_.num, delta_.den, items)) g.push_back(x);
    return g;
  }

  template <BidderValuation V>
  Allocation solve(std::span<const V* const> bidders, Quantity items) const {
    const std::size_t k = bidders.size();
    if (k == 0) return {};
    const std::vector<std::vector<Quantity>> candidates(k, grid(items));
    std::optional<std::pair<Allocation, Value>> best;
    for (std::size_t designated = 0; designated < k; ++designated) {
      auto found = detail::best_combination(bidders, candidates, items, designated);
      if (found && (!best || found->second > best->second)) best = std::move(found);
    }
    return best->first;
  }

  std::vector<Allocation> range(std::size_t count, Quantity items) const {
    if (count == 0) return {Allocation{}};
    const std::vector<Quantity> g = grid(items);
    std::set<Allocation> out;
    Allocation current(count, 0);
    for (std::size_t designated = 0; designated < count; ++designated) {
      std::function<void(std::size_t, Quantity)> rec = [&](std::size_t i, Quantity left) {
        if (i == count) {
          Allocation a = current;
          a[designated] = left;
          out.insert(std::move(a));
          return;
        }
        if (i == designated) {
          rec(i + 1, left);
          return;
        }
        for (Quantity share : g) {
          if (share > left) break;
          current[i] = share;
          rec(i + 1, left - share);
        }
        current[i] = 0;
      };
      rec(0, items);
    }
    return {out.begin(), out.end()};
  }

 private:
  std::size_t capacity_;
  Ratio delta_;
};

static_assert(InnerMIRSolver<ExhaustiveKMindedInner>);
static_assert(InnerMIRSolver<SingleBidderInner>);
static_assert(InnerMIRSolver<PiecewiseExactInner>);
static_assert(InnerMIRSolver<SubadditiveInner>);

/// Guarantee of the lifted mechanism, alpha - 1/(t+1), as an exact ratio.
inline Ratio lift_guarantee(Ratio alpha, std::size_t t) {
  const std::uint64_t t1 = t + 1;
  const std::uint64_t num = alpha.num * t1;
  const std::uint64_t den = alpha.den * t1;
  return {num >= alpha.den ? num - alpha.den : 0, den};
}

template <BidderValuation V, InnerMIRSolver Inner>
MechanismResult lift_solve(Quantity m, std::span<const V> bidders, const Inner& inner,
                           std::size_t t) {
  const std::size_t n = bidders.size();
  if (n == 0) throw InvalidInput("lift_solve needs at least one bidder");
  if (t > inner.capacity()) {
    throw InvalidInput("t = " + std::to_string(t) + " exceeds the capacity of the " +
                       std::string(inner.name()) + " inner solver");
  }
  const LGrid grid = build_l_grid(m, n);

  std::optional<MechanismResult> best;
  std::vector<bool> in_set(n);
  std::vector<const V*> inside;
  std::vector<const V*> outsiders;
  std::vector<std::size_t> outsider_ids;

  for (Quantity level : grid.levels) {
    const auto [b, budget] = lift_bundles(level, n);
    for_each_subset(n, t, [&](std::span<const std::size_t> members) {
      std::fill(in_set.begin(), in_set.end(), false);
      inside.clear();
      for (std::size_t i : members) {
        in_set[i] = true;
        inside.push_back(&bidders[i]);
      }
      outsiders.clear();
      outsider_ids.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (!in_set[i]) {
          outsiders.push_back(&bidders[i]);
          outsider_ids.push_back(i);
        }
      }

      const Quantity inner_items = m - level;
      const Allocation inner_alloc =
          inner.solve(std::span<const V* const>(inside), inner_items);
      if (!validate_allocation(inner_items, members.size(), inner_alloc)) {
        throw ContractViolation(std::string(inner.name()) +
                                " inner solver returned an infeasible allocation");
      }

      MechanismResult candidate;
      candidate.allocation.assign(n, 0);
      LiftWitness witness{{members.begin(), members.end()}, level, b, budget,
                          std::vector<Quantity>(n, 0)};
      Value value = 0;
      for (std::size_t j = 0; j < members.size(); ++j) {
        candidate.allocation[members[j]] = inner_alloc[j];
        value += bidders[members[j]].value(inner_alloc[j]);
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
      return true;
    });
  }
  return std::move(*best);
}

template <InnerMIRSolver Inner>
MechanismResult lift_solve(const Instance& instance, const Inner& inner, std::size_t t) {
  return lift_solve(instance.m, std::span<const Valuation>(instance.bidders), inner, t);
}

/// The lift's declared range for (m, n, t), rebuilt from the grid, the
/// subsets and the inner solver's range. Sorted, deduplicated. Test scale.
template <InnerMIRSolver Inner>
std::vector<Allocation> enumerate_lift_range(Quantity m, std::size_t n, const Inner& inner,
                                             std::size_t t) {
  const LGrid grid = build_l_grid(m, n);
  std::set<Allocation> out;
  std::vector<bool> in_set(n);
  for (Quantity level : grid.levels) {
    const auto [b, budget] = lift_bundles(level, n);
    for_each_subset(n, t, [&](std::span<const std::size_t> members) {
      std::fill(in_set.begin(), in_set.end(), false);
      for (std::size_t i : members) in_set[i] = true;
      std::vector<std::size_t> outsider_ids;
      for (std::size_t i = 0; i < n; ++i)
        if (!in_set[i]) outsider_ids.push_back(i);

      const std::vector<Allocation> inner_range = inner.range(members.size(), m - level);
      std::vector<Allocation> outer;
      for_each_allocation(budget, outsider_ids.size(),
                          [&](const Allocation& counts) { outer.push_back(counts); });
      for (const Allocation& part : inner_range) {
        Allocation a(n, 0);
        for (std::size_t j = 0; j < members.size(); ++j) a[members[j]] = part[j];
        for (const Allocation& counts : outer) {
          for (std::size_t j = 0; j < outsider_ids.size(); ++j)
            a[outsider_ids[j]] = counts[j] * b;
          out.insert(a);
        }
      }
      return true;
    });
  }
  return {out.begin(), out.end()};
}

/// Checks that `allocation` is round for the branch recorded in `witness`:
/// |T| <= t, the level is on the grid, the inner part lies in the inner
/// range and the outside shares match whole bundles within the budget.
template <InnerMIRSolver Inner>
bool lift_witness_holds(Quantity m, std::size_t n, const Inner& inner, std::size_t t,
                        std::span<const Quantity> allocation, const LiftWitness& witness) {
  if (!validate_allocation(m, n, allocation)) return false;
  if (witness.members.size() > t || witness.counts.size() != n) return false;
  if (!build_l_grid(m, n).contains(witness.level)) return false;
  const auto [b, budget] = lift_bundles(witness.level, n);
  if (b != witness.b || budget != witness.budget) return false;

  std::vector<bool> in_set(n);
  Allocation part;
  for (std::size_t i : witness.members) {
    if (i >= n || in_set[i]) return false;
    in_set[i] = true;
    part.push_back(allocation[i]);
  }
  const auto inner_range = inner.range(witness.members.size(), m - witness.level);
  if (std::find(inner_range.begin(), inner_range.end(), part) == inner_range.end()) return false;

  Quantity bundles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_set[i]) continue;
    if (allocation[i] != witness.counts[i] * b) return false;
    bundles += witness.counts[i];
  }
  return bundles <= budget;
}

}  // namespace mua
