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
#include <compare>
#include <concepts>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "mua/types.hpp"

namespace mua {

/// One XOR bid: the bidder is willing to pay `price` for any bundle of at
/// least `quantity` items.
struct Bid {
  Quantity quantity = 0;
  Value price = 0;

  friend auto operator<=>(const Bid&, const Bid&) = default;
};

/// Direct evaluation of an XOR bid list: the best price among bids whose
/// quantity fits in `q`, or 0 when none does. Works on unsorted lists.
inline Value eval_k_minded(std::span<const Bid> bids, Quantity q) {
  Value best = 0;
  for (const Bid& bid : bids) {
    if (bid.quantity <= q) best = std::max(best, bid.price);
  }
  return best;
}

/// k-minded (XOR) valuation. Bids are kept sorted by quantity; a running
/// maximum makes every query O(log k).
class KMindedValuation {
 public:
  KMindedValuation() = default;

  explicit KMindedValuation(std::vector<Bid> bids) : bids_(std::move(bids)) {
    std::sort(bids_.begin(), bids_.end());
    for (std::size_t j = 0; j < bids_.size(); ++j) {
      if (bids_[j].quantity == 0)
        throw InvalidInput("k-minded bid with quantity 0");
      if (bids_[j].price > kMaxBidValue)
        throw InvalidInput("k-minded bid price exceeds 2^32-1");
      if (j > 0 && bids_[j].quantity == bids_[j - 1].quantity)
        throw InvalidInput("duplicate bid quantity " +
                           std::to_string(bids_[j].quantity));
    }
    running_max_.reserve(bids_.size());
    Value best = 0;
    for (const Bid& bid : bids_) {
      best = std::max(best, bid.price);
      running_max_.push_back(best);
    }
  }

  Value value(Quantity q) const {
    auto it = std::upper_bound(
        bids_.begin(), bids_.end(), q,
        [](Quantity lhs, const Bid& bid) { return lhs < bid.quantity; });
    if (it == bids_.begin()) return 0;
    return running_max_[static_cast<std::size_t>(it - bids_.begin()) - 1];
  }

  /// Bids sorted by quantity.
  std::span<const Bid> bids() const { return bids_; }

  friend bool operator==(const KMindedValuation& a, const KMindedValuation& b) {
    return a.bids_ == b.bids_;
  }

 private:
  std::vector<Bid> bids_;
  std::vector<Value> running_max_;
};

/// One tuple of the marginal-piecewise language: every item with index in
/// [start, next start) is worth `marginal`.
struct MarginalPiece {
  Quantity start = 1;
  Value marginal = 0;

  friend auto operator<=>(const MarginalPiece&, const MarginalPiece&) = default;
};

namespace detail {

inline Value checked_value(unsigned __int128 v) {
  if (v > kMaxBidderValue) throw ValueOverflow("valuation exceeds 2^48-1");
  return static_cast<Value>(v);
}

}  // namespace detail

/// Item-indexed marginal sum, evaluated piece by piece in closed form.
/// Pieces must already satisfy the language invariants; the last marginal
/// extends to every item past the last start.
inline Value eval_marginal_piecewise(std::span<const MarginalPiece> pieces,
                                     Quantity q) {
  unsigned __int128 total = 0;
  for (std::size_t j = 0; j < pieces.size() && pieces[j].start <= q; ++j) {
    const Quantity last_item =
        (j + 1 < pieces.size()) ? std::min(q, pieces[j + 1].start - 1) : q;
    const Quantity items = last_item - pieces[j].start + 1;
    total += static_cast<unsigned __int128>(items) * pieces[j].marginal;
  }
  return detail::checked_value(total);
}

class MarginalPiecewiseValuation {
 public:
  MarginalPiecewiseValuation() : pieces_{MarginalPiece{1, 0}}, base_{0} {}

  explicit MarginalPiecewiseValuation(std::vector<MarginalPiece> pieces)
      : pieces_(std::move(pieces)) {
    if (pieces_.empty())
      throw InvalidInput("marginal-piecewise valuation needs at least one tuple");
    if (pieces_.front().start != 1)
      throw InvalidInput("marginal-piecewise valuation must start at item 1");
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      if (pieces_[j].marginal > kMaxBidValue)
        throw InvalidInput("marginal exceeds 2^32-1");
      if (j > 0 && pieces_[j].start <= pieces_[j - 1].start)
        throw InvalidInput("marginal-piecewise starts must strictly increase");
    }
    base_.reserve(pieces_.size());
    unsigned __int128 acc = 0;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      base_.push_back(acc);
      if (j + 1 < pieces_.size()) {
        acc += static_cast<unsigned __int128>(pieces_[j + 1].start -
                                              pieces_[j].start) *
               pieces_[j].marginal;
      }
    }
  }

  Value value(Quantity q) const {
    if (q == 0) return 0;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), q,
                               [](Quantity lhs, const MarginalPiece& piece) {
                                 return lhs < piece.start;
                               });
    const auto j = static_cast<std::size_t>(it - pieces_.begin()) - 1;
    return detail::checked_value(
        base_[j] + static_cast<unsigned __int128>(q - pieces_[j].start + 1) *
                       pieces_[j].marginal);
  }

  std::span<const MarginalPiece> pieces() const { return pieces_; }

  friend bool operator==(const MarginalPiecewiseValuation& a,
                         const MarginalPiecewiseValuation& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  std::vector<MarginalPiece> pieces_;
  // Value of the first start-1 items of each piece.
  std::vector<unsigned __int128> base_;
};

/// Explicit table v(0..size-1); quantities past the end take the last entry.
class TableValuation {
 public:
  TableValuation() : values_{0} {}

  explicit TableValuation(std::vector<Value> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidInput("table valuation needs v(0)");
    if (values_.front() != 0) throw InvalidInput("table valuation needs v(0) = 0");
    for (std::size_t q = 1; q < values_.size(); ++q) {
      if (values_[q] < values_[q - 1])
        throw InvalidInput("table valuation is non-monotone at q=" +
                           std::to_string(q));
      if (values_[q] > kMaxBidderValue)
        throw InvalidInput("table value exceeds 2^48-1");
    }
  }

  Value value(Quantity q) const {
    return q < values_.size() ? values_[q] : values_.back();
  }

  std::span<const Value> values() const { return values_; }

  friend bool operator==(const TableValuation& a, const TableValuation& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Value> values_;
};

enum class ValuationKind { k_minded, marginal_piecewise, table };

inline const char* to_string(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::k_minded: return "k_minded";
    case ValuationKind::marginal_piecewise: return "marginal_piecewise";
    case ValuationKind::table: return "table";
  }
  return "unknown";
}

/// A bidder valuation of any supported kind. Immutable value type.
class Valuation {
 public:
  using Storage =
      std::variant<KMindedValuation, MarginalPiecewiseValuation, TableValuation>;

  Valuation() = default;
  Valuation(KMindedValuation v) : storage_(std::move(v)) {}
  Valuation(MarginalPiecewiseValuation v) : storage_(std::move(v)) {}
  Valuation(TableValuation v) : storage_(std::move(v)) {}

  Value value(Quantity q) const {
    return std::visit([q](const auto& v) { return v.value(q); }, storage_);
  }

  ValuationKind kind() const { return static_cast<ValuationKind>(storage_.index()); }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&storage_);
  }

  const Storage& storage() const { return storage_; }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  Storage storage_;
};

/// The zero valuation expressed in the same kind as `v`.
inline Valuation zero_like(const Valuation& v) {
  switch (v.kind()) {
    case ValuationKind::k_minded: return KMindedValuation{};
    case ValuationKind::marginal_piecewise: return MarginalPiecewiseValuation{};
    case ValuationKind::table: return TableValuation{};
  }
  return KMindedValuation{};
}

inline const Valuation& underlying(const Valuation& v) { return v; }

/// Anything mechanisms can run on: answers value queries and exposes the
/// concrete valuation for kind-specific solvers.
template <class V>
concept BidderValuation = requires(const V& v, Quantity q) {
  { v.value(q) } -> std::convertible_to<Value>;
  { underlying(v) } -> std::same_as<const Valuation&>;
};

/// Distinct value queries per bidder, for one mechanism run.
class QueryLog {
 public:
  explicit QueryLog(std::size_t bidders = 0) : seen_(bidders) {}

  void record(std::size_t bidder, Quantity q) { seen_.at(bidder).insert(q); }

  std::size_t count(std::size_t bidder) const { return seen_.at(bidder).size(); }

  std::size_t total() const {
    std::size_t sum = 0;
    for (const auto& s : seen_) sum += s.size();
    return sum;
  }

  void reset() {
    for (auto& s : seen_) s.clear();
  }

 private:
  std::vector<std::set<Quantity>> seen_;
};

/// Forwards value queries to `inner` and records them in a QueryLog.
/// v(0) is answered without a query since every valuation is normalized.
template <BidderValuation V>
class QueryCountedValuation {
 public:
  QueryCountedValuation(const V& inner, QueryLog& log, std::size_t bidder)
      : inner_(&inner), log_(&log), bidder_(bidder) {}

  Value value(Quantity q) const {
    if (q == 0) return 0;
    log_->record(bidder_, q);
    return inner_->value(q);
  }

  const V& inner() const { return *inner_; }

 private:
  const V* inner_;
  QueryLog* log_;
  std::size_t bidder_;
};

template <BidderValuation V>
const Valuation& underlying(const QueryCountedValuation<V>& v) {
  return underlying(v.inner());
}

/// Wraps every bidder of `bidders` with a counter writing into `log`.
template <BidderValuation V>
std::vector<QueryCountedValuation<V>> count_queries(std::span<const V> bidders,
                                                    QueryLog& log) {
  std::vector<QueryCountedValuation<V>> out;
  out.reserve(bidders.size());
  for (std::size_t i = 0; i < bidders.size(); ++i) out.emplace_back(bidders[i], log, i);
  return out;
}

/// v(s) + v(t) >= v(s + t) for every s + t <= m. Quadratic in m.
template <BidderValuation V>
bool is_subadditive(const V& v, Quantity m) {
  std::vector<Value> table(m + 1);
  for (Quantity q = 0; q <= m; ++q) table[q] = v.value(q);
  for (Quantity s = 0; s <= m; ++s) {
    for (Quantity t = s; s + t <= m; ++t) {
      if (table[s] + table[t] < table[s + t]) return false;
    }
  }
  return true;
}

/// v'(0) = 0 and v'(s) = v(s) + v(m) otherwise; always subadditive on 0..m.
template <BidderValuation V>
TableValuation subadditive_closure(const V& v, Quantity m) {
  std::vector<Value> values(m + 1, 0);
  const Value top = v.value(m);
  for (Quantity s = 1; s <= m; ++s) values[s] = v.value(s) + top;
  return TableValuation(std::move(values));
}

}  // namespace mua
