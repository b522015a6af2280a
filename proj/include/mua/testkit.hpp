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

// Verification helpers: instance generators, the misreport fuzzer, the
// greedy non-MIR foil and the range argmax check.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "mua/core.hpp"
#include "mua/lift.hpp"
#include "mua/mechanism.hpp"
#include "mua/mir_half.hpp"
#include "mua/oracle.hpp"
#include "mua/vcg.hpp"

namespace mua {

/// Uniform integer in [lo, hi]. Plain modulo keeps the stream identical on
/// every standard library, unlike std::uniform_int_distribution.
inline std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  return span == 0 ? rng() : lo + rng() % span;
}

// ---------------------------------------------------------------------------
// Instance generators

/// Bidder i wants exactly s_i items: a single bid (max(s_i, 1), 1).
inline Instance gen_onepoint(std::span<const Quantity> targets, Quantity m) {
  if (targets.empty()) throw InvalidInput("gen_onepoint needs at least one target");
  unsigned __int128 total = 0;
  for (Quantity s : targets) total += s;
  if (total > m) throw InvalidInput("gen_onepoint targets oversubscribe m");
  std::vector<Valuation> bidders;
  for (Quantity s : targets) bidders.emplace_back(KMindedValuation({Bid{std::max<Quantity>(s, 1), 1}}));
  return make_instance(m, std::move(bidders));
}

/// Two subadditive bidders: value 1 for any non-empty bundle, 2 from the
/// threshold on (s1 for bidder 1, m - s1 for bidder 2).
inline Instance gen_subadditive_hard(Quantity m, Quantity s1) {
  if (m < 2 || s1 < 1 || s1 > m - 1)
    throw InvalidInput("gen_subadditive_hard needs 1 <= s1 <= m - 1");
  auto bidder = [](Quantity threshold) -> Valuation {
    if (threshold == 1) return KMindedValuation({Bid{1, 2}});
    return KMindedValuation({Bid{1, 1}, Bid{threshold, 2}});
  };
  return make_instance(m, {bidder(s1), bidder(m - s1)});
}

enum class RandomKind { k_minded, marginal_piecewise, table, subadditive_table };

inline std::string_view to_string(RandomKind kind) {
  switch (kind) {
    case RandomKind::k_minded: return "k_minded";
    case RandomKind::marginal_piecewise: return "marginal_piecewise";
    case RandomKind::table: return "table";
    case RandomKind::subadditive_table: return "subadditive_table";
  }
  return "unknown";
}

namespace detail {

/// `count` distinct values from [lo, hi], ascending.
inline std::vector<Quantity> distinct_sample(std::mt19937_64& rng, Quantity lo, Quantity hi,
                                             std::size_t count) {
  std::set<Quantity> picked;
  const Quantity available = hi >= lo ? hi - lo + 1 : 0;
  count = static_cast<std::size_t>(std::min<Quantity>(count, available));
  while (picked.size() < count) picked.insert(uniform(rng, lo, hi));
  return {picked.begin(), picked.end()};
}

inline Valuation random_valuation(std::mt19937_64& rng, RandomKind kind, Quantity m,
                                  std::size_t k, Value value_cap) {
  switch (kind) {
    case RandomKind::k_minded: {
      std::vector<Bid> bids;
      for (Quantity q : distinct_sample(rng, 1, m, k)) bids.push_back({q, uniform(rng, 0, value_cap)});
      return KMindedValuation(std::move(bids));
    }
    case RandomKind::marginal_piecewise: {
      std::vector<MarginalPiece> pieces{{1, uniform(rng, 0, value_cap)}};
      for (Quantity start : distinct_sample(rng, 2, m, k - 1))
        pieces.push_back({start, uniform(rng, 0, value_cap)});
      return MarginalPiecewiseValuation(std::move(pieces));
    }
    case RandomKind::table:
    case RandomKind::subadditive_table: {
      std::vector<Value> values(m + 1, 0);
      for (Quantity q = 1; q <= m; ++q) values[q] = uniform(rng, 0, value_cap);
      std::sort(values.begin() + 1, values.end());
      TableValuation table(std::move(values));
      if (kind == RandomKind::table) return table;
      TableValuation closed = subadditive_closure(table, m);
      if (!is_subadditive(closed, m))
        throw ContractViolation("subadditive closure is not subadditive");
      return closed;
    }
  }
  throw InvalidInput("unknown random kind");
}

}  // namespace detail

/// Seeded random instance with n bidders of one kind. k bounds the number
/// of bids (k_minded) or tuples (marginal_piecewise) per bidder.
inline Instance gen_random(RandomKind kind, std::size_t n, Quantity m, std::size_t k,
                           Value value_cap, std::uint64_t seed) {
  if (n == 0 || m == 0 || k == 0) throw InvalidInput("gen_random needs n, m, k >= 1");
  if (value_cap > kMaxBidValue) throw InvalidInput("gen_random value cap exceeds 2^32-1");
  if ((kind == RandomKind::table || kind == RandomKind::subadditive_table) && m > (1u << 20))
    throw InvalidInput("table instances are limited to m <= 2^20");
  std::mt19937_64 rng(seed);
  std::vector<Valuation> bidders;
  for (std::size_t i = 0; i < n; ++i)
    bidders.push_back(detail::random_valuation(rng, kind, m, k, value_cap));
  return make_instance(m, std::move(bidders));
}

// ---------------------------------------------------------------------------
// Greedy foil

/// Greedy-by-density allocation with Clarke-style payments computed from
/// the greedy outcome. Not maximal in range, hence manipulable.
inline MechanismResult baseline_greedy_vcg(const Instance& instance) {
  return run_with_payments(instance, make_rule({MechanismKind::greedy}), PaymentRule::clarke);
}

// ---------------------------------------------------------------------------
// Misreport search

struct MisreportReport {
  std::size_t bidder = 0;
  /// Largest utility(misreport) - utility(truth) found; exact.
  Money best_gain = 0;
  /// A misreport reaching best_gain, kept only when best_gain > 0.
  std::optional<Valuation> witness;
  std::size_t samples = 0;
};

/// Quantities where the mechanisms' ranges change shape: multiples of the
/// bundle sizes in use for (m, n), grid levels, delta powers and the
/// bidder's own quantities with their neighbours.
inline std::vector<Quantity> misreport_breakpoints(const Instance& instance,
                                                   std::size_t bidder) {
  const Quantity m = instance.m;
  const std::size_t n = instance.size();
  std::set<Quantity> points{1, m};
  auto add_multiples = [&](Quantity b, Quantity offset) {
    for (Quantity c = 0; c <= 64 && c * b + offset <= m; ++c)
      if (c * b + offset > 0) points.insert(c * b + offset);
  };
  const BundleScheme scheme = bundle_scheme(m, n);
  add_multiples(scheme.b, 0);
  add_multiples(scheme.b, scheme.r);
  for (std::size_t t = 0; t < n; ++t) {
    const Quantity d = n - t;
    add_multiples(std::max<Quantity>(m / (d * d), 1), 0);
  }
  for (Quantity level : build_l_grid(m, n).levels) {
    if (level > 0) points.insert(level);
    if (m - level > 0) points.insert(m - level);
    add_multiples(lift_bundles(level, n).first, 0);
  }
  for (Quantity g : SubadditiveInner(1).grid(m))
    if (g > 0) points.insert(g);
  const Valuation& v = instance.bidders[bidder];
  auto near = [&](Quantity q) {
    for (Quantity x : {q - 1, q, q + 1})
      if (x >= 1 && x <= m) points.insert(x);
  };
  if (const auto* k_minded = v.get_if<KMindedValuation>())
    for (const Bid& bid : k_minded->bids()) near(bid.quantity);
  if (const auto* piecewise = v.get_if<MarginalPiecewiseValuation>())
    for (const MarginalPiece& piece : piecewise->pieces()) near(piece.start - 1);
  return {points.begin(), points.end()};
}

/// Draws misreports of the same kind as the bidder's true valuation.
///
/// Mixture: (i) value scaling, (ii) quantity shifts by +-1 and moves to
/// breakpoints, (iii) bid deletion and addition, (iv) the zero valuation,
/// (v) bluffs priced on the scale of the whole instance, plus occasional
/// fresh random valuations. 1 to 3 edits per draw.
class MisreportSampler {
 public:
  MisreportSampler(const Instance& instance, std::size_t bidder, std::uint64_t seed)
      : instance_(&instance),
        bidder_(bidder),
        rng_(seed),
        breakpoints_(misreport_breakpoints(instance, bidder)) {
    unsigned __int128 total = 0;
    for (const Valuation& v : instance.bidders) total += v.value(instance.m);
    bluff_cap_ = static_cast<Value>(
        std::min<unsigned __int128>(total * instance.m + 4, kMaxBidValue));
  }

  Valuation next() {
    const Valuation& truth = instance_->bidders.at(bidder_);
    if (uniform(rng_, 0, 19) == 0) return zero_like(truth);
    Valuation out;
    switch (truth.kind()) {
      case ValuationKind::k_minded: out = next_k_minded(*truth.get_if<KMindedValuation>()); break;
      case ValuationKind::marginal_piecewise:
        out = next_piecewise(*truth.get_if<MarginalPiecewiseValuation>());
        break;
      case ValuationKind::table: out = next_table(*truth.get_if<TableValuation>()); break;
    }
    try {
      (void)out.value(instance_->m);
    } catch (const ValueOverflow&) {
      return zero_like(truth);
    }
    return out;
  }

 private:
  Quantity m() const { return instance_->m; }

  Quantity pick_quantity() {
    if (uniform(rng_, 0, 2) == 0) return uniform(rng_, 1, m());
    return breakpoints_[uniform(rng_, 0, breakpoints_.size() - 1)];
  }

  Value scale(Value p, std::uint64_t num, std::uint64_t den) {
    const unsigned __int128 scaled = static_cast<unsigned __int128>(p) * num / den;
    return static_cast<Value>(std::min<unsigned __int128>(scaled, kMaxBidValue));
  }

  std::pair<std::uint64_t, std::uint64_t> pick_factor() {
    static constexpr std::pair<std::uint64_t, std::uint64_t> kFactors[] = {
        {0, 1}, {1, 2}, {2, 3}, {3, 2}, {2, 1}, {3, 1}, {10, 1}};
    if (uniform(rng_, 0, 3) == 0) return {uniform(rng_, 0, 16), 4};
    return kFactors[uniform(rng_, 0, std::size(kFactors) - 1)];
  }

  Value pick_price(Value reference) {
    return std::min<Value>(uniform(rng_, 0, 2 * reference + 4), kMaxBidValue);
  }

  /// Up to m times the instance's total value: outbids everyone on value
  /// and on value per item.
  Value bluff_price() { return uniform(rng_, 0, bluff_cap_); }

  Valuation next_k_minded(const KMindedValuation& truth) {
    std::vector<Bid> bids(truth.bids().begin(), truth.bids().end());
    Value top = 0;
    for (const Bid& bid : bids) top = std::max(top, bid.price);
    const auto edits = uniform(rng_, 1, 3);
    for (std::uint64_t e = 0; e < edits; ++e) {
      const auto op = uniform(rng_, 0, 7);
      const bool any = !bids.empty();
      const std::size_t j = any ? uniform(rng_, 0, bids.size() - 1) : 0;
      switch (op) {
        case 0: {
          const auto [num, den] = pick_factor();
          for (Bid& bid : bids) bid.price = scale(bid.price, num, den);
          break;
        }
        case 1:
          if (any) bids[j].price = pick_price(bids[j].price);
          break;
        case 2:
          if (any) {
            if (uniform(rng_, 0, 1) == 0 && bids[j].quantity > 1) --bids[j].quantity;
            else if (bids[j].quantity < m()) ++bids[j].quantity;
          }
          break;
        case 3:
          if (any) bids[j].quantity = pick_quantity();
          break;
        case 4:
          if (any) bids.erase(bids.begin() + static_cast<std::ptrdiff_t>(j));
          break;
        case 5: bids.push_back({pick_quantity(), pick_price(top)}); break;
        case 6:
          if (any) bids[j].price = bluff_price();
          else bids.push_back({pick_quantity(), bluff_price()});
          break;
        default: {
          bids.clear();
          const auto count = uniform(rng_, 1, 3);
          for (std::uint64_t c = 0; c < count; ++c) bids.push_back({pick_quantity(), pick_price(top)});
        }
      }
    }
    std::map<Quantity, Value> merged;
    for (const Bid& bid : bids) merged[bid.quantity] = std::max(merged[bid.quantity], bid.price);
    std::vector<Bid> clean;
    for (const auto& [q, p] : merged) clean.push_back({q, p});
    return KMindedValuation(std::move(clean));
  }

  Valuation next_piecewise(const MarginalPiecewiseValuation& truth) {
    std::vector<MarginalPiece> pieces(truth.pieces().begin(), truth.pieces().end());
    Value top = 0;
    for (const MarginalPiece& piece : pieces) top = std::max(top, piece.marginal);
    const auto edits = uniform(rng_, 1, 3);
    for (std::uint64_t e = 0; e < edits; ++e) {
      const auto op = uniform(rng_, 0, 7);
      const std::size_t j = uniform(rng_, 0, pieces.size() - 1);
      switch (op) {
        case 0: {
          const auto [num, den] = pick_factor();
          for (MarginalPiece& piece : pieces) piece.marginal = scale(piece.marginal, num, den);
          break;
        }
        case 1: pieces[j].marginal = pick_price(pieces[j].marginal); break;
        case 2:
          if (j > 0) {
            if (uniform(rng_, 0, 1) == 0) --pieces[j].start;
            else ++pieces[j].start;
          }
          break;
        case 3:
          if (j > 0) pieces[j].start = pick_quantity() + 1;
          break;
        case 4:
          if (j > 0) pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(j));
          break;
        case 5: pieces.push_back({pick_quantity() + 1, pick_price(top)}); break;
        case 6: pieces[j].marginal = std::min<Value>(bluff_price() / m() + 1, kMaxBidValue); break;
        default: {
          pieces.assign(1, {1, pick_price(top)});
          const auto count = uniform(rng_, 0, 2);
          for (std::uint64_t c = 0; c < count; ++c)
            pieces.push_back({pick_quantity() + 1, pick_price(top)});
        }
      }
    }
    std::map<Quantity, Value> merged;
    for (const MarginalPiece& piece : pieces)
      if (piece.start >= 1) merged[piece.start] = piece.marginal;
    if (!merged.contains(1)) merged[1] = 0;
    std::vector<MarginalPiece> clean;
    for (const auto& [start, marginal] : merged) clean.push_back({start, marginal});
    return MarginalPiecewiseValuation(std::move(clean));
  }

  Valuation next_table(const TableValuation& truth) {
    std::vector<Value> values(m() + 1);
    for (Quantity q = 0; q <= m(); ++q) values[q] = truth.value(q);
    const Value top = values.back();
    const auto edits = uniform(rng_, 1, 3);
    for (std::uint64_t e = 0; e < edits; ++e) {
      const auto op = uniform(rng_, 0, 4);
      const Quantity q = pick_quantity();
      switch (op) {
        case 0: {
          const auto [num, den] = pick_factor();
          for (Value& v : values) v = std::min<Value>(scale(v, num, den), kMaxBidderValue);
          break;
        }
        case 1: {  // raise v(q); keep monotone to the right
          const Value bump = uniform(rng_, 0, 1) == 0 ? uniform(rng_, 1, top + 4) : bluff_price() + 1;
          const Value target = std::min<Value>(values[q] + bump, kMaxBidderValue);
          for (Quantity x = q; x <= m(); ++x) values[x] = std::max(values[x], target);
          break;
        }
        case 2: {  // lower v(q); keep monotone to the left
          const Value target = uniform(rng_, 0, values[q]);
          for (Quantity x = 1; x <= q; ++x) values[x] = std::min(values[x], target);
          break;
        }
        case 3: {  // step at q
          const Value height = pick_price(top);
          for (Quantity x = 1; x <= m(); ++x) values[x] = x >= q ? height : 0;
          break;
        }
        default: {
          for (Quantity x = 1; x <= m(); ++x) values[x] = uniform(rng_, 0, top + 4);
          std::sort(values.begin() + 1, values.end());
        }
      }
    }
    values[0] = 0;
    return TableValuation(std::move(values));
  }

  const Instance* instance_;
  std::size_t bidder_;
  std::mt19937_64 rng_;
  std::vector<Quantity> breakpoints_;
  Value bluff_cap_ = 0;
};

/// A rule that returns its allocation together with payments.
using PricedRule = std::function<MechanismResult(const Instance&)>;

inline PricedRule make_priced_rule(const MechanismConfig& config, PaymentRule payment_rule) {
  return [rule = make_rule(config), payment_rule](const Instance& instance) {
    return run_with_payments(instance, rule, payment_rule);
  };
}

namespace detail {

template <class UtilityFn>
MisreportReport search_misreports(const Instance& instance, std::size_t bidder,
                                  std::size_t samples, std::uint64_t seed,
                                  UtilityFn&& utility_under) {
  if (samples == 0) throw InvalidInput("misreport search needs samples >= 1");
  if (bidder >= instance.size()) throw InvalidInput("bidder index out of range");
  const Money truthful = utility_under(instance);
  MisreportReport report;
  report.bidder = bidder;
  report.samples = samples;
  MisreportSampler sampler(instance, bidder, seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Valuation lie = sampler.next();
    const Money gain = utility_under(with_bidder_replaced(instance, bidder, lie)) - truthful;
    if (s == 0 || gain > report.best_gain) {
      report.best_gain = gain;
      report.witness = gain > 0 ? std::optional<Valuation>(std::move(lie)) : std::nullopt;
    }
  }
  return report;
}

}  // namespace detail

/// Reruns `rule` on `samples` misreports of `bidder` and reports the largest
/// gain in true utility over truthful reporting. Deterministic in `seed`.
inline MisreportReport misreport_search(const PricedRule& rule, const Instance& instance,
                                        std::size_t bidder, std::size_t samples,
                                        std::uint64_t seed) {
  const Valuation& truth = instance.bidders.at(bidder);
  return detail::search_misreports(instance, bidder, samples, seed, [&](const Instance& reported) {
    const MechanismResult result = rule(reported);
    return static_cast<Money>(truth.value(result.allocation[bidder])) -
           result.payments->at(bidder);
  });
}

/// Same search for a registered rule with VCG payments. Bidder i's pivot
/// does not depend on its own report, so it is computed once.
inline MisreportReport misreport_search(const MechanismConfig& config, PaymentRule payment_rule,
                                        const Instance& instance, std::size_t bidder,
                                        std::size_t samples, std::uint64_t seed) {
  if (bidder >= instance.size()) throw InvalidInput("bidder index out of range");
  const Valuation& truth = instance.bidders[bidder];
  const Money pivot =
      payment_rule == PaymentRule::clarke
          ? static_cast<Money>(run_mechanism(config, with_bidder_zeroed(instance, bidder)).welfare)
          : 0;
  return detail::search_misreports(instance, bidder, samples, seed, [&](const Instance& reported) {
    const MechanismResult result = run_mechanism(config, reported);
    const Value reported_own = reported.bidders[bidder].value(result.allocation[bidder]);
    const auto others = static_cast<Money>(result.welfare - reported_own);
    return static_cast<Money>(truth.value(result.allocation[bidder])) - (pivot - others);
  });
}

// ---------------------------------------------------------------------------
// Range argmax

/// Whether the rule's welfare equals the best welfare over its independently
/// enumerated range. Throws NoDeclaredRange for the greedy foil and
/// SizeGuardExceeded when the range cannot be enumerated.
inline bool range_argmax_check(const MechanismConfig& config, const Instance& instance) {
  if (!is_maximal_in_range(config))
    throw NoDeclaredRange(std::string(to_string(config.kind)) + " declares no range");
  if (!brute_force_feasible(instance.m, instance.size()))
    throw SizeGuardExceeded("instance too large for range enumeration");
  Value best = 0;
  for (const Allocation& a : enumerate_range(config, instance.m, instance.size()))
    best = std::max(best, welfare(instance, a));
  return run_mechanism(config, instance).welfare == best;
}

}  // namespace mua
