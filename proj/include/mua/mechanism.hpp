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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mua/core.hpp"
#include "mua/lift.hpp"
#include "mua/mir_half.hpp"
#include "mua/mir_ptas.hpp"
#include "mua/oracle.hpp"

namespace mua {

enum class MechanismKind { ptas, half, lift, brute, greedy };
enum class InnerKind { exhaustive, single, piecewise, subadditive };

inline std::string_view to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::ptas: return "ptas";
    case MechanismKind::half: return "half";
    case MechanismKind::lift: return "lift";
    case MechanismKind::brute: return "brute";
    case MechanismKind::greedy: return "greedy";
  }
  return "unknown";
}

inline std::string_view to_string(InnerKind kind) {
  switch (kind) {
    case InnerKind::exhaustive: return "exhaustive";
    case InnerKind::single: return "single";
    case InnerKind::piecewise: return "piecewise";
    case InnerKind::subadditive: return "subadditive";
  }
  return "unknown";
}

/// Allocation rule selector. `t` applies to ptas and lift, `inner` to lift.
struct MechanismConfig {
  MechanismKind kind = MechanismKind::half;
  std::size_t t = 1;
  InnerKind inner = InnerKind::exhaustive;
};

/// Thrown when asking for the range of a rule that is not maximal in range.
class NoDeclaredRange : public Error {
 public:
  using Error::Error;
};

/// Calls fn(inner) with the inner solver selected by `config`.
template <class Fn>
decltype(auto) with_inner_solver(const MechanismConfig& config, Fn&& fn) {
  switch (config.inner) {
    case InnerKind::exhaustive: return fn(ExhaustiveKMindedInner(config.t));
    case InnerKind::single: return fn(SingleBidderInner{});
    case InnerKind::piecewise: return fn(PiecewiseExactInner(config.t));
    case InnerKind::subadditive: return fn(SubadditiveInner(config.t));
  }
  throw InvalidInput("unknown inner solver");
}

template <BidderValuation V>
MechanismResult run_mechanism(const MechanismConfig& config, Quantity m,
                              std::span<const V> bidders) {
  switch (config.kind) {
    case MechanismKind::ptas: return solve_ptas(m, bidders, PtasConfig{config.t});
    case MechanismKind::half: return solve_half(m, bidders);
    case MechanismKind::lift:
      return with_inner_solver(config, [&](const auto& inner) {
        return lift_solve(m, bidders, inner, config.t);
      });
    case MechanismKind::brute: {
      OptimumResult opt = brute_force_opt(m, bidders);
      return MechanismResult{std::move(opt.allocation), opt.welfare, std::nullopt, NoWitness{}};
    }
    case MechanismKind::greedy: return greedy_by_density(m, bidders);
  }
  throw InvalidInput("unknown mechanism");
}

inline MechanismResult run_mechanism(const MechanismConfig& config, const Instance& instance) {
  return run_mechanism(config, instance.m, std::span<const Valuation>(instance.bidders));
}

/// Worst-case ratio ALG/OPT the rule promises for n bidders, or nothing for
/// the greedy foil.
inline std::optional<Ratio> guarantee(const MechanismConfig& config, std::size_t n) {
  switch (config.kind) {
    case MechanismKind::ptas: {
      const std::uint64_t t = std::min(config.t, n);
      if (t >= n) return Ratio{1, 1};
      return Ratio{t, t + 1};
    }
    case MechanismKind::half: return Ratio{1, 2};
    case MechanismKind::lift:
      return with_inner_solver(config, [&](const auto& inner) {
        return lift_guarantee(inner.alpha(), config.t);
      });
    case MechanismKind::brute: return Ratio{1, 1};
    case MechanismKind::greedy: return std::nullopt;
  }
  return std::nullopt;
}

/// den * ALG >= num * OPT, exactly.
inline bool meets_guarantee(Value alg, Value opt, Ratio ratio) {
  return static_cast<unsigned __int128>(ratio.den) * alg >=
         static_cast<unsigned __int128>(ratio.num) * opt;
}

inline bool is_maximal_in_range(const MechanismConfig& config) {
  return config.kind != MechanismKind::greedy;
}

/// The valuation-independent range of the rule for (m, n). Test scale.
inline std::vector<Allocation> enumerate_range(const MechanismConfig& config, Quantity m,
                                               std::size_t n) {
  switch (config.kind) {
    case MechanismKind::ptas: return enumerate_t_round_range(m, n, config.t);
    case MechanismKind::half: return enumerate_half_range(m, n);
    case MechanismKind::lift:
      return with_inner_solver(config, [&](const auto& inner) {
        return enumerate_lift_range(m, n, inner, config.t);
      });
    case MechanismKind::brute: return detail::full_range(n, m);
    case MechanismKind::greedy: break;
  }
  throw NoDeclaredRange(std::string(to_string(config.kind)) +
                        " is not maximal in range and declares no range");
}

}  // namespace mua
