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

// VCG payments over the output of an allocation rule. For a rule that is
// maximal in range the resulting mechanism is truthful.

#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "mua/core.hpp"
#include "mua/mechanism.hpp"

namespace mua {

/// Pivot of p_i = h_i(v_-i) - sum_{j != i} v_j(a).
///   clarke:     h_i = rule's welfare with bidder i zeroed.
///   zero_pivot: h_i = 0, i.e. bidders are paid the others' welfare.
enum class PaymentRule { clarke, zero_pivot };

inline std::string_view to_string(PaymentRule rule) {
  return rule == PaymentRule::clarke ? "clarke" : "zero-pivot";
}

using AllocationRule = std::function<MechanismResult(const Instance&)>;

inline AllocationRule make_rule(const MechanismConfig& config) {
  return [config](const Instance& instance) { return run_mechanism(config, instance); };
}

/// Payments for `outcome`, the rule's output on `instance`. Zeroing a bidder
/// keeps n and m, and with them the rule's range, unchanged.
inline std::vector<Money> compute_payments(const Instance& instance, const AllocationRule& rule,
                                           PaymentRule payment_rule,
                                           const MechanismResult& outcome) {
  const std::size_t n = instance.size();
  std::vector<Money> payments(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Value own = instance.bidders[i].value(outcome.allocation[i]);
    const auto others = static_cast<Money>(outcome.welfare - own);
    Money pivot = 0;
    if (payment_rule == PaymentRule::clarke)
      pivot = static_cast<Money>(rule(with_bidder_zeroed(instance, i)).welfare);
    payments[i] = pivot - others;
  }
  return payments;
}

inline std::vector<Money> compute_payments(const Instance& instance, const AllocationRule& rule,
                                           PaymentRule payment_rule) {
  return compute_payments(instance, rule, payment_rule, rule(instance));
}

/// Runs the rule and attaches payments.
inline MechanismResult run_with_payments(const Instance& instance, const AllocationRule& rule,
                                         PaymentRule payment_rule) {
  MechanismResult result = rule(instance);
  result.payments = compute_payments(instance, rule, payment_rule, result);
  return result;
}

/// Quasilinear utility v_i(s_i) - p_i of bidder i under `result`.
inline Money utility(const Instance& instance, std::size_t i, const MechanismResult& result) {
  if (!result.payments) throw InvalidInput("utility needs a result with payments");
  return static_cast<Money>(instance.bidders.at(i).value(result.allocation.at(i))) -
         result.payments->at(i);
}

}  // namespace mua
