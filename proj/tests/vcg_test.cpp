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

#include "mua/vcg.hpp"

#include <gtest/gtest.h>

#include <random>

#include "mua/testkit.hpp"
#include "oracles.hpp"

namespace mua {
namespace {

const std::vector<MechanismConfig> kMirConfigs{
    {MechanismKind::ptas, 1},
    {MechanismKind::ptas, 2},
    {MechanismKind::half},
    {MechanismKind::lift, 1, InnerKind::exhaustive},
    {MechanismKind::lift, 1, InnerKind::single},
    {MechanismKind::lift, 2, InnerKind::piecewise},
    {MechanismKind::lift, 2, InnerKind::subadditive},
    {MechanismKind::brute},
};

TEST(PaymentsTest, HalfOnOnePoint) {
  const std::vector<Quantity> s{30, 70};
  const Instance instance = gen_onepoint(s, 100);
  const MechanismResult r =
      run_with_payments(instance, make_rule({MechanismKind::half}), PaymentRule::clarke);
  EXPECT_EQ(r.welfare, 1u);
  ASSERT_TRUE(r.payments);
  Money total = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GE(utility(instance, i, r), 0);
    total += (*r.payments)[i];
  }
  EXPECT_GE(total, 0);
}

TEST(PaymentsTest, ClarkeMatchesHandFormula) {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = oracle::draw(rng, 1, 3);
    const Quantity m = oracle::draw(rng, 1, 8);
    const Instance instance = oracle::random_k_minded_instance(rng, n, m, 2, 20);
    const MechanismResult r =
        run_with_payments(instance, make_rule({MechanismKind::brute}), PaymentRule::clarke);
    for (std::size_t i = 0; i < n; ++i) {
      Instance without = instance;
      without.bidders[i] = zero_like(instance.bidders[i]);
      const Value others_alone = oracle::opt(without);
      const Value others_here = oracle::welfare(instance, r.allocation) -
                                oracle::value(instance.bidders[i], r.allocation[i]);
      EXPECT_EQ((*r.payments)[i], static_cast<Money>(others_alone) - static_cast<Money>(others_here));
    }
  }
}

TEST(PaymentsTest, IndividuallyRationalAndNonNegative) {
  std::mt19937_64 rng(403);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = oracle::draw(rng, 1, 3);
    const Quantity m = oracle::draw(rng, 1, 10);
    const Instance k_minded = oracle::random_k_minded_instance(rng, n, m, 2, 20);
    const Instance piecewise = oracle::random_piecewise_instance(rng, n, m, 3, 20);
    for (const MechanismConfig& config : kMirConfigs) {
      const Instance& instance = config.inner == InnerKind::piecewise ? piecewise : k_minded;
      const MechanismResult r =
          run_with_payments(instance, make_rule(config), PaymentRule::clarke);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_GE((*r.payments)[i], 0) << to_string(config.kind);
        EXPECT_GE(utility(instance, i, r), 0) << to_string(config.kind);
      }
    }
  }
}

TEST(PaymentsTest, ZeroPivotPaysOthersWelfare) {
  const Instance instance =
      make_instance(8, {KMindedValuation({{7, 10}}), KMindedValuation({{1, 10}})});
  const MechanismResult r =
      run_with_payments(instance, make_rule({MechanismKind::brute}), PaymentRule::zero_pivot);
  EXPECT_EQ(*r.payments, (std::vector<Money>{-10, -10}));
  EXPECT_EQ(to_string(PaymentRule::zero_pivot), "zero-pivot");
}

TEST(PaymentsTest, UtilityNeedsPayments) {
  const Instance instance = make_instance(2, {KMindedValuation({{1, 1}})});
  EXPECT_THROW(utility(instance, 0, run_mechanism({MechanismKind::half}, instance)), InvalidInput);
}

TEST(PaymentsTest, GreedyBaselineSingleBidder) {
  // Density order picks (2, 3) before (5, 4); one award per bidder.
  const Instance instance = make_instance(5, {KMindedValuation({{2, 3}, {5, 4}})});
  const MechanismResult r = baseline_greedy_vcg(instance);
  EXPECT_EQ(r.welfare, 3u);
  EXPECT_EQ((*r.payments)[0], 0);
}

}  // namespace
}  // namespace mua
