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

#include "mua/testkit.hpp"

#include <gtest/gtest.h>

#include <random>

#include "mua/io.hpp"
#include "oracles.hpp"

namespace mua {
namespace {

Instance fixture(const std::string& name) {
  return read_instance(std::string(MUA_TEST_DATA_DIR) + "/" + name);
}

TEST(GenOnePointTest, Shapes) {
  const std::vector<Quantity> s{2, 3, 4};
  const Instance instance = gen_onepoint(s, 9);
  ASSERT_EQ(instance.size(), 3u);
  EXPECT_EQ(instance.bidders[1].value(2), 0u);
  EXPECT_EQ(instance.bidders[1].value(3), 1u);
  const std::vector<Quantity> over{5, 5};
  EXPECT_THROW(gen_onepoint(over, 9), InvalidInput);
  const std::vector<Quantity> zero{0};
  EXPECT_EQ(gen_onepoint(zero, 3).bidders[0].value(1), 1u);
  EXPECT_EQ(gen_onepoint(zero, 3).bidders[0].value(0), 0u);
}

TEST(GenSubadditiveHardTest, Structure) {
  for (Quantity m = 2; m <= 14; ++m) {
    for (Quantity s1 = 1; s1 < m; ++s1) {
      const Instance instance = gen_subadditive_hard(m, s1);
      for (const Valuation& v : instance.bidders) EXPECT_TRUE(is_subadditive(v, m));
      EXPECT_EQ(oracle::opt(instance), 4u);
    }
  }
  const Instance hard = gen_subadditive_hard(10, 4);
  for (const Allocation& a : oracle::allocations(10, 2)) {
    if (a[0] >= 4 && a[1] >= 6) continue;
    EXPECT_LE(oracle::welfare(hard, a), 3u);
  }
}

TEST(GenRandomTest, DeterministicAndWellFormed) {
  for (RandomKind kind : {RandomKind::k_minded, RandomKind::marginal_piecewise, RandomKind::table,
                          RandomKind::subadditive_table}) {
    const Instance a = gen_random(kind, 3, 20, 3, 50, 9);
    const Instance b = gen_random(kind, 3, 20, 3, 50, 9);
    EXPECT_EQ(a.bidders, b.bidders);
    EXPECT_EQ(a.size(), 3u);
    if (kind == RandomKind::subadditive_table) {
      for (const Valuation& v : a.bidders) EXPECT_TRUE(is_subadditive(v, 20));
    }
  }
  const Instance single = gen_random(RandomKind::k_minded, 5, 30, 1, 10, 3);
  for (const Valuation& v : single.bidders)
    EXPECT_LE(v.get_if<KMindedValuation>()->bids().size(), 1u);
}

TEST(BaselineGreedyTest, FixtureOutcome) {
  const Instance instance = fixture("greedy_manipulable.json");
  const MechanismResult r = baseline_greedy_vcg(instance);
  EXPECT_EQ(r.allocation, (Allocation{1, 0}));
  EXPECT_EQ(r.welfare, 10u);
  EXPECT_EQ(oracle::opt(instance), 16u);
  const Instance empty = make_instance(4, {KMindedValuation{}, KMindedValuation{}});
  EXPECT_EQ(baseline_greedy_vcg(empty).allocation, (Allocation{0, 0}));
}

TEST(MisreportSearchTest, GreedyIsManipulable) {
  const Instance instance = fixture("greedy_manipulable.json");
  const MisreportReport report = misreport_search(
      make_priced_rule({MechanismKind::greedy}, PaymentRule::clarke), instance, 1, 200, 1);
  EXPECT_GT(report.best_gain, 0);
  ASSERT_TRUE(report.witness);
  // The frozen lie: bidder 1 claims 81 for its 8 items.
  const Instance lied = with_bidder_replaced(instance, 1, KMindedValuation({{8, 81}}));
  const MechanismResult r = baseline_greedy_vcg(lied);
  const Money truthful = utility(instance, 1, baseline_greedy_vcg(instance));
  const Money lying = static_cast<Money>(instance.bidders[1].value(r.allocation[1])) -
                      (*r.payments)[1];
  EXPECT_GT(lying, truthful);
}

TEST(MisreportSearchTest, GreedyLieFoundForEverySeed) {
  const Instance instance = fixture("greedy_manipulable.json");
  const PricedRule greedy = make_priced_rule({MechanismKind::greedy}, PaymentRule::clarke);
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_GT(misreport_search(greedy, instance, 1, 100, seed).best_gain, 0) << "seed " << seed;
}

TEST(MisreportSearchTest, NoGainForMirRules) {
  std::mt19937_64 rng(501);
  const std::vector<MechanismConfig> configs{
      {MechanismKind::ptas, 1}, {MechanismKind::half}, {MechanismKind::lift, 1, InnerKind::single}};
  for (int trial = 0; trial < 10; ++trial) {
    const Instance instance = oracle::random_k_minded_instance(rng, 3, 12, 2, 20);
    for (const MechanismConfig& config : configs)
      for (std::size_t i = 0; i < 3; ++i)
        EXPECT_LE(misreport_search(config, PaymentRule::clarke, instance, i, 40, trial).best_gain, 0);
  }
}

TEST(MisreportSearchTest, FastPathAgreesWithGenericRule) {
  std::mt19937_64 rng(503);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance instance = oracle::random_mixed_instance(rng, 2, 10, 2, 20);
    const MechanismConfig config{MechanismKind::half};
    const auto fast = misreport_search(config, PaymentRule::clarke, instance, 0, 30, 7);
    const auto slow = misreport_search(make_priced_rule(config, PaymentRule::clarke), instance, 0,
                                       30, 7);
    EXPECT_EQ(fast.best_gain, slow.best_gain);
  }
}

TEST(MisreportSearchTest, DeterministicAndValidated) {
  const Instance instance = fixture("greedy_manipulable.json");
  const MechanismConfig config{MechanismKind::half};
  const auto a = misreport_search(config, PaymentRule::clarke, instance, 0, 1, 42);
  const auto b = misreport_search(config, PaymentRule::clarke, instance, 0, 1, 42);
  EXPECT_EQ(a.best_gain, b.best_gain);
  EXPECT_THROW(misreport_search(config, PaymentRule::clarke, instance, 0, 0, 1), InvalidInput);
  EXPECT_THROW(misreport_search(config, PaymentRule::clarke, instance, 5, 1, 1), InvalidInput);
}

TEST(MisreportSamplerTest, KeepsKindAndStaysValid) {
  std::mt19937_64 rng(505);
  const Instance instance = oracle::random_mixed_instance(rng, 3, 15, 3, 20);
  for (std::size_t i = 0; i < 3; ++i) {
    MisreportSampler sampler(instance, i, 11);
    for (int s = 0; s < 200; ++s) {
      const Valuation lie = sampler.next();
      EXPECT_EQ(lie.kind(), instance.bidders[i].kind());
      EXPECT_NO_THROW(validate_instance(with_bidder_replaced(instance, i, lie)));
    }
  }
}

TEST(RangeArgmaxTest, MirRulesPassGreedyHasNoRange) {
  std::mt19937_64 rng(507);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance instance = oracle::random_k_minded_instance(rng, 3, 8, 2, 15);
    EXPECT_TRUE(range_argmax_check({MechanismKind::ptas, 2}, instance));
    EXPECT_TRUE(range_argmax_check({MechanismKind::half}, instance));
    EXPECT_TRUE(range_argmax_check({MechanismKind::lift, 2, InnerKind::exhaustive}, instance));
  }
  const Instance instance = fixture("greedy_manipulable.json");
  EXPECT_THROW(range_argmax_check({MechanismKind::greedy}, instance), NoDeclaredRange);
  const std::vector<Quantity> s{30, 70};
  EXPECT_THROW(range_argmax_check({MechanismKind::half}, gen_onepoint(s, 100)), SizeGuardExceeded);
}

TEST(BruteForceTest, GuardAndExamples) {
  const std::vector<Quantity> big{30, 70};
  EXPECT_THROW(brute_force_opt(gen_onepoint(big, 100)), SizeGuardExceeded);
  const std::vector<Quantity> small{3, 7};
  const OptimumResult r = brute_force_opt(gen_onepoint(small, 10));
  EXPECT_EQ(r.welfare, 2u);
  EXPECT_EQ(r.allocation, (Allocation{3, 7}));
  const Instance tight =
      make_instance(8, {KMindedValuation({{7, 10}}), KMindedValuation({{1, 10}})});
  EXPECT_EQ(brute_force_opt(tight).allocation, (Allocation{7, 1}));
  EXPECT_EQ(brute_force_opt(make_instance(4, {KMindedValuation{}})).welfare, 0u);
}

}  // namespace
}  // namespace mua
