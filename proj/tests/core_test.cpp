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

#include "mua/core.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"

namespace mua {
namespace {

Instance two_bidder_tight() {
  return make_instance(8, {KMindedValuation({{7, 10}}), KMindedValuation({{1, 10}})});
}

TEST(WelfareTest, Examples) {
  const Instance instance = two_bidder_tight();
  EXPECT_EQ(welfare(instance, Allocation{0, 0}), 0u);
  EXPECT_EQ(welfare(instance, Allocation{7, 1}), 20u);
  EXPECT_EQ(welfare(instance, Allocation{8, 0}), 10u);
}

TEST(WelfareTest, RejectsInvalidAllocations) {
  const Instance instance = two_bidder_tight();
  EXPECT_THROW(welfare(instance, Allocation{7, 2}), InvalidInput);
  EXPECT_THROW(welfare(instance, Allocation{1, 1, 1}), InvalidInput);
}

TEST(WelfareTest, PermutationEquivariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = oracle::draw(rng, 1, 4);
    const Quantity m = oracle::draw(rng, 1, 20);
    const Instance instance = oracle::random_mixed_instance(rng, n, m, 3, 9);
    Allocation a(n, 0);
    Quantity left = m;
    for (auto& s : a) {
      s = oracle::draw(rng, 0, left);
      left -= s;
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Instance permuted{m, {}};
    Allocation pa;
    for (std::size_t i : perm) {
      permuted.bidders.push_back(instance.bidders[i]);
      pa.push_back(a[i]);
    }
    EXPECT_EQ(welfare(instance, a), welfare(permuted, pa));
    EXPECT_EQ(welfare(instance, a), oracle::welfare(instance, a));
  }
}

TEST(ValidateAllocationTest, Examples) {
  const Instance instance = two_bidder_tight();
  EXPECT_TRUE(validate_allocation(instance, Allocation{7, 1}));
  const auto over = validate_allocation(instance, Allocation{7, 2});
  EXPECT_EQ(over.code, AllocationCheck::Code::oversubscribed);
  EXPECT_NE(over.message.find("9"), std::string::npos);
  EXPECT_NE(over.message.find("8"), std::string::npos);
  EXPECT_EQ(validate_allocation(instance, Allocation{1, 1, 1}).code,
            AllocationCheck::Code::length_mismatch);
}

TEST(InstanceTest, ValidationRejectsDegenerateInstances) {
  EXPECT_THROW(make_instance(0, {KMindedValuation{}}), InvalidInput);
  EXPECT_THROW(make_instance(4, {}), InvalidInput);
  // v(m) above the per-bidder cap.
  EXPECT_THROW(make_instance(Quantity{1} << 20, {MarginalPiecewiseValuation({{1, kMaxBidValue}})}),
               InvalidInput);
}

TEST(InstanceTest, ZeroingKeepsKindAndSize) {
  const Instance instance =
      make_instance(5, {MarginalPiecewiseValuation({{1, 3}}), TableValuation({0, 1, 2})});
  const Instance zeroed = with_bidder_zeroed(instance, 0);
  EXPECT_EQ(zeroed.size(), 2u);
  EXPECT_EQ(zeroed.bidders[0].kind(), ValuationKind::marginal_piecewise);
  EXPECT_EQ(zeroed.bidders[0].value(5), 0u);
  EXPECT_EQ(zeroed.bidders[1], instance.bidders[1]);
}

TEST(IsTRoundTest, Examples) {
  EXPECT_TRUE(is_t_round(9, 3, Allocation{2, 3, 4}, 3));
  EXPECT_FALSE(is_t_round(9, 3, Allocation{2, 3, 4}, 1));
  for (Quantity m : {1u, 7u, 100u}) EXPECT_TRUE(is_t_round(m, 4, Allocation(4, 0), 0));
}

TEST(IsTRoundTest, MatchesBitmaskOracle) {
  for (Quantity m = 1; m <= 8; ++m) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const Allocation& a : oracle::allocations(m, n)) {
        for (std::size_t t = 0; t < n; ++t)
          ASSERT_EQ(is_t_round(m, n, a, t), oracle::t_round(m, a, t));
      }
    }
  }
}

TEST(IsTRoundTest, FullRangeAtTEqualsN) {
  for (Quantity m = 1; m <= 9; ++m) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const Allocation& a : oracle::allocations(m, n)) EXPECT_TRUE(is_t_round(m, n, a, n));
    }
  }
}

TEST(IsTRoundTest, RangesAreNotNestedInT) {
  EXPECT_TRUE(is_t_round(9, 2, Allocation{2, 2}, 0));
  EXPECT_FALSE(is_t_round(9, 2, Allocation{2, 2}, 1));
}

TEST(ForEachSubsetTest, CanonicalOrder) {
  std::vector<std::vector<std::size_t>> seen;
  for_each_subset(3, 2, [&](std::span<const std::size_t> s) {
    seen.emplace_back(s.begin(), s.end());
    return true;
  });
  const std::vector<std::vector<std::size_t>> expected{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(seen, expected);
}

TEST(ForEachAllocationTest, AgreesWithOdometerAndCount) {
  for (Quantity m = 0; m <= 6; ++m) {
    for (std::size_t n = 1; n <= 3; ++n) {
      std::vector<Allocation> seen;
      for_each_allocation(m, n, [&](const Allocation& a) { seen.push_back(a); });
      EXPECT_EQ(seen, oracle::allocations(m, n));
      EXPECT_EQ(count_allocations(m, n, 1'000'000), seen.size());
    }
  }
  EXPECT_EQ(count_allocations(1000, 10, 5000), 5000u);
}

}  // namespace
}  // namespace mua
