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

#include "mua/io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace mua {
namespace {

TEST(IoTest, RoundTripsEveryKind) {
  std::mt19937_64 rng(601);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance instance = oracle::random_mixed_instance(rng, 4, 30, 3, 100);
    const Instance back = parse_instance(parse_json_text(dump(to_json(instance))));
    EXPECT_EQ(back.m, instance.m);
    EXPECT_EQ(back.bidders, instance.bidders);
  }
}

TEST(IoTest, ParsesDocumentedShapes) {
  const Instance instance = parse_instance(parse_json_text(R"({
    "m": 8,
    "bidders": [
      {"kind": "k_minded", "bids": [[7, 10]]},
      {"kind": "marginal_piecewise", "tuples": [[1, 3], [4, 1]]},
      {"kind": "table", "values": [0, 2, 2, 5]}
    ]})"));
  EXPECT_EQ(instance.m, 8u);
  EXPECT_EQ(instance.bidders[0].value(7), 10u);
  EXPECT_EQ(instance.bidders[1].value(5), 11u);
  EXPECT_EQ(instance.bidders[2].value(3), 5u);
}

TEST(IoTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_json_text("{"), InvalidInput);
  EXPECT_THROW(parse_instance(parse_json_text(R"({"m": 3})")), InvalidInput);
  EXPECT_THROW(parse_instance(parse_json_text(R"({"m": -1, "bidders": []})")), InvalidInput);
  EXPECT_THROW(parse_instance(parse_json_text(
                   R"({"m": 3, "bidders": [{"kind": "xor", "bids": []}]})")),
               InvalidInput);
  EXPECT_THROW(parse_instance(parse_json_text(
                   R"({"m": 3, "bidders": [{"kind": "k_minded", "bids": [[0, 1]]}]})")),
               InvalidInput);
  EXPECT_THROW(read_instance("/nonexistent/instance.json"), InvalidInput);
}

TEST(IoTest, DumpIsSortedAndStable) {
  const Instance instance = make_instance(3, {KMindedValuation({{2, 1}})});
  const std::string text = dump(to_json(instance));
  EXPECT_EQ(text, dump(to_json(instance)));
  EXPECT_LT(text.find("\"bidders\""), text.find("\"m\""));
  EXPECT_EQ(text.back(), '\n');
}

}  // namespace
}  // namespace mua
