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

// JSON instance format:
//
//   {"m": 8, "bidders": [
//     {"kind": "k_minded", "bids": [[7, 10]]},
//     {"kind": "marginal_piecewise", "tuples": [[1, 3], [4, 1]]},
//     {"kind": "table", "values": [0, 2, 2, 5]}]}
//
// Integers only. Bids are written sorted by quantity.

#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mua/core.hpp"

namespace mua {

using json = nlohmann::json;

namespace detail {

inline std::uint64_t read_uint(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw InvalidInput(std::string(what) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

inline const json& field(const json& record, const char* key) {
  if (!record.is_object() || !record.contains(key))
    throw InvalidInput(std::string("missing field \"") + key + "\"");
  return record.at(key);
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> read_pairs(const json& j,
                                                                       const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const json& item : j) {
    if (!item.is_array() || item.size() != 2)
      throw InvalidInput(std::string(what) + " entries must be [int, int] pairs");
    out.emplace_back(read_uint(item[0], what), read_uint(item[1], what));
  }
  return out;
}

}  // namespace detail

/// Builds a valuation from its JSON record, checking every invariant.
inline Valuation parse_valuation(const json& record) {
  const json& kind_field = detail::field(record, "kind");
  if (!kind_field.is_string()) throw InvalidInput("\"kind\" must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "k_minded") {
    std::vector<Bid> bids;
    for (const auto& [q, p] : detail::read_pairs(detail::field(record, "bids"), "bids"))
      bids.push_back({q, p});
    return KMindedValuation(std::move(bids));
  }
  if (kind == "marginal_piecewise") {
    std::vector<MarginalPiece> pieces;
    for (const auto& [u, mv] : detail::read_pairs(detail::field(record, "tuples"), "tuples"))
      pieces.push_back({u, mv});
    return MarginalPiecewiseValuation(std::move(pieces));
  }
  if (kind == "table") {
    const json& values_field = detail::field(record, "values");
    if (!values_field.is_array()) throw InvalidInput("\"values\" must be an array");
    std::vector<Value> values;
    for (const json& v : values_field) values.push_back(detail::read_uint(v, "values"));
    return TableValuation(std::move(values));
  }
  throw InvalidInput("unknown valuation kind \"" + kind + "\"");
}

inline json to_json(const Valuation& v) {
  json out;
  out["kind"] = to_string(v.kind());
  if (const auto* k_minded = v.get_if<KMindedValuation>()) {
    json bids = json::array();
    for (const Bid& bid : k_minded->bids()) bids.push_back({bid.quantity, bid.price});
    out["bids"] = std::move(bids);
  } else if (const auto* piecewise = v.get_if<MarginalPiecewiseValuation>()) {
    json tuples = json::array();
    for (const MarginalPiece& piece : piecewise->pieces())
      tuples.push_back({piece.start, piece.marginal});
    out["tuples"] = std::move(tuples);
  } else if (const auto* table = v.get_if<TableValuation>()) {
    out["values"] = json(std::vector<Value>(table->values().begin(), table->values().end()));
  }
  return out;
}

inline Instance parse_instance(const json& record) {
  const Quantity m = detail::read_uint(detail::field(record, "m"), "m");
  const json& bidders_field = detail::field(record, "bidders");
  if (!bidders_field.is_array()) throw InvalidInput("\"bidders\" must be an array");
  std::vector<Valuation> bidders;
  for (const json& b : bidders_field) bidders.push_back(parse_valuation(b));
  return make_instance(m, std::move(bidders));
}

inline json to_json(const Instance& instance) {
  json bidders = json::array();
  for (const Valuation& v : instance.bidders) bidders.push_back(to_json(v));
  return json{{"m", instance.m}, {"bidders", std::move(bidders)}};
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

/// Reads an instance from `path`, or from standard input for "-".
inline Instance read_instance(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_instance(parse_json_text(text));
}

/// Canonical text form: two-space indentation, sorted keys, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mua
