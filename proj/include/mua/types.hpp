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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mua {

/// Item count. Bundle sizes, supplies and shares are all measured in items.
using Quantity = std::uint64_t;

/// Non-negative money amount (fixed point, denominator 1).
using Value = std::uint64_t;

/// Signed money amount, used for payments and utilities.
using Money = std::int64_t;

/// Largest price a single bid, marginal or table entry may carry.
inline constexpr Value kMaxBidValue = (Value{1} << 32) - 1;

/// Largest value any bidder may have for the whole supply. Together with
/// kMaxBidders this keeps every welfare sum and payment inside int64.
inline constexpr Value kMaxBidderValue = (Value{1} << 48) - 1;

inline constexpr std::size_t kMaxBidders = std::size_t{1} << 14;

/// Non-negative rational num/den, used for approximation guarantees.
struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

inline std::string to_string(const Ratio& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

/// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad records, invariant violations, invalid parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A mechanism or inner solver received a valuation kind it cannot handle.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

/// An exhaustive procedure refused an instance that is too large.
class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

/// A valuation evaluated above kMaxBidderValue.
class ValueOverflow : public Error {
 public:
  using Error::Error;
};

/// Internal contract breach, e.g. an inner solver returning an infeasible
/// allocation.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace mua
