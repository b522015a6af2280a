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

// Commands behind the `mua` executable. Each returns the process exit code:
//
//   0  success (verify: guarantee met; misreport: no profitable lie)
//   1  verify: guarantee violated; misreport: profitable lie found
//   2  malformed input or invalid parameters
//   3  mechanism cannot handle the valuation kinds of the instance
//   4  instance exceeds the brute-force size guard

#pragma once

#include <chrono>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mua/core.hpp"
#include "mua/io.hpp"
#include "mua/mechanism.hpp"
#include "mua/testkit.hpp"
#include "mua/vcg.hpp"

namespace mua::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,
  kInvalidInput = 2,
  kKindMismatch = 3,
  kSizeGuard = 4,
};

inline MechanismKind parse_mechanism(const std::string& s) {
  for (auto kind : {MechanismKind::ptas, MechanismKind::half, MechanismKind::lift,
                    MechanismKind::brute, MechanismKind::greedy})
    if (to_string(kind) == s) return kind;
  throw InvalidInput("unknown mechanism \"" + s + "\"");
}

inline InnerKind parse_inner(const std::string& s) {
  for (auto kind : {InnerKind::exhaustive, InnerKind::single, InnerKind::piecewise,
                    InnerKind::subadditive})
    if (to_string(kind) == s) return kind;
  throw InvalidInput("unknown inner solver \"" + s + "\"");
}

inline std::optional<PaymentRule> parse_payments(const std::string& s) {
  if (s == "none") return std::nullopt;
  if (s == "clarke") return PaymentRule::clarke;
  if (s == "zero-pivot") return PaymentRule::zero_pivot;
  throw InvalidInput("unknown payment rule \"" + s + "\"");
}

inline RandomKind parse_random_kind(const std::string& s) {
  for (auto kind : {RandomKind::k_minded, RandomKind::marginal_piecewise, RandomKind::table,
                    RandomKind::subadditive_table})
    if (to_string(kind) == s) return kind;
  throw InvalidInput("unknown instance kind \"" + s + "\"");
}

inline std::vector<Quantity> parse_quantity_list(const std::string& s) {
  std::vector<Quantity> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad quantity list \"" + s + "\"");
    out.push_back(std::stoull(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct SolveOptions {
  std::string input = "-";
  std::string output = "-";
  std::string mechanism = "half";
  std::size_t t = 1;
  std::string inner = "exhaustive";
  std::string payments = "none";
  bool timing = false;
};

struct GenOptions {
  std::string family;  // onepoint | subadditive-hard | random
  std::string output = "-";
  std::string targets;  // onepoint: comma separated s_i
  Quantity m = 0;
  Quantity s1 = 0;
  std::string kind = "k_minded";
  std::size_t n = 2;
  std::size_t k = 2;
  Value value_cap = 10;
  std::uint64_t seed = 0;
};

struct MisreportOptions {
  std::string input = "-";
  std::string output = "-";
  std::string mechanism = "half";
  std::size_t t = 1;
  std::string inner = "exhaustive";
  std::string payments = "clarke";
  std::size_t bidder = 0;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
};

inline MechanismConfig make_config(const std::string& mechanism, std::size_t t,
                                   const std::string& inner) {
  return {parse_mechanism(mechanism), t, parse_inner(inner)};
}

inline json to_json(const MechanismConfig& config) {
  json out{{"id", std::string(to_string(config.kind))}};
  if (config.kind == MechanismKind::ptas || config.kind == MechanismKind::lift)
    out["t"] = config.t;
  if (config.kind == MechanismKind::lift) out["inner"] = std::string(to_string(config.inner));
  return out;
}

inline json to_json(const Witness& witness) {
  if (const auto* w = std::get_if<RoundWitness>(&witness)) {
    return {{"type", "t_round"}, {"T", w->members}, {"l", w->l}, {"b", w->b},
            {"budget", w->budget}, {"counts", w->counts}};
  }
  if (const auto* w = std::get_if<HalfWitness>(&witness)) {
    json holder = w->remainder_holder ? json(*w->remainder_holder) : json("none");
    return {{"type", "bundles"}, {"b", w->scheme.b}, {"count", w->scheme.count},
            {"r", w->scheme.r}, {"remainder_holder", holder}, {"counts", w->counts}};
  }
  if (const auto* w = std::get_if<LiftWitness>(&witness)) {
    return {{"type", "lift"}, {"T", w->members}, {"level", w->level}, {"b", w->b},
            {"budget", w->budget}, {"counts", w->counts}};
  }
  return nullptr;
}

/// Exact ALG/OPT in lowest terms; an instance worth nothing reads 1/1.
inline Ratio welfare_ratio(Value alg, Value opt) {
  if (opt == 0) return {1, 1};
  const Value g = std::gcd(alg, opt);
  return {alg / g, opt / g};
}

namespace detail {

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write " + path);
  file << text;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const KindMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kKindMismatch;
  } catch (const SizeGuardExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kSizeGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

/// Runs the mechanism with query counting and builds the common report.
inline json run_report(const SolveOptions& options, const Instance& instance,
                       const MechanismConfig& config, MechanismResult& result) {
  const auto payment_rule = parse_payments(options.payments);
  const auto start = std::chrono::steady_clock::now();
  QueryLog log(instance.size());
  const auto counted = count_queries(std::span<const Valuation>(instance.bidders), log);
  result = run_mechanism(config, instance.m,
                         std::span<const QueryCountedValuation<Valuation>>(counted));
  if (payment_rule) result.payments = compute_payments(instance, make_rule(config), *payment_rule, result);
  const auto elapsed = std::chrono::steady_clock::now() - start;

  json report;
  report["mechanism"] = to_json(config);
  report["payment_rule"] = payment_rule ? std::string(to_string(*payment_rule)) : "none";
  report["allocation"] = result.allocation;
  report["welfare"] = result.welfare;
  report["payments"] = result.payments ? json(*result.payments) : json(nullptr);
  report["witness"] = to_json(result.witness);
  report["queries"] = log.total();
  if (options.timing)
    report["elapsed_us"] =
        std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
  return report;
}

}  // namespace detail

inline int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const MechanismConfig config = make_config(options.mechanism, options.t, options.inner);
    const Instance instance = read_instance(options.input);
    MechanismResult result;
    const json report = detail::run_report(options, instance, config, result);
    detail::write_text(options.output, dump(report), out);
    return kOk;
  });
}

inline int cmd_verify(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const MechanismConfig config = make_config(options.mechanism, options.t, options.inner);
    const Instance instance = read_instance(options.input);
    const auto promised = guarantee(config, instance.size());
    if (!promised) throw InvalidInput(std::string(to_string(config.kind)) + " has no guarantee");
    if (!brute_force_feasible(instance.m, instance.size()))
      throw SizeGuardExceeded("instance exceeds the brute-force size guard");
    MechanismResult result;
    json report = detail::run_report(options, instance, config, result);
    const Value opt = brute_force_opt(instance).welfare;
    const bool pass = meets_guarantee(result.welfare, opt, *promised);
    report["verification"] = {{"alg", result.welfare},
                              {"opt", opt},
                              {"ratio", to_string(welfare_ratio(result.welfare, opt))},
                              {"guarantee", to_string(*promised)},
                              {"pass", pass}};
    detail::write_text(options.output, dump(report), out);
    return pass ? kOk : kFailed;
  });
}

inline int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Instance instance;
    if (options.family == "onepoint") {
      instance = gen_onepoint(parse_quantity_list(options.targets), options.m);
    } else if (options.family == "subadditive-hard") {
      instance = gen_subadditive_hard(options.m, options.s1);
    } else if (options.family == "random") {
      instance = gen_random(parse_random_kind(options.kind), options.n, options.m, options.k,
                            options.value_cap, options.seed);
    } else {
      throw InvalidInput("unknown generator \"" + options.family + "\"");
    }
    detail::write_text(options.output, dump(to_json(instance)), out);
    return kOk;
  });
}

inline json to_json(const MisreportReport& report) {
  return {{"bidder", report.bidder},
          {"best_gain", report.best_gain},
          {"samples", report.samples},
          {"witness", report.witness ? to_json(*report.witness) : json(nullptr)}};
}

inline int cmd_misreport(const MisreportOptions& options, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const MechanismConfig config = make_config(options.mechanism, options.t, options.inner);
    const auto payment_rule = parse_payments(options.payments);
    if (!payment_rule) throw InvalidInput("misreport search needs a payment rule");
    if (options.samples == 0) throw InvalidInput("--samples must be at least 1");
    const Instance instance = read_instance(options.input);
    const MisreportReport report = misreport_search(config, *payment_rule, instance,
                                                    options.bidder, options.samples,
                                                    options.seed);
    json body = to_json(report);
    body["mechanism"] = to_json(config);
    body["payment_rule"] = std::string(to_string(*payment_rule));
    body["seed"] = options.seed;
    detail::write_text(options.output, dump(body), out);
    return report.best_gain > 0 ? kFailed : kOk;
  });
}

}  // namespace mua::cli
