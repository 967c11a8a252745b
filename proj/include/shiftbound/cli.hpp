#pragma once

// Command drivers behind the `shiftbound` executable.  Each driver is a pure
// function from options to a JSON document plus an exit code; file writing
// and flag parsing live in the executable.  Exit codes: 0 = all checks
// passed, 1 = configuration or usage error (reported by throwing
// std::invalid_argument), 2 = a numeric guarantee was violated (the report is
// still produced).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shiftbound/adapt.hpp"
#include "shiftbound/bounds.hpp"
#include "shiftbound/core.hpp"
#include "shiftbound/json.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/rng.hpp"
#include "shiftbound/scenarios.hpp"

namespace shiftbound::cli {

inline constexpr const char* kVersion = "0.1.0";

using bounds::SettingKind;
using jsonio::json;
using scenarios::ScenarioConfig;

struct Options {
  std::string command;
  std::string setting = "da";
  int n = 1;
  std::optional<std::uint64_t> seed;
  std::string out;                  // empty: write the document to stdout
  std::string format = "json";     // json | csv
  std::optional<int> support_size;
  std::optional<int> class_size;
  std::optional<std::string> loss;  // abs | sq | 01
  adapt::Weights weights;
  bool dump_scenarios = false;
  bool trace = false;  // include the full search trace in train results
};

// ---------------------------------------------------------------------------
// Flag and environment parsing helpers.
// ---------------------------------------------------------------------------

inline SettingKind kind_from_cli_name(const std::string& name) {
  if (name == "da") return SettingKind::standard_da;
  if (name == "binary-da") return SettingKind::binary_da;
  if (name == "oda") return SettingKind::output_da;
  if (name == "analogy") return SettingKind::analogy_oda;
  if (name == "two-sided") return SettingKind::two_sided;
  if (name == "dt") return SettingKind::domain_transfer;
  throw std::invalid_argument("unknown setting name: " + name +
                              " (expected da|binary-da|oda|analogy|two-sided|dt)");
}

inline LossKind loss_from_cli_name(const std::string& name) {
  if (name == "abs") return LossKind::absolute;
  if (name == "sq") return LossKind::squared;
  if (name == "01") return LossKind::zero_one;
  throw std::invalid_argument("unknown loss name: " + name + " (expected abs|sq|01)");
}

// Worker count comes from the environment so that parallelism never changes
// the meaning of a command line.
inline int workers_from_env() {
  const char* env = std::getenv("SHIFTBOUND_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 256)
    throw std::invalid_argument("SHIFTBOUND_WORKERS must be an integer in [1, 256]");
  return static_cast<int>(v);
}

inline ScenarioConfig base_config(const Options& opt) {
  ScenarioConfig cfg;
  cfg.kind = kind_from_cli_name(opt.setting);
  cfg.seed = opt.seed ? *opt.seed : scenarios::default_seed_for(cfg.kind);
  if (opt.support_size) cfg.support_size = *opt.support_size;
  if (opt.class_size) {
    cfg.h2_size = *opt.class_size;
    cfg.h2_prime_size = *opt.class_size;
  }
  if (opt.loss) {
    const LossKind k = loss_from_cli_name(*opt.loss);
    if (cfg.kind == SettingKind::binary_da && k != LossKind::zero_one)
      throw std::invalid_argument("binary-da requires --loss 01");
    cfg.loss = k;
  }
  if (opt.n < 0) throw std::invalid_argument("--n must be non-negative");
  return cfg;
}

// Scenario i of a batch reuses the base configuration with seed base+i.
inline ScenarioConfig config_for(const Options& opt, int index) {
  ScenarioConfig cfg = base_config(opt);
  cfg.seed += static_cast<std::uint64_t>(index);
  return cfg;
}

// ---------------------------------------------------------------------------
// Candidate selection for `verify`.
// ---------------------------------------------------------------------------

inline std::vector<std::string> candidate_keys(SettingKind kind) {
  switch (kind) {
    case SettingKind::standard_da:
    case SettingKind::binary_da: return {"f", "g"};
    case SettingKind::output_da: return {"f", "g", "ghat"};
    case SettingKind::analogy_oda: return {"f", "a", "b"};
    case SettingKind::domain_transfer: return {"g"};
    case SettingKind::two_sided: return {"f1", "g1", "f2", "g2", "a1", "a2"};
  }
  throw std::logic_error("candidate_keys: bad kind");
}

inline int key_class_size(const bounds::DASetting& s, const std::string& key) {
  if (key == "f" || key == "f1" || key == "f2") return s.cls("H1").size();
  if (key == "g" || key == "g1" || key == "g2") return s.cls("H2").size();
  if (key == "ghat") return s.cls("H2_prime").size();
  if (key == "a" || key == "a1" || key == "a2") return s.cls("H3").size();
  if (key == "b") return s.cls("H4").size();
  throw std::logic_error("key_class_size: bad key " + key);
}

struct NamedCandidate {
  std::string name;
  bounds::Candidate cand;
  std::optional<adapt::TrainResult> train;
};

inline std::vector<NamedCandidate> candidates_for(const scenarios::Scenario& sc,
                                                  const adapt::Weights& w, int workers) {
  const SettingKind kind = sc.setting.kind;
  const std::vector<std::string> keys = candidate_keys(kind);
  std::vector<NamedCandidate> out;

  int random_count = 8;
  if (kind == SettingKind::two_sided) {
    random_count = 10;  // no trainer exists for the symmetric comparison task
  } else {
    adapt::TrainResult trained = adapt::train(sc, w, workers);
    adapt::TrainResult erm = adapt::train(sc, adapt::erm_weights(), workers);
    bounds::Candidate tc, ec;
    tc.idx = trained.chosen;
    ec.idx = erm.chosen;
    out.push_back(NamedCandidate{"trained", std::move(tc), std::move(trained)});
    out.push_back(NamedCandidate{"erm", std::move(ec), std::move(erm)});
  }

  SplitMix64 rng = SplitMix64(sc.config.seed).fork(17);
  for (int c = 0; c < random_count; ++c) {
    bounds::Candidate cand;
    for (const auto& key : keys)
      cand.idx[key] =
          static_cast<int>(rng.next_below(std::uint64_t(key_class_size(sc.setting, key))));
    out.push_back(NamedCandidate{"random" + std::to_string(c), std::move(cand), std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Drivers.
// ---------------------------------------------------------------------------

struct DriverResult {
  json results = json::array();
  int exit_code = 0;
};

// Checks every applicable bound for every candidate of one scenario.  Sets
// *violated when any report fails; the report is still emitted.
inline json verify_scenario(const scenarios::Scenario& sc, int index, const adapt::Weights& w,
                            int workers, bool dump_setting, bool* violated) {
  json entry{{"scenario", index}, {"config", jsonio::of(sc.config)}};
  if (dump_setting) entry["setting"] = jsonio::of(sc.setting);

  json cand_list = json::array();
  for (const NamedCandidate& nc : candidates_for(sc, w, workers)) {
    json cj{{"name", nc.name}};
    json idx = json::object();
    for (const auto& [key, value] : nc.cand.idx) idx[key] = value;
    cj["indices"] = std::move(idx);
    if (nc.train) cj["train"] = jsonio::of(*nc.train);
    json reports = json::object();
    for (const std::string& bid : bounds::bound_ids_for(sc.setting.kind)) {
      const bounds::BoundReport rep = bounds::compute_bound(bid, sc.setting, nc.cand, workers);
      if (!rep.pass) *violated = true;
      reports[bid] = jsonio::of(rep);
    }
    cj["bounds"] = std::move(reports);
    cand_list.push_back(std::move(cj));
  }
  entry["candidates"] = std::move(cand_list);
  return entry;
}

inline DriverResult run_verify(const Options& opt) {
  const int workers = workers_from_env();
  DriverResult out;
  bool violated = false;
  for (int i = 0; i < opt.n; ++i) {
    const ScenarioConfig cfg = config_for(opt, i);
    const scenarios::Scenario sc = scenarios::generate(cfg);
    out.results.push_back(verify_scenario(sc, i, opt.weights, workers, opt.dump_scenarios, &violated));
  }
  if (violated) out.exit_code = 2;
  return out;
}

inline DriverResult run_train(const Options& opt) {
  const int workers = workers_from_env();
  if (kind_from_cli_name(opt.setting) == SettingKind::two_sided)
    throw std::invalid_argument("the two-sided setting has no trainer");
  DriverResult out;
  for (int i = 0; i < opt.n; ++i) {
    const ScenarioConfig cfg = config_for(opt, i);
    const scenarios::Scenario sc = scenarios::generate(cfg);
    const adapt::TrainResult r = adapt::train(sc, opt.weights, workers);
    json result = jsonio::of(r);
    if (opt.trace) {
      json trace = json::array();
      for (const adapt::TraceEntry& t : r.trace) {
        json idx = json::object();
        for (const auto& [key, value] : t.idx) idx[key] = value;
        trace.push_back(json{{"indices", std::move(idx)}, {"objective", t.objective}});
      }
      result["trace"] = std::move(trace);
    }
    json entry{{"scenario", i}, {"config", jsonio::of(sc.config)}, {"result", std::move(result)}};

    // the chosen candidate's full bound reports accompany every result
    bounds::Candidate cand;
    cand.idx = r.chosen;
    json reports = json::object();
    for (const std::string& bid : bounds::bound_ids_for(sc.setting.kind)) {
      const bounds::BoundReport rep = bounds::compute_bound(bid, sc.setting, cand, workers);
      if (!rep.pass) out.exit_code = 2;
      reports[bid] = jsonio::of(rep);
    }
    entry["bounds"] = std::move(reports);
    if (opt.dump_scenarios) entry["setting"] = jsonio::of(sc.setting);
    out.results.push_back(std::move(entry));
  }
  return out;
}

namespace detail {

// Pool of observed points per dimension: distribution supports, target
// images, and images under the first few members of every class.
inline std::map<int, std::vector<Point>> point_pools(const bounds::DASetting& s) {
  std::map<int, std::vector<Point>> pools;
  const auto add = [&pools](const Point& p) { pools[p.dim()].push_back(p); };
  for (const auto& [name, d] : s.distributions)
    for (const auto& p : d.support()) add(p);
  for (const auto& [name, h] : s.targets)
    for (const auto& [dname, d] : s.distributions) {
      if (d.dim() != h.input_dim()) continue;
      for (const auto& p : d.support()) add(evaluate(h, p));
    }
  for (const auto& [name, c] : s.classes) {
    const int take = std::min(4, c.size());
    for (int m = 0; m < take; ++m) {
      if (!is_total(c.member(m))) continue;  // lookup members fault off their keys
      for (const auto& [dname, d] : s.distributions) {
        if (d.dim() != c.input_dim()) continue;
        for (const auto& p : d.support()) add(evaluate(c.member(m), p));
      }
    }
  }
  return pools;
}

inline Point pick(const std::vector<Point>& pool, SplitMix64& rng) {
  return pool[static_cast<std::size_t>(rng.next_below(pool.size()))];
}

}  // namespace detail

// Estimates the loss triangle ratio and per-class Lipschitz factors on
// sampled evaluation points and compares them against the declared constants.
inline DriverResult run_constants(const Options& opt) {
  constexpr int kTriples = 10000;
  constexpr int kPairsPerMember = 200;
  constexpr double kTol = 1e-12;

  DriverResult out;
  for (int i = 0; i < opt.n; ++i) {
    const ScenarioConfig cfg = config_for(opt, i);
    const scenarios::Scenario sc = scenarios::generate(cfg);
    const bounds::DASetting& s = sc.setting;
    SplitMix64 rng = SplitMix64(cfg.seed).fork(29);
    const std::map<int, std::vector<Point>> pools = detail::point_pools(s);

    json entry{{"scenario", i}, {"config", jsonio::of(sc.config)}};

    // Triangle ratio of the loss on points of its own dimension.
    const auto pool_it = pools.find(s.loss.dimension);
    if (pool_it == pools.end() || pool_it->second.size() < 3)
      throw std::logic_error("run_constants: no evaluation pool for the loss dimension");
    std::vector<std::array<Point, 3>> triples;
    triples.reserve(kTriples);
    for (int t = 0; t < kTriples; ++t)
      triples.push_back({detail::pick(pool_it->second, rng), detail::pick(pool_it->second, rng),
                         detail::pick(pool_it->second, rng)});
    const double k_hat = measures::estimate_K(s.loss, triples);
    const bool k_ok = k_hat <= s.loss.triangle_constant_K + kTol;
    if (!k_ok) out.exit_code = 2;
    entry["loss"] = json{{"kind", loss_kind_name(s.loss.kind)},
                         {"declared_K", s.loss.triangle_constant_K},
                         {"estimated_K", k_hat},
                         {"pass", k_ok}};

    // Declared Lipschitz factors, class by class, member by member.
    json classes = json::array();
    for (const auto& [name, c] : s.classes) {
      if (!c.lipschitz_L()) continue;
      // The indicator loss only extends to other dimensions when they are 1.
      if (s.loss.kind == LossKind::zero_one && (c.input_dim() != 1 || c.output_dim() != 1))
        continue;
      const auto in_pool = pools.find(c.input_dim());
      if (in_pool == pools.end() || in_pool->second.size() < 2)
        throw std::logic_error("run_constants: no evaluation pool for class " + name);
      double l_hat = 0.0;
      for (const auto& m : c.members()) {
        if (!is_total(m)) continue;  // smoothness audits need whole-space probes
        std::vector<std::pair<Point, Point>> pairs;
        pairs.reserve(kPairsPerMember);
        for (int t = 0; t < kPairsPerMember; ++t)
          pairs.emplace_back(detail::pick(in_pool->second, rng),
                             detail::pick(in_pool->second, rng));
        l_hat = std::max(l_hat, measures::estimate_L(m, s.loss, pairs));
      }
      const bool l_ok = l_hat <= *c.lipschitz_L() + kTol;
      if (!l_ok) out.exit_code = 2;
      classes.push_back(json{{"name", name},
                             {"declared_L", *c.lipschitz_L()},
                             {"estimated_L", l_hat},
                             {"pass", l_ok}});
    }
    entry["classes"] = std::move(classes);
    out.results.push_back(std::move(entry));
  }
  return out;
}

// Checks the pseudometric laws of the discrepancy and the relations between
// the two-pair and four-pair forms on freshly generated instances.
inline DriverResult run_axioms(const Options& opt) {
  constexpr double kTol = bounds::kStepTolerance;
  constexpr double kIdentityTol = 1e-12;
  const int workers = workers_from_env();
  if (opt.n < 0) throw std::invalid_argument("--n must be non-negative");

  DriverResult out;
  const std::uint64_t base = opt.seed ? *opt.seed : 42;
  for (int i = 0; i < opt.n; ++i) {
    const std::uint64_t seed = base + static_cast<std::uint64_t>(i);
    const scenarios::DiscInstance inst = (i % 4 == 3)
                                             ? scenarios::gen_binary_disc_instance(seed)
                                             : scenarios::gen_disc_instance(seed);

    const double d12 = measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss, workers).value;
    const double d21 = measures::discrepancy(inst.cls, inst.d2, inst.d1, inst.loss, workers).value;
    const double d11 = measures::discrepancy(inst.cls, inst.d1, inst.d1, inst.loss, workers).value;
    const double d13 = measures::discrepancy(inst.cls, inst.d1, inst.d3, inst.loss, workers).value;
    const double d23 = measures::discrepancy(inst.cls, inst.d2, inst.d3, inst.loss, workers).value;
    const double q_same =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d3, inst.d3, inst.loss, workers)
            .value;
    const double q_shift =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d3, inst.d2, inst.d3, inst.loss, workers)
            .value;
    const double q_pair =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d2, inst.d3, inst.loss, workers)
            .value;

    json checks = json::array();
    const auto check = [&checks, &out](const std::string& name, double lhs, double rhs,
                                       double tol) {
      const bool ok = lhs <= rhs + tol;
      if (!ok) out.exit_code = 2;
      checks.push_back(json{{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"pass", ok}});
    };

    check("self_zero", d11, 0.0, 0.0);
    check("symmetry", std::fabs(d12 - d21), 0.0, 0.0);
    check("non_negative", 0.0, d12, 0.0);
    check("triangle", d13, d12 + d23, kTol);
    check("quad_matches_disc", std::fabs(q_same - d12), 0.0, 0.0);
    check("quad_shift_matches_disc", std::fabs(q_shift - d12), 0.0, kIdentityTol);
    check("difference_of_discs", std::fabs(d12 - d23), q_pair, kTol);
    check("quad_sum_bound", q_pair, d12 + d23, kTol);

    // the two-sided comparison bound on a companion task with random picks
    {
      ScenarioConfig cfg;
      cfg.kind = SettingKind::two_sided;
      cfg.seed = seed;
      cfg.support_size = 16;
      cfg.h1_size = 4;
      cfg.h2_size = 8;
      const scenarios::Scenario sc = scenarios::generate(cfg);
      SplitMix64 rng = SplitMix64(seed).fork(23);
      bounds::Candidate cand;
      for (const std::string& key : candidate_keys(SettingKind::two_sided))
        cand.idx[key] = int(rng.next_below(std::uint64_t(key_class_size(sc.setting, key))));
      const bounds::BoundReport rep = bounds::compute_bound("two_sided", sc.setting, cand, workers);
      if (!rep.pass) out.exit_code = 2;
      checks.push_back(
          json{{"name", "two_sided_bound"}, {"lhs", rep.lhs}, {"rhs", rep.rhs}, {"pass", rep.pass}});
    }

    // for indicator classes, the disagreement-indicator mean gap is the disc
    if (inst.loss.kind == LossKind::zero_one) {
      const double gap = measures::symmetric_difference_gap(inst.cls, inst.d1, inst.d2).value;
      check("indicator_gap_matches", std::fabs(d12 - gap), 0.0, kIdentityTol);
    }

    out.results.push_back(json{{"instance", i},
                               {"loss", loss_kind_name(inst.loss.kind)},
                               {"checks", std::move(checks)}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output shaping: CSV flattening and the run manifest.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_number(const json& j) {
  if (j.is_null()) return "";
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_string()) return j.get<std::string>();
  std::string s;
  if (j.is_number_float())
    jsonio::detail::write_double(s, j.get<double>());
  else
    s = j.dump();
  return s;
}

inline std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

}  // namespace detail

inline std::string verify_csv(const json& results) {
  std::set<std::string> term_names;
  for (const auto& entry : results)
    for (const auto& cand : entry.at("candidates"))
      for (const auto& item : cand.at("bounds").items())
        for (const auto& term : item.value().at("terms").items()) term_names.insert(term.key());

  std::vector<std::string> header{"scenario", "candidate", "bound", "setting", "lhs",
                                  "constant", "rhs",       "slack", "pass"};
  header.insert(header.end(), term_names.begin(), term_names.end());
  std::string out = detail::csv_join(header);

  for (const auto& entry : results)
    for (const auto& cand : entry.at("candidates"))
      for (const auto& item : cand.at("bounds").items()) {
        const json& rep = item.value();
        std::vector<std::string> row{detail::csv_number(entry.at("scenario")),
                                     cand.at("name").get<std::string>(),
                                     item.key(),
                                     rep.at("setting").get<std::string>(),
                                     detail::csv_number(rep.at("lhs")),
                                     detail::csv_number(rep.at("constant")),
                                     detail::csv_number(rep.at("rhs")),
                                     detail::csv_number(rep.at("slack")),
                                     detail::csv_number(rep.at("pass"))};
        for (const auto& name : term_names) {
          const auto& terms = rep.at("terms");
          row.push_back(terms.contains(name) ? detail::csv_number(terms.at(name)) : "");
        }
        out += detail::csv_join(row);
      }
  return out;
}

inline std::string train_csv(const json& results) {
  std::set<std::string> idx_keys, term_names;
  for (const auto& entry : results) {
    for (const auto& item : entry.at("result").at("chosen").items()) idx_keys.insert(item.key());
    for (const auto& item : entry.at("result").at("objective_terms").items())
      term_names.insert(item.key());
  }
  std::vector<std::string> header{"scenario", "setting", "objective_value", "target_risk"};
  header.insert(header.end(), idx_keys.begin(), idx_keys.end());
  header.insert(header.end(), term_names.begin(), term_names.end());
  std::string out = detail::csv_join(header);
  for (const auto& entry : results) {
    const json& r = entry.at("result");
    std::vector<std::string> row{detail::csv_number(entry.at("scenario")),
                                 r.at("setting").get<std::string>(),
                                 detail::csv_number(r.at("objective_value")),
                                 detail::csv_number(r.at("target_risk"))};
    for (const auto& key : idx_keys)
      row.push_back(r.at("chosen").contains(key) ? detail::csv_number(r.at("chosen").at(key))
                                                 : "");
    for (const auto& name : term_names)
      row.push_back(r.at("objective_terms").contains(name)
                        ? detail::csv_number(r.at("objective_terms").at(name))
                        : "");
    out += detail::csv_join(row);
  }
  return out;
}

inline std::string constants_csv(const json& results) {
  std::string out =
      detail::csv_join({"scenario", "name", "kind", "declared", "estimated", "pass"});
  for (const auto& entry : results) {
    const json& loss = entry.at("loss");
    out += detail::csv_join({detail::csv_number(entry.at("scenario")), "loss",
                             loss.at("kind").get<std::string>(),
                             detail::csv_number(loss.at("declared_K")),
                             detail::csv_number(loss.at("estimated_K")),
                             detail::csv_number(loss.at("pass"))});
    for (const auto& cls : entry.at("classes"))
      out += detail::csv_join({detail::csv_number(entry.at("scenario")),
                               cls.at("name").get<std::string>(), "class",
                               detail::csv_number(cls.at("declared_L")),
                               detail::csv_number(cls.at("estimated_L")),
                               detail::csv_number(cls.at("pass"))});
  }
  return out;
}

inline std::string axioms_csv(const json& results) {
  std::string out = detail::csv_join({"instance", "loss", "check", "lhs", "rhs", "pass"});
  for (const auto& entry : results)
    for (const auto& check : entry.at("checks"))
      out += detail::csv_join({detail::csv_number(entry.at("instance")),
                               entry.at("loss").get<std::string>(),
                               check.at("name").get<std::string>(),
                               detail::csv_number(check.at("lhs")),
                               detail::csv_number(check.at("rhs")),
                               detail::csv_number(check.at("pass"))});
  return out;
}

inline json options_json(const Options& opt) {
  json j{{"setting", opt.setting},
         {"n", opt.n},
         {"seed", opt.seed ? json(*opt.seed) : json(nullptr)},
         {"out", opt.out.empty() ? json(nullptr) : json(opt.out)},
         {"format", opt.format},
         {"support_size", opt.support_size ? json(*opt.support_size) : json(nullptr)},
         {"class_size", opt.class_size ? json(*opt.class_size) : json(nullptr)},
         {"loss", opt.loss ? json(*opt.loss) : json(nullptr)},
         {"weights",
          json{{"w_disc", opt.weights.w_disc},
               {"w_inv", opt.weights.w_inv},
               {"w_tid", opt.weights.w_tid},
               {"w_const", opt.weights.w_const}}},
         {"dump_scenarios", opt.dump_scenarios},
         {"trace", opt.trace},
         {"workers", workers_from_env()}};
  return j;
}

inline json make_manifest(const Options& opt, std::uint64_t base_seed,
                          const std::vector<std::string>& outputs, std::int64_t wall_clock_ms) {
  json outs = json::array();
  for (const auto& o : outputs) outs.push_back(o);
  return json{{"command", opt.command},  {"config", options_json(opt)},
              {"seed", base_seed},       {"version", kVersion},
              {"outputs", std::move(outs)}, {"wall_clock_ms", wall_clock_ms}};
}

struct Execution {
  int exit_code = 0;
  std::string document;   // primary artifact text (JSON document or CSV table)
  std::string manifest;   // manifest JSON text (embedded in JSON documents too)
};

// Runs a command and shapes its output.  The caller decides where the text
// goes; `out_name` is only recorded in the manifest.
inline Execution execute(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.format != "json" && opt.format != "csv")
    throw std::invalid_argument("unknown format: " + opt.format + " (expected json|csv)");

  DriverResult r;
  std::uint64_t base_seed = 0;
  if (opt.command == "verify" || opt.command == "train" || opt.command == "constants")
    base_seed = base_config(opt).seed;
  else
    base_seed = opt.seed ? *opt.seed : 42;

  if (opt.command == "verify")
    r = run_verify(opt);
  else if (opt.command == "train")
    r = run_train(opt);
  else if (opt.command == "constants")
    r = run_constants(opt);
  else if (opt.command == "axioms")
    r = run_axioms(opt);
  else
    throw std::invalid_argument("unknown command: " + opt.command);

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  std::vector<std::string> outputs;
  if (!opt.out.empty()) outputs.push_back(opt.out);
  const json manifest = make_manifest(opt, base_seed, outputs, elapsed);

  Execution ex;
  ex.exit_code = r.exit_code;
  ex.manifest = jsonio::dump(manifest);
  if (opt.format == "json") {
    ex.document = jsonio::dump(json{{"manifest", manifest}, {"results", r.results}});
  } else {
    if (opt.command == "verify")
      ex.document = verify_csv(r.results);
    else if (opt.command == "train")
      ex.document = train_csv(r.results);
    else if (opt.command == "constants")
      ex.document = constants_csv(r.results);
    else
      ex.document = axioms_csv(r.results);
  }
  return ex;
}

}  // namespace shiftbound::cli
