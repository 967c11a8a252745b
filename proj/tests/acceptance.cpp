// Acceptance gate: exercises the library end to end at desk scale and prints
// one verdict line per criterion.  Exits nonzero when any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "shiftbound/adapt.hpp"
#include "shiftbound/bounds.hpp"
#include "shiftbound/cli.hpp"
#include "shiftbound/json.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/scenarios.hpp"

using namespace shiftbound;
using bounds::SettingKind;
using scenarios::ScenarioConfig;

namespace {

bool g_all_ok = true;

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void verdict(int id, const std::string& label, bool ok, double elapsed,
             const std::string& detail) {
  if (!ok) g_all_ok = false;
  std::printf("[%s] %2d/10 %-44s %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, label.c_str(),
              detail.c_str(), elapsed);
  std::fflush(stdout);
}

scenarios::DiscInstance instance_mix(std::uint64_t seed) {
  return (seed % 4 == 0) ? scenarios::gen_binary_disc_instance(seed)
                         : scenarios::gen_disc_instance(seed);
}

scenarios::Scenario make(SettingKind kind, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  return scenarios::generate(cfg);
}

bounds::Candidate random_candidate(const bounds::DASetting& s, std::uint64_t seed) {
  SplitMix64 rng = SplitMix64(seed).fork(3);
  bounds::Candidate c;
  for (const std::string& key : cli::candidate_keys(s.kind))
    c.idx[key] = int(rng.next_below(std::uint64_t(cli::key_class_size(s, key))));
  return c;
}

bool report_holds(const bounds::BoundReport& rep) {
  if (!rep.pass || rep.slack < -1e-9) return false;
  for (const auto& step : rep.steps)
    if (!step.pass) return false;
  return true;
}

// --------------------------------------------------------------------------

void criterion_1_pseudometric() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kTol = 1e-9;
  int checked = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
    const auto inst = instance_mix(seed);
    const double d12 = measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    const double d21 = measures::discrepancy(inst.cls, inst.d2, inst.d1, inst.loss).value;
    const double d11 = measures::discrepancy(inst.cls, inst.d1, inst.d1, inst.loss).value;
    const double d13 = measures::discrepancy(inst.cls, inst.d1, inst.d3, inst.loss).value;
    const double d23 = measures::discrepancy(inst.cls, inst.d2, inst.d3, inst.loss).value;
    ok = d11 <= kTol && std::fabs(d12 - d21) <= kTol && d12 >= 0.0 &&
         d13 <= d12 + d23 + kTol;
    ++checked;
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 30.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d instances, tol 1e-9, limit 30s", checked);
  verdict(1, "discrepancy pseudometric laws", ok, elapsed, buf);
}

void criterion_2_quad_relations() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kTol = 1e-9;
  constexpr double kIdentityTol = 1e-12;
  int checked = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
    const auto inst = instance_mix(seed);
    const double d12 = measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    const double d23 = measures::discrepancy(inst.cls, inst.d2, inst.d3, inst.loss).value;
    const double q_pair =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d2, inst.d3, inst.loss).value;
    const double q_same =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d3, inst.d3, inst.loss).value;
    const double q_shift =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d3, inst.d2, inst.d3, inst.loss).value;
    ok = std::fabs(d12 - d23) <= q_pair + kTol && q_pair <= d12 + d23 + kTol &&
         std::fabs(q_same - d12) < kIdentityTol && std::fabs(q_shift - d12) < kIdentityTol;
    ++checked;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d quads, tol 1e-9, identities 1e-12", checked);
  verdict(2, "four-distribution comparison relations", ok, seconds_since(start), buf);
}

void criterion_3_two_sided_bound() {
  const auto start = std::chrono::steady_clock::now();
  int checked = 0;
  bool ok = true;
  for (int i = 0; i < 100 && ok; ++i) {
    const auto sc = make(SettingKind::two_sided, 5 + std::uint64_t(i));
    const auto cand = random_candidate(sc.setting, 5 + std::uint64_t(i));
    ok = report_holds(bounds::compute_bound("two_sided", sc.setting, cand, 2));
    ++checked;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d scenarios, random pairs, slack >= -1e-9", checked);
  verdict(3, "two-sided risk comparison bound", ok, seconds_since(start), buf);
}

void criterion_4_proof_scripts() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int checked = 0;
  const std::array<std::pair<SettingKind, std::uint64_t>, 3> plans{{
      {SettingKind::output_da, 1},
      {SettingKind::analogy_oda, 3},
      {SettingKind::domain_transfer, 11},
  }};
  for (const auto& [kind, base] : plans) {
    for (int i = 0; i < 100 && ok; ++i) {
      const auto sc = make(kind, base + std::uint64_t(i));
      const auto cand = random_candidate(sc.setting, base + std::uint64_t(i));
      for (const std::string& bid : bounds::bound_ids_for(kind))
        ok = ok && report_holds(bounds::compute_bound(bid, sc.setting, cand, 4));
      ++checked;
    }
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 300.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d scenarios, every step, slack >= -1e-9, limit 300s", checked);
  verdict(4, "stepwise derivation scripts", ok, elapsed, buf);
}

void criterion_5_baseline_bounds() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int checked = 0;
  for (int i = 0; i < 100 && ok; ++i) {
    const auto sc = make(SettingKind::standard_da, 42 + std::uint64_t(i));
    ok = report_holds(
        bounds::compute_bound("mansour", sc.setting, random_candidate(sc.setting, 42 + std::uint64_t(i)), 2));
    ++checked;
  }
  for (int i = 0; i < 100 && ok; ++i) {
    const auto sc = make(SettingKind::binary_da, 7 + std::uint64_t(i));
    ok = report_holds(
        bounds::compute_bound("bendavid", sc.setting, random_candidate(sc.setting, 7 + std::uint64_t(i)), 2));
    ++checked;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d scenarios, slack >= -1e-9", checked);
  verdict(5, "input-side baseline bounds", ok, seconds_since(start), buf);
}

void criterion_6_constants() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kTol = 1e-12;
  constexpr int kTriples = 100000;
  constexpr int kPairs = 1000;
  bool ok = true;

  // empirical triangle factors per loss family
  const std::array<std::tuple<SettingKind, std::uint64_t, LossKind, double>, 3> families{{
      {SettingKind::standard_da, 42, LossKind::absolute, 1.0},
      {SettingKind::standard_da, 43, LossKind::squared, 2.0},
      {SettingKind::binary_da, 7, LossKind::zero_one, 1.0},
  }};
  for (const auto& [kind, seed, loss, limit] : families) {
    ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.seed = seed;
    if (kind == SettingKind::standard_da) cfg.loss = loss;
    const auto sc = scenarios::generate(cfg);
    const auto pools = cli::detail::point_pools(sc.setting);
    const auto& pool = pools.at(sc.setting.loss.dimension);
    SplitMix64 rng = SplitMix64(seed).fork(31);
    std::vector<std::array<Point, 3>> triples;
    triples.reserve(kTriples);
    for (int t = 0; t < kTriples; ++t)
      triples.push_back({cli::detail::pick(pool, rng), cli::detail::pick(pool, rng),
                         cli::detail::pick(pool, rng)});
    const double k_hat = measures::estimate_K(sc.setting.loss, triples);
    ok = ok && k_hat <= limit + kTol && k_hat <= sc.setting.loss.triangle_constant_K + kTol;
  }

  // every declared smoothness factor dominates its member-wise estimate
  int members = 0;
  const std::array<std::pair<SettingKind, std::uint64_t>, 5> worlds{{
      {SettingKind::standard_da, 42},
      {SettingKind::binary_da, 7},
      {SettingKind::output_da, 1},
      {SettingKind::analogy_oda, 3},
      {SettingKind::domain_transfer, 11},
  }};
  for (const auto& [kind, seed] : worlds) {
    const auto sc = make(kind, seed);
    const bounds::DASetting& s = sc.setting;
    const auto pools = cli::detail::point_pools(s);
    SplitMix64 rng = SplitMix64(seed).fork(33);
    for (const auto& [name, c] : s.classes) {
      if (!c.lipschitz_L()) continue;
      if (s.loss.kind == LossKind::zero_one && (c.input_dim() != 1 || c.output_dim() != 1))
        continue;
      const auto& pool = pools.at(c.input_dim());
      for (const auto& m : c.members()) {
        if (!is_total(m)) continue;  // lookup members have no whole-space slope
        std::vector<std::pair<Point, Point>> pairs;
        pairs.reserve(kPairs);
        for (int t = 0; t < kPairs; ++t)
          pairs.emplace_back(cli::detail::pick(pool, rng), cli::detail::pick(pool, rng));
        ok = ok && measures::estimate_L(m, s.loss, pairs) <= *c.lipschitz_L() + kTol;
        ++members;
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "3 loss families x %d triples, %d members x %d pairs, tol 1e-12",
                kTriples, members, kPairs);
  verdict(6, "declared constants dominate estimates", ok, seconds_since(start), buf);
}

void criterion_7_trainers() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int audited = 0;
  const std::array<std::pair<SettingKind, std::uint64_t>, 4> plans{{
      {SettingKind::standard_da, 42},
      {SettingKind::output_da, 1},
      {SettingKind::analogy_oda, 3},
      {SettingKind::domain_transfer, 11},
  }};
  for (const auto& [kind, base] : plans)
    for (int i = 0; i < 20 && ok; ++i) {
      const auto r = adapt::train(make(kind, base + std::uint64_t(i)), adapt::Weights{}, 2);
      ok = adapt::audit_trace(r);
      ++audited;
    }

  // with no distribution shift the full objective matches plain fitting
  if (ok) {
    ScenarioConfig cfg;
    cfg.kind = SettingKind::output_da;
    cfg.seed = 1;
    cfg.shift = 0.0;
    cfg.feature_dim = 1;
    const auto sc = scenarios::generate(cfg);
    const auto trained = adapt::train(sc, adapt::Weights{}, 2);
    const auto erm = adapt::train(sc, adapt::erm_weights(), 2);
    ok = trained.target_risk && erm.target_risk &&
         std::fabs(*trained.target_risk - *erm.target_risk) <= 1e-6;
  }

  // the realizable transfer task is solved exactly and its reports pass
  if (ok) {
    const auto sc = make(SettingKind::domain_transfer, 11);
    const auto r = adapt::train(sc, adapt::Weights{}, 2);
    ok = r.target_risk && *r.target_risk == 0.0;
    bounds::Candidate cand;
    cand.idx = r.chosen;
    for (const std::string& bid : bounds::bound_ids_for(SettingKind::domain_transfer))
      ok = ok && report_holds(bounds::compute_bound(bid, sc.setting, cand, 2));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d audits, no-shift match 1e-6, realizable risk 0", audited);
  verdict(7, "trainer optimality and alignment", ok, seconds_since(start), buf);
}

void criterion_8_idempotent_targets() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  int checked = 0;
  for (int i = 0; i < 20 && ok; ++i) {
    const auto sc = make(SettingKind::domain_transfer, 11 + std::uint64_t(i));
    const bounds::DASetting& s = sc.setting;
    const Hypothesis& y = s.target("y");
    for (const auto* d : {&s.dist("D_1"), &s.dist("D_2")})
      for (const Point& p : d->support()) {
        const Point yp = evaluate(y, p);
        if (!(evaluate(y, yp) == yp)) ok = false;
      }
    const FiniteDistribution dy2 = pushforward(y, s.dist("D_2"));
    const double residual =
        measures::risk(dy2, y, Hypothesis::identity(dy2.dim()), s.loss).value;
    ok = ok && residual == 0.0;
    ++checked;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d scenarios, exact fixpoints, zero residual", checked);
  verdict(8, "transfer targets are idempotent", ok, seconds_since(start), buf);
}

void criterion_9_determinism() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  for (const char* setting : {"oda", "dt"}) {
    cli::Options opt;
    opt.command = "verify";
    opt.setting = setting;
    opt.n = 2;
    opt.support_size = 16;
    opt.class_size = 8;
    ::unsetenv("SHIFTBOUND_WORKERS");
    const std::string sequential = jsonio::dump(cli::run_verify(opt).results);
    ::setenv("SHIFTBOUND_WORKERS", "4", 1);
    const std::string parallel = jsonio::dump(cli::run_verify(opt).results);
    ::unsetenv("SHIFTBOUND_WORKERS");
    ok = ok && sequential == parallel && !sequential.empty();
  }
  verdict(9, "workers leave artifacts byte-identical", ok, seconds_since(start),
          "verify x2 settings, 1 vs 4 workers");
}

void criterion_10_indicator_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kTol = 1e-12;
  bool ok = true;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 50 && ok; ++seed) {
    const auto inst = scenarios::gen_binary_disc_instance(seed);
    const double d = measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    const double g = measures::symmetric_difference_gap(inst.cls, inst.d1, inst.d2).value;
    ok = std::fabs(d - g) < kTol;
    ++checked;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d binary instances, tol 1e-12", checked);
  verdict(10, "indicator-gap equals discrepancy", ok, seconds_since(start), buf);
}

}  // namespace

int main() {
  std::printf("acceptance gate: finite-instance bound checker\n");
  criterion_1_pseudometric();
  criterion_2_quad_relations();
  criterion_3_two_sided_bound();
  criterion_4_proof_scripts();
  criterion_5_baseline_bounds();
  criterion_6_constants();
  criterion_7_trainers();
  criterion_8_idempotent_targets();
  criterion_9_determinism();
  criterion_10_indicator_equivalence();
  std::printf(g_all_ok ? "acceptance: ALL CRITERIA PASS\n" : "acceptance: FAILURES PRESENT\n");
  return g_all_ok ? 0 : 1;
}
