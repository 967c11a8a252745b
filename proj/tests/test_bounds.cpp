#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "shiftbound/bounds.hpp"
#include "shiftbound/json.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/rng.hpp"
#include "shiftbound/scenarios.hpp"

using namespace shiftbound;
using bounds::Candidate;
using bounds::SettingKind;

namespace {

Candidate random_candidate(const bounds::DASetting& s, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Candidate c;
  const auto draw = [&rng](int n) { return int(rng.next_below(std::uint64_t(n))); };
  switch (s.kind) {
    case SettingKind::standard_da:
    case SettingKind::binary_da:
      c.idx = {{"f", draw(s.cls("H1").size())}, {"g", draw(s.cls("H2").size())}};
      break;
    case SettingKind::output_da:
      c.idx = {{"f", draw(s.cls("H1").size())},
               {"g", draw(s.cls("H2").size())},
               {"ghat", draw(s.cls("H2_prime").size())}};
      break;
    case SettingKind::analogy_oda:
      c.idx = {{"f", draw(s.cls("H1").size())},
               {"a", draw(s.cls("H3").size())},
               {"b", draw(s.cls("H4").size())}};
      break;
    case SettingKind::domain_transfer:
      c.idx = {{"g", draw(s.cls("H2").size())}};
      break;
    case SettingKind::two_sided:
      c.idx = {{"f1", draw(s.cls("H1").size())}, {"g1", draw(s.cls("H2").size())},
               {"f2", draw(s.cls("H1").size())}, {"g2", draw(s.cls("H2").size())},
               {"a1", draw(s.cls("H3").size())}, {"a2", draw(s.cls("H3").size())}};
      break;
  }
  return c;
}

void check_report_arithmetic(const bounds::BoundReport& rep) {
  double total = 0.0;
  for (const auto& [name, value] : rep.terms) {
    CHECK(value >= 0.0);
    total += value;
  }
  CHECK(rep.rhs == rep.constant * total);
  CHECK(rep.slack == rep.rhs - rep.lhs);
  for (const auto& step : rep.steps) CHECK(step.pass);
  CHECK(rep.pass);
  CHECK(rep.lhs <= rep.rhs + bounds::kStepTolerance);
}

}  // namespace

TEST_CASE("setting kind names round trip") {
  for (SettingKind k : {SettingKind::standard_da, SettingKind::binary_da, SettingKind::output_da,
                        SettingKind::analogy_oda, SettingKind::two_sided,
                        SettingKind::domain_transfer})
    CHECK(bounds::setting_kind_from_name(bounds::setting_kind_name(k)) == k);
  CHECK_THROWS_AS(bounds::setting_kind_from_name("nope"), std::invalid_argument);
}

TEST_CASE("best_in_class picks the exact minimizer with lowest-index ties") {
  const FiniteDistribution d(
      {Point(std::vector<double>{0.0}), Point(std::vector<double>{1.0})}, {0.5, 0.5});
  const HypothesisClass c({Hypothesis::affine({{1.0}}, {0.5}),   // risk 0.5
                           Hypothesis::identity(1),              // risk 0
                           Hypothesis::affine({{1.0}}, {0.0})}); // risk 0, higher index
  const auto best =
      bounds::best_in_class(c, std::nullopt, d, Hypothesis::identity(1), LossSpec::absolute(1));
  CHECK(best.index == 1);
  CHECK(best.risk.value == 0.0);
}

TEST_CASE("source-target bound reports pass on generated scenarios") {
  for (std::uint64_t seed = 42; seed < 47; ++seed) {
    scenarios::ScenarioConfig cfg;
    cfg.kind = SettingKind::standard_da;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    for (std::uint64_t cs = 0; cs < 3; ++cs) {
      const Candidate cand = random_candidate(sc.setting, 100 + cs);
      const auto rep = bounds::compute_bound("mansour", sc.setting, cand);
      check_report_arithmetic(rep);
      CHECK(rep.steps.size() == 3);
      CHECK(rep.terms.size() == 4);
      // the left side is the candidate's true target risk
      const Hypothesis h = compose(sc.setting.cls("H1").member(cand.at("f")),
                                   sc.setting.cls("H2").member(cand.at("g")));
      CHECK(rep.lhs ==
            measures::risk(sc.setting.dist("D_T"), h, sc.setting.target("y_T"), sc.setting.loss)
                .value);
    }
  }
}

TEST_CASE("binary-class bound requires the indicator loss") {
  scenarios::ScenarioConfig cfg;
  cfg.kind = SettingKind::standard_da;
  cfg.seed = 42;
  const auto sc = scenarios::generate(cfg);
  CHECK_THROWS_AS(bounds::compute_bound("bendavid", sc.setting, random_candidate(sc.setting, 1)),
                  std::invalid_argument);
}

TEST_CASE("binary-class bound reports pass with a non-negative joint term") {
  for (std::uint64_t seed = 7; seed < 11; ++seed) {
    scenarios::ScenarioConfig cfg;
    cfg.kind = SettingKind::binary_da;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    const Candidate cand = random_candidate(sc.setting, seed);
    const auto rep = bounds::compute_bound("bendavid", sc.setting, cand);
    check_report_arithmetic(rep);
    CHECK(rep.steps.size() == 3);
    CHECK(rep.terms.size() == 3);
    CHECK(rep.term("lambda") >= 0.0);
    CHECK(rep.constant == 1.0);
  }
}

TEST_CASE("output-side recovery bound carries thirteen verified steps") {
  for (std::uint64_t seed = 1; seed < 4; ++seed) {
    scenarios::ScenarioConfig cfg;
    cfg.kind = SettingKind::output_da;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    const Candidate cand = random_candidate(sc.setting, seed);
    const auto rep = bounds::compute_bound("oda", sc.setting, cand);
    check_report_arithmetic(rep);
    CHECK(rep.steps.size() == 13);
    CHECK(rep.terms.size() == 7);
  }
}

TEST_CASE("adapter bound carries eleven verified steps") {
  for (std::uint64_t seed = 3; seed < 6; ++seed) {
    scenarios::ScenarioConfig cfg;
    cfg.kind = SettingKind::analogy_oda;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    const Candidate cand = random_candidate(sc.setting, seed);
    const auto rep = bounds::compute_bound("analogy", sc.setting, cand);
    check_report_arithmetic(rep);
    CHECK(rep.steps.size() == 11);
    CHECK(rep.terms.size() == 5);
  }
}

TEST_CASE("transfer bounds pass and the constancy reduction adds a step") {
  for (std::uint64_t seed = 11; seed < 14; ++seed) {
    scenarios::ScenarioConfig cfg;
    cfg.kind = SettingKind::domain_transfer;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    const Candidate cand = random_candidate(sc.setting, seed);
    const auto plain = bounds::compute_bound("dt", sc.setting, cand);
    const auto reduced = bounds::compute_bound("dtn", sc.setting, cand);
    check_report_arithmetic(plain);
    check_report_arithmetic(reduced);
    CHECK(reduced.steps.size() == plain.steps.size() + 1);
    CHECK(plain.lhs == reduced.lhs);
  }
}

TEST_CASE("two-sided comparison bound passes with the derivation steps") {
  for (std::uint64_t seed = 5; seed < 8; ++seed) {
    scenarios::ScenarioConfig cfg;
    cfg.kind = SettingKind::two_sided;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    const Candidate cand = random_candidate(sc.setting, seed);
    const auto rep = bounds::compute_bound("two_sided", sc.setting, cand);
    check_report_arithmetic(rep);
    CHECK(rep.terms.size() == 1);
    // the left side is an absolute difference of two class discrepancies
    CHECK(rep.lhs >= 0.0);
    const auto steps = bounds::verify_proof_script("disc_comparison", sc.setting, cand);
    for (const auto& st : steps) CHECK(st.pass);
  }
}

TEST_CASE("bound identifiers map settings to their applicable reports") {
  CHECK(bounds::bound_ids_for(SettingKind::standard_da) == std::vector<std::string>{"mansour"});
  CHECK(bounds::bound_ids_for(SettingKind::binary_da) == std::vector<std::string>{"bendavid"});
  CHECK(bounds::bound_ids_for(SettingKind::output_da) == std::vector<std::string>{"oda"});
  CHECK(bounds::bound_ids_for(SettingKind::analogy_oda) == std::vector<std::string>{"analogy"});
  CHECK(bounds::bound_ids_for(SettingKind::two_sided) == std::vector<std::string>{"two_sided"});
  CHECK(bounds::bound_ids_for(SettingKind::domain_transfer) ==
        (std::vector<std::string>{"dt", "dtn"}));
  scenarios::ScenarioConfig cfg;
  cfg.kind = SettingKind::standard_da;
  const auto sc = scenarios::generate(cfg);
  CHECK_THROWS_AS(bounds::compute_bound("unknown", sc.setting, random_candidate(sc.setting, 1)),
                  std::invalid_argument);
  Candidate empty;
  CHECK_THROWS_AS(bounds::compute_bound("mansour", sc.setting, empty), std::invalid_argument);
}

TEST_CASE("a dishonest triangle constant is caught by the step checks") {
  // Hand-built task: squared loss with a deliberately understated triangle
  // constant. The candidate's target risk is 4, but the best-in-class detour
  // only sums to 2, so the first derivation step must fail.
  bounds::DASetting s;
  s.kind = SettingKind::standard_da;
  s.loss = LossSpec{LossKind::squared, 1, 0.5};  // dishonest: the true constant is 3
  const FiniteDistribution d = FiniteDistribution::point_mass(Point(std::vector<double>{0.0}));
  s.distributions.emplace("D_S", d);
  s.distributions.emplace("D_T", d);
  const Hypothesis zero = Hypothesis::affine({{0.0}}, {0.0});
  s.targets.emplace("y_S", zero);
  s.targets.emplace("y_T", zero);
  s.classes.emplace("H1", HypothesisClass({Hypothesis::identity(1)}));
  s.classes.emplace("H2", HypothesisClass({Hypothesis::affine({{1.0}}, {2.0}),
                                           Hypothesis::affine({{1.0}}, {1.0})}));
  Candidate cand;
  cand.idx = {{"f", 0}, {"g", 0}};
  const auto rep = bounds::compute_bound("mansour", s, cand);
  CHECK(rep.lhs == 4.0);
  CHECK(!rep.steps[0].pass);
  CHECK(!rep.pass);
}

TEST_CASE("bound reports survive a JSON round trip byte for byte") {
  scenarios::ScenarioConfig cfg;
  cfg.kind = SettingKind::output_da;
  cfg.seed = 1;
  const auto sc = scenarios::generate(cfg);
  const auto rep = bounds::compute_bound("oda", sc.setting, random_candidate(sc.setting, 9));
  const jsonio::json j = jsonio::of(rep);
  const bounds::BoundReport back = jsonio::report_from(jsonio::json::parse(jsonio::dump(j)));
  CHECK(jsonio::dump(jsonio::of(back)) == jsonio::dump(j));
  CHECK(back.term("disc_H2(f.DS,ghat.DyT)") == rep.term("disc_H2(f.DS,ghat.DyT)"));
}
