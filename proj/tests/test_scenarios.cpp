#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "shiftbound/json.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/scenarios.hpp"

using namespace shiftbound;
using bounds::SettingKind;
using scenarios::ScenarioConfig;

TEST_CASE("generation is deterministic and seed-sensitive") {
  for (SettingKind kind : {SettingKind::standard_da, SettingKind::binary_da,
                           SettingKind::output_da, SettingKind::analogy_oda,
                           SettingKind::two_sided, SettingKind::domain_transfer}) {
    ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.seed = scenarios::default_seed_for(kind);
    const auto a = scenarios::generate(cfg);
    const auto b = scenarios::generate(cfg);
    CHECK(jsonio::dump(jsonio::of(a.setting)) == jsonio::dump(jsonio::of(b.setting)));
    CHECK(a.planted == b.planted);
    cfg.seed += 1;
    const auto c = scenarios::generate(cfg);
    CHECK(jsonio::dump(jsonio::of(a.setting)) != jsonio::dump(jsonio::of(c.setting)));
  }
}

TEST_CASE("fixed default seeds per task family") {
  CHECK(scenarios::default_seed_for(SettingKind::standard_da) == 42);
  CHECK(scenarios::default_seed_for(SettingKind::binary_da) == 7);
  CHECK(scenarios::default_seed_for(SettingKind::output_da) == 1);
  CHECK(scenarios::default_seed_for(SettingKind::analogy_oda) == 3);
  CHECK(scenarios::default_seed_for(SettingKind::two_sided) == 5);
  CHECK(scenarios::default_seed_for(SettingKind::domain_transfer) == 11);
}

TEST_CASE("zero shift makes source and target domains identical") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::standard_da;
  cfg.shift = 0.0;
  const auto sc = scenarios::generate(cfg);
  CHECK(jsonio::dump(jsonio::of(sc.setting.dist("D_S"))) ==
        jsonio::dump(jsonio::of(sc.setting.dist("D_T"))));
}

TEST_CASE("the default shifted scenario has a measurable feature gap") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::standard_da;
  cfg.seed = 42;
  const auto sc = scenarios::generate(cfg);
  const Hypothesis& f = sc.setting.cls("H1").member(0);
  const auto disc = measures::discrepancy(sc.setting.cls("H2"),
                                          pushforward(f, sc.setting.dist("D_S")),
                                          pushforward(f, sc.setting.dist("D_T")),
                                          sc.setting.loss);
  CHECK(disc.value > 0.0);
}

TEST_CASE("effective configurations apply the family couplings") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::binary_da;
  cfg.loss = LossKind::squared;  // overridden by the family
  cfg.output_dim = 3;
  const auto eff = scenarios::effective_config(cfg);
  CHECK(eff.loss == LossKind::zero_one);
  CHECK(eff.output_dim == 1);

  cfg = ScenarioConfig{};
  cfg.kind = SettingKind::domain_transfer;
  cfg.input_dim = 3;
  const auto dt = scenarios::effective_config(cfg);
  CHECK(dt.feature_dim == 3);
  CHECK(dt.output_dim == 3);

  cfg = ScenarioConfig{};
  cfg.kind = SettingKind::analogy_oda;
  cfg.output_dim = 2;
  const auto an = scenarios::effective_config(cfg);
  CHECK(an.feature_dim == 2);
}

TEST_CASE("configuration validation rejects out-of-range requests") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::standard_da;
  cfg.support_size = 0;
  CHECK_THROWS_AS(scenarios::generate(cfg), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.support_size = 1024;
  CHECK_THROWS_AS(scenarios::generate(cfg), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.input_dim = 9;
  CHECK_THROWS_AS(scenarios::generate(cfg), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.h2_size = 4096;
  cfg.support_size = 512;  // pair enumeration budget exceeded
  CHECK_THROWS_AS(scenarios::generate(cfg), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.shift = -0.5;
  CHECK_THROWS_AS(scenarios::generate(cfg), std::invalid_argument);
}

TEST_CASE("adapter classes invert their members on observed outputs") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::analogy_oda;
  const auto sc = scenarios::generate(cfg);
  const auto& h3 = sc.setting.cls("H3");
  REQUIRE(h3.inverse() != nullptr);
  const FiniteDistribution dyt =
      pushforward(sc.setting.target("y_T"), sc.setting.dist("D_T"));
  for (int i = 0; i < h3.size(); ++i) {
    const Hypothesis round_trip = compose(h3.member(i), h3.inverse()->member(i));
    for (const Point& p : dyt.support()) {
      const Point back = evaluate(round_trip, p);
      for (int k = 0; k < p.dim(); ++k) CHECK(std::fabs(back[k] - p[k]) < 1e-12);
    }
  }
}

TEST_CASE("planted adapter aligns the two labeling functions exactly") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::analogy_oda;
  const auto sc = scenarios::generate(cfg);
  const int a_idx = sc.planted.at("a");
  const Hypothesis& a = sc.setting.cls("H3").member(a_idx);
  const Hypothesis& y_s = sc.setting.target("y_S");
  const Hypothesis& y_t = sc.setting.target("y_T");
  for (const Point& x : sc.setting.dist("D_S").support()) {
    CHECK(evaluate(a, evaluate(y_t, x)) == evaluate(y_s, x));
    // the two labelings are well separated, so the adapter is informative
    CHECK(loss(sc.setting.loss, evaluate(y_s, x), evaluate(y_t, x)) >= 1.0);
  }
}

TEST_CASE("transfer scenarios have exactly idempotent reference labelings") {
  for (std::uint64_t seed = 11; seed < 16; ++seed) {
    ScenarioConfig cfg;
    cfg.kind = SettingKind::domain_transfer;
    cfg.seed = seed;
    const auto sc = scenarios::generate(cfg);
    const Hypothesis& y = sc.setting.target("y");
    for (const auto& name : {"D_1", "D_2"})
      for (const Point& p : sc.setting.dist(name).support()) {
        const Point image = evaluate(y, p);
        CHECK(evaluate(y, image) == image);
      }
  }
}

TEST_CASE("realizable transfer scenarios plant an exactly optimal candidate") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::domain_transfer;
  cfg.seed = 11;
  const auto sc = scenarios::generate(cfg);
  const int g_idx = sc.planted.at("g");
  const Hypothesis h0 =
      compose(sc.setting.target("f"), sc.setting.cls("H2").member(g_idx));
  // the reference output distribution is the planted candidate's pushforward
  CHECK(jsonio::dump(jsonio::of(pushforward(sc.setting.target("y"), sc.setting.dist("D_2")))) ==
        jsonio::dump(jsonio::of(pushforward(h0, sc.setting.dist("D_1")))));
  CHECK(measures::risk(sc.setting.dist("D_1"), h0, sc.setting.target("y"), sc.setting.loss)
            .value == 0.0);
}

TEST_CASE("declared class constants dominate their members' analytic bounds") {
  for (SettingKind kind : {SettingKind::standard_da, SettingKind::output_da,
                           SettingKind::analogy_oda, SettingKind::domain_transfer}) {
    ScenarioConfig cfg;
    cfg.kind = kind;
    const auto sc = scenarios::generate(cfg);
    for (const auto& [name, cls] : sc.setting.classes) {
      if (!cls.lipschitz_L()) continue;
      double max_member = 0.0;
      for (const auto& m : cls.members())
        max_member = std::max(max_member, lipschitz_upper_bound(m, sc.setting.loss.kind));
      CHECK(max_member <= *cls.lipschitz_L());
      CHECK(max_member == *cls.lipschitz_L());  // the declaration is tight
    }
  }
}

TEST_CASE("scenario configurations survive a JSON round trip") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::analogy_oda;
  cfg.seed = 1234;
  cfg.shift = 0.75;
  cfg.realizable = false;
  const auto eff = scenarios::effective_config(cfg);
  const auto back = jsonio::config_from(jsonio::json::parse(jsonio::dump(jsonio::of(eff))));
  CHECK(jsonio::dump(jsonio::of(back)) == jsonio::dump(jsonio::of(eff)));
}

TEST_CASE("generated settings validate structurally for every family") {
  for (SettingKind kind : {SettingKind::standard_da, SettingKind::binary_da,
                           SettingKind::output_da, SettingKind::analogy_oda,
                           SettingKind::two_sided, SettingKind::domain_transfer}) {
    ScenarioConfig cfg;
    cfg.kind = kind;
    const auto sc = scenarios::generate(cfg);
    CHECK_NOTHROW(bounds::validate_setting(sc.setting));
    CHECK(sc.config.kind == kind);
  }
}
