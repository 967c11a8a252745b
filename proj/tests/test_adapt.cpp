#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shiftbound/adapt.hpp"
#include "shiftbound/json.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/scenarios.hpp"

using namespace shiftbound;
using bounds::SettingKind;
using scenarios::ScenarioConfig;

namespace {

scenarios::Scenario make_scenario(SettingKind kind, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  return scenarios::generate(cfg);
}

}  // namespace

TEST_CASE("every trainer's trace is exhaustive and consistent with its choice") {
  const auto std_sc = make_scenario(SettingKind::standard_da, 42);
  const auto std_r = adapt::train(std_sc);
  CHECK(adapt::audit_trace(std_r));
  CHECK(std_r.trace.size() ==
        std::size_t(std_sc.setting.cls("H1").size()) *
            std::size_t(std_sc.setting.cls("H2").size()));

  const auto out_sc = make_scenario(SettingKind::output_da, 1);
  const auto out_r = adapt::train(out_sc);
  CHECK(adapt::audit_trace(out_r));
  CHECK(out_r.trace.size() == std::size_t(out_sc.setting.cls("H1").size()) *
                                  std::size_t(out_sc.setting.cls("H2").size()) *
                                  std::size_t(out_sc.setting.cls("H2_prime").size()));

  const auto an_sc = make_scenario(SettingKind::analogy_oda, 3);
  const auto an_r = adapt::train(an_sc);
  CHECK(adapt::audit_trace(an_r));
  CHECK(an_r.trace.size() == std::size_t(an_sc.setting.cls("H1").size()) *
                                 std::size_t(an_sc.setting.cls("H3").size()) *
                                 std::size_t(an_sc.setting.cls("H4").size()));

  const auto dt_sc = make_scenario(SettingKind::domain_transfer, 11);
  const auto dt_r = adapt::train(dt_sc);
  CHECK(adapt::audit_trace(dt_r));
  CHECK(dt_r.trace.size() == std::size_t(dt_sc.setting.cls("H2").size()));
}

TEST_CASE("zero mismatch weight reduces training to source-risk minimization") {
  const auto sc = make_scenario(SettingKind::standard_da, 42);
  adapt::Weights w;
  w.w_disc = 0.0;
  const auto r = adapt::train(sc, w);

  // independent enumeration of the pure source risk
  const auto& s = sc.setting;
  double best = std::numeric_limits<double>::infinity();
  int best_f = -1, best_g = -1;
  for (int fi = 0; fi < s.cls("H1").size(); ++fi)
    for (int gi = 0; gi < s.cls("H2").size(); ++gi) {
      const double v = measures::risk(s.dist("D_S"),
                                      compose(s.cls("H1").member(fi), s.cls("H2").member(gi)),
                                      s.target("y_S"), s.loss)
                           .value;
      if (v < best) {
        best = v;
        best_f = fi;
        best_g = gi;
      }
    }
  CHECK(r.chosen.at("f") == best_f);
  CHECK(r.chosen.at("g") == best_g);
  CHECK(r.objective_value == best);
  CHECK(r.objective_terms.at("disc") >= 0.0);  // still reported
}

TEST_CASE("a dominant inversion weight forces a near-exact recovery map") {
  const auto sc = make_scenario(SettingKind::output_da, 1);
  adapt::Weights w;
  w.w_inv = 1e12;
  const auto r = adapt::train(sc, w);
  // the class contains exact right inverses, so the chosen pair composes to
  // the identity up to floating-point rounding
  CHECK(r.objective_terms.at("inv") < 1e-9);
}

TEST_CASE("training views expose output samples but never the target labeler") {
  const auto sc = make_scenario(SettingKind::output_da, 1);
  const auto view = adapt::OutputView::from_setting(sc.setting);
  CHECK(jsonio::dump(jsonio::of(view.d_yt)) ==
        jsonio::dump(jsonio::of(pushforward(sc.setting.target("y_T"), sc.setting.dist("D_T")))));

  const auto tv = adapt::TransferView::from_setting(
      make_scenario(SettingKind::domain_transfer, 11).setting);
  CHECK(tv.d_y2.dim() == tv.d_1.dim());
}

TEST_CASE("the realizable transfer scenario trains to an exact zero") {
  const auto sc = make_scenario(SettingKind::domain_transfer, 11);
  const auto r = adapt::train(sc);
  CHECK(r.chosen.at("g") == sc.planted.at("g"));
  CHECK(r.objective_value == 0.0);
  REQUIRE(r.target_risk.has_value());
  CHECK(*r.target_risk == 0.0);
}

TEST_CASE("without shift the full objective and plain fitting agree on target risk") {
  ScenarioConfig cfg;
  cfg.kind = SettingKind::output_da;
  cfg.seed = 1;
  cfg.shift = 0.0;
  cfg.feature_dim = 1;
  const auto sc = scenarios::generate(cfg);
  const auto trained = adapt::train(sc);
  const auto erm = adapt::train(sc, adapt::erm_weights());
  REQUIRE(trained.target_risk.has_value());
  REQUIRE(erm.target_risk.has_value());
  CHECK(std::fabs(*trained.target_risk - *erm.target_risk) <= 1e-6);
  CHECK(*trained.target_risk <= 1e-6);
}

TEST_CASE("trainer weights default sensibly and the comparison task is rejected") {
  const adapt::Weights erm = adapt::erm_weights();
  CHECK(erm.w_disc == 0.0);
  CHECK(erm.w_inv == 0.0);
  CHECK(erm.w_const == 0.0);
  CHECK(erm.w_tid == 1.0);
  CHECK_THROWS_AS(adapt::train(make_scenario(SettingKind::two_sided, 5)),
                  std::invalid_argument);
}

TEST_CASE("train results serialize with chosen indices and a target risk") {
  const auto r = adapt::train(make_scenario(SettingKind::standard_da, 42));
  const jsonio::json j = jsonio::of(r);
  CHECK(j.at("setting").get<std::string>() == "standard_da");
  CHECK(j.at("chosen").contains("f"));
  CHECK(j.at("chosen").contains("g"));
  CHECK(!j.at("target_risk").is_null());
  CHECK(j.at("trace_size").get<std::size_t>() == r.trace.size());
}
