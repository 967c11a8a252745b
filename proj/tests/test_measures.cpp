#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "shiftbound/json.hpp"
#include "shiftbound/measures.hpp"
#include "shiftbound/scenarios.hpp"

using namespace shiftbound;

namespace {

FiniteDistribution uniform01() {
  return FiniteDistribution(
      {Point(std::vector<double>{0.0}), Point(std::vector<double>{1.0})}, {0.5, 0.5});
}

HypothesisClass const_and_identity() {
  return HypothesisClass(
      {Hypothesis::affine({{0.0}}, {0.0}), Hypothesis::identity(1)});
}

}  // namespace

TEST_CASE("risk of identity versus doubling on the uniform pair") {
  const Hypothesis h1 = Hypothesis::identity(1);
  const Hypothesis h2 = Hypothesis::affine({{2.0}}, {0.0});
  CHECK(measures::risk(uniform01(), h1, h2, LossSpec::absolute(1)).value == 0.5);
  CHECK_THROWS_AS(
      measures::risk(uniform01(), h1, Hypothesis::identity(2), LossSpec::absolute(1)),
      std::invalid_argument);
}

TEST_CASE("empirical risk averages the per-sample loss") {
  const std::vector<std::pair<Point, Point>> samples{
      {Point(std::vector<double>{0.0}), Point(std::vector<double>{1.0})},
      {Point(std::vector<double>{0.0}), Point(std::vector<double>{3.0})}};
  CHECK(measures::empirical_risk(samples, LossSpec::squared(1)).value == 5.0);
  CHECK_THROWS_AS(measures::empirical_risk({}, LossSpec::squared(1)), std::invalid_argument);
}

TEST_CASE("discrepancy on point masses with a two-member class") {
  const HypothesisClass c = const_and_identity();
  const FiniteDistribution d1 = FiniteDistribution::point_mass(Point(std::vector<double>{0.0}));
  const FiniteDistribution d2 = FiniteDistribution::point_mass(Point(std::vector<double>{1.0}));
  const auto r = measures::discrepancy(c, d1, d2, LossSpec::absolute(1));
  CHECK(r.value == 1.0);
  CHECK(r.witness_c1 == 0);
  CHECK(r.witness_c2 == 1);

  // reproducing the witness pair risk difference is exact
  const double r1 = measures::risk(d1, c.member(0), c.member(1), LossSpec::absolute(1)).value;
  const double r2 = measures::risk(d2, c.member(0), c.member(1), LossSpec::absolute(1)).value;
  CHECK(std::fabs(r1 - r2) == r.value);

  // results serialize with their witness indices and round-trip exactly
  const jsonio::json j = jsonio::of(r);
  CHECK(j.at("value").get<double>() == r.value);
  const auto back = jsonio::discrepancy_from(jsonio::json::parse(jsonio::dump(j)));
  CHECK(back.value == r.value);
  CHECK(back.witness_c1 == r.witness_c1);
  CHECK(back.witness_c2 == r.witness_c2);
  const auto q = measures::quad_discrepancy(c, d1, d2, d1, d1, LossSpec::absolute(1));
  CHECK(jsonio::quad_discrepancy_from(jsonio::of(q)).value == q.value);
}

TEST_CASE("discrepancy validates dimensions against the loss") {
  const HypothesisClass c = const_and_identity();
  const FiniteDistribution d1 = FiniteDistribution::point_mass(Point(std::vector<double>{0.0, 0.0}));
  CHECK_THROWS_AS(measures::discrepancy(c, d1, d1, LossSpec::absolute(1)),
                  std::invalid_argument);
  const FiniteDistribution s1 = FiniteDistribution::point_mass(Point(std::vector<double>{0.0}));
  CHECK_THROWS_AS(measures::discrepancy(c, s1, s1, LossSpec::absolute(2)),
                  std::invalid_argument);
}

TEST_CASE("discrepancy behaves as a pseudometric on generated instances") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = (seed % 4 == 3) ? scenarios::gen_binary_disc_instance(seed)
                                      : scenarios::gen_disc_instance(seed);
    const double d12 =
        measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    const double d21 =
        measures::discrepancy(inst.cls, inst.d2, inst.d1, inst.loss).value;
    const double d11 =
        measures::discrepancy(inst.cls, inst.d1, inst.d1, inst.loss).value;
    const double d13 =
        measures::discrepancy(inst.cls, inst.d1, inst.d3, inst.loss).value;
    const double d23 =
        measures::discrepancy(inst.cls, inst.d2, inst.d3, inst.loss).value;
    CHECK(d11 == 0.0);
    CHECK(d12 == d21);
    CHECK(d12 >= 0.0);
    CHECK(d13 <= d12 + d23 + 1e-9);
  }
}

TEST_CASE("four-distribution form collapses to the two-distribution form") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = scenarios::gen_disc_instance(seed);
    const double d12 =
        measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    // fourth pair identical: the second unit vanishes exactly
    const double q_same = measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d3,
                                                     inst.d3, inst.loss)
                              .value;
    CHECK(q_same == d12);
    // shared second slot: differences of differences cancel to rounding
    const double q_shift = measures::quad_discrepancy(inst.cls, inst.d1, inst.d3, inst.d2,
                                                      inst.d3, inst.loss)
                               .value;
    CHECK(std::fabs(q_shift - d12) < 1e-12);
  }
}

TEST_CASE("four-distribution form dominates the difference of discrepancies") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = (seed % 4 == 3) ? scenarios::gen_binary_disc_instance(seed)
                                      : scenarios::gen_disc_instance(seed);
    const double d12 =
        measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    const double d23 =
        measures::discrepancy(inst.cls, inst.d2, inst.d3, inst.loss).value;
    const double q = measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d2, inst.d3,
                                                inst.loss)
                         .value;
    CHECK(std::fabs(d12 - d23) <= q + 1e-9);
    CHECK(q <= d12 + d23 + 1e-9);
  }
}

TEST_CASE("parallel evaluation matches sequential bit for bit") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = scenarios::gen_disc_instance(seed);
    const auto seq = measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss, 1);
    const auto par = measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss, 4);
    CHECK(seq.value == par.value);
    CHECK(seq.witness_c1 == par.witness_c1);
    CHECK(seq.witness_c2 == par.witness_c2);
    const auto qseq =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d2, inst.d3, inst.loss, 1);
    const auto qpar =
        measures::quad_discrepancy(inst.cls, inst.d1, inst.d2, inst.d2, inst.d3, inst.loss, 4);
    CHECK(qseq.value == qpar.value);
    CHECK(qseq.witness_c1 == qpar.witness_c1);
    CHECK(qseq.witness_c2 == qpar.witness_c2);
  }
}

TEST_CASE("disagreement indicators of a two-constant class") {
  const HypothesisClass c(
      {Hypothesis::affine({{0.0}}, {0.0}), Hypothesis::affine({{0.0}}, {1.0})});
  const Point probe(std::vector<double>{0.25});
  const HypothesisClass delta = measures::symmetric_difference_class(c, {probe});
  REQUIRE(delta.size() == 4);
  const std::vector<double> expected{0.0, 1.0, 1.0, 0.0};
  for (int i = 0; i < 4; ++i)
    CHECK(evaluate(delta.member(i), probe)[0] == expected[std::size_t(i)]);

  // non-binary members are rejected when a probe exposes them
  const HypothesisClass bad({Hypothesis::affine({{0.0}}, {0.5})});
  CHECK_THROWS_AS(measures::symmetric_difference_class(bad, {probe}), std::domain_error);
}

TEST_CASE("indicator-gap form equals the discrepancy for binary classes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = scenarios::gen_binary_disc_instance(seed);
    const double disc =
        measures::discrepancy(inst.cls, inst.d1, inst.d2, inst.loss).value;
    const double gap =
        measures::symmetric_difference_gap(inst.cls, inst.d1, inst.d2).value;
    CHECK(std::fabs(disc - gap) < 1e-12);
  }
}

TEST_CASE("triangle ratio estimates stay under the declared constants") {
  const Point p0(std::vector<double>{0.0});
  const Point p1(std::vector<double>{1.0});
  const Point p2(std::vector<double>{2.0});
  const std::vector<std::array<Point, 3>> collinear{{p0, p1, p2}};
  const double k_sq = measures::estimate_K(LossSpec::squared(1), collinear);
  CHECK(k_sq >= 2.0);
  CHECK(k_sq <= 2.0 + 1e-12);
  CHECK(measures::estimate_K(LossSpec::absolute(1), collinear) <= 1.0);
  CHECK(measures::estimate_K(LossSpec::zero_one(), collinear) <= 1.0);
  CHECK_THROWS_AS(measures::estimate_K(LossSpec::absolute(1), {}), std::invalid_argument);
}

TEST_CASE("expansion ratio estimates match simple maps") {
  const Hypothesis dbl = Hypothesis::affine({{2.0}}, {0.0});
  const std::vector<std::pair<Point, Point>> pairs{
      {Point(std::vector<double>{0.0}), Point(std::vector<double>{1.0})}};
  CHECK(measures::estimate_L(dbl, LossSpec::absolute(1), pairs) == 2.0);
  CHECK(measures::estimate_L(dbl, LossSpec::squared(1), pairs) == 4.0);
  CHECK_THROWS_AS(measures::estimate_L(dbl, LossSpec::absolute(1), {}), std::invalid_argument);
  const std::vector<std::pair<Point, Point>> degenerate{
      {Point(std::vector<double>{1.0}), Point(std::vector<double>{1.0})}};
  CHECK_THROWS_AS(measures::estimate_L(dbl, LossSpec::absolute(1), degenerate),
                  std::invalid_argument);
}
