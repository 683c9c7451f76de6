// Copyright 2026 The critscene Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "critscene/criticality.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace critscene
{
namespace
{

TEST(Ttc, ClosingPair)
{
  EXPECT_DOUBLE_EQ(*compute_ttc(20.0, 10.0, 15.0), 4.0);
  EXPECT_DOUBLE_EQ(compute_inverse_ttc(20.0, 10.0, 15.0), 0.25);
}

TEST(Ttc, OpeningOrMatchedPairHasNoTtc)
{
  EXPECT_FALSE(compute_ttc(20.0, 15.0, 10.0).has_value());
  EXPECT_FALSE(compute_ttc(20.0, 10.0, 10.0).has_value());
  EXPECT_DOUBLE_EQ(compute_inverse_ttc(20.0, 15.0, 10.0), 0.0);
  EXPECT_DOUBLE_EQ(compute_inverse_ttc(20.0, 10.0, 10.0), 0.0);
}

TEST(Ttc, ZeroGapWhileClosingRaises)
{
  try {
    compute_inverse_ttc(0.0, 10.0, 12.0);
    FAIL() << "expected ZeroGap";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroGap);
  }
  EXPECT_DOUBLE_EQ(compute_inverse_ttc(0.0, 10.0, 10.0), 0.0);  // touching but not closing
}

TEST(Ttc, InverseIsContinuousThroughMatchedSpeeds)
{
  double previous = compute_inverse_ttc(10.0, 10.0, 10.0);
  for (int k = 1; k <= 100; ++k) {
    const double v_follow = 10.0 + 1e-4 * k;
    const double value = compute_inverse_ttc(10.0, 10.0, v_follow);
    EXPECT_LT(value - previous, 1e-4);
    EXPECT_GE(value, previous);
    previous = value;
  }
}

TEST(TtcInt, SecondArrivalWithinWindow)
{
  EXPECT_DOUBLE_EQ(*compute_ttc_int(40.0, 10.0, 30.0, 10.0, 2.0), 4.0);
  EXPECT_DOUBLE_EQ(*compute_ttc_int(30.0, 10.0, 40.0, 10.0, 2.0), 4.0);
}

TEST(TtcInt, AbsentOutsideWindowOrWhenStopped)
{
  EXPECT_FALSE(compute_ttc_int(40.0, 10.0, 10.0, 10.0, 2.0).has_value());
  EXPECT_FALSE(compute_ttc_int(40.0, 0.0, 10.0, 10.0, 2.0).has_value());
  EXPECT_TRUE(compute_ttc_int(40.0, 10.0, 20.0, 10.0, 2.0).has_value());  // boundary is inclusive
}

TEST(Rss, SafeDistanceForEqualSpeeds)
{
  const RssClassParams p;
  EXPECT_DOUBLE_EQ(rss_safe_distance(20.0, 20.0, p, p), 56.5);
  EXPECT_TRUE(compute_rss_longitudinal(1.0, 20.0, 20.0, p).unsafe);
  EXPECT_FALSE(compute_rss_longitudinal(100.0, 20.0, 20.0, p).unsafe);
  EXPECT_DOUBLE_EQ(rss_safe_distance(0.0, 30.0, p, p), 0.0);
}

TEST(Rss, SingleThresholdInGap)
{
  const RssClassParams p;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> speed(0.0, 35.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double vf = speed(rng);
    const double vl = speed(rng);
    const double d_min = rss_safe_distance(vf, vl, p, p);
    bool was_unsafe = true;
    for (double gap = 0.0; gap <= 200.0; gap += 0.5) {
      const bool unsafe = compute_rss_longitudinal(gap, vf, vl, p).unsafe;
      EXPECT_EQ(unsafe, gap < d_min);
      EXPECT_FALSE(unsafe && !was_unsafe) << "unsafe again after becoming safe";
      was_unsafe = unsafe;
    }
  }
}

TEST(Rss, LeaderParamsComeFromLeaderClass)
{
  RssClassParams truck;
  truck.a_max_brake = 4.0;
  const RssClassParams car;
  EXPECT_GT(rss_safe_distance(20.0, 20.0, car, car), rss_safe_distance(20.0, 20.0, car, truck));
}

TEST(Sff, SeparatedHardStopsGiveZero)
{
  const auto r = compute_sff_safety_potential({0.0, 10.0}, {100.0, 10.0}, 2.0, 2.0, {});
  EXPECT_FALSE(r.detail.c_t.has_value());
  EXPECT_DOUBLE_EQ(r.rho, 0.0);
}

TEST(Sff, OverlapAgainstStoppedObstacle)
{
  // rear stops after 6 s and reaches s = 50 at t = 2, where the obstacle's bumper is
  const auto r = compute_sff_safety_potential({0.0, 30.0}, {54.0, 0.0}, 2.0, 2.0, {});
  ASSERT_TRUE(r.detail.c_t.has_value());
  EXPECT_NEAR(*r.detail.c_t, 2.0, 1e-12);
  EXPECT_NEAR(r.rho, 4.0, 1e-12);
}

TEST(Sff, PointActorsBehindStoppedLeader)
{
  const auto short_stop = compute_sff_safety_potential({0.0, 20.0}, {50.0, 0.0}, 0.0, 0.0, {});
  EXPECT_FALSE(short_stop.detail.c_t.has_value());
  EXPECT_DOUBLE_EQ(short_stop.rho, 0.0);
  EXPECT_FALSE(oracles::sff_sweep(0.0, 20.0, 50.0, 0.0, 0.0, 0.0, 5.0).c_t.has_value());

  const auto r = compute_sff_safety_potential({0.0, 30.0}, {50.0, 0.0}, 0.0, 0.0, {});
  EXPECT_NEAR(*r.detail.c_t, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.detail.t_a_stop, 6.0);
  EXPECT_DOUBLE_EQ(r.detail.t_b_stop, 0.0);
  EXPECT_NEAR(r.rho, 4.0, 1e-12);
  EXPECT_NEAR(*oracles::sff_sweep(0.0, 30.0, 50.0, 0.0, 0.0, 0.0, 5.0).c_t, 2.0, 2e-3);
}

TEST(Sff, BothBraking)
{
  // D(t) = 5 - 5t while both brake, so overlap begins at 1 s
  const auto r = compute_sff_safety_potential({0.0, 15.0}, {9.0, 10.0}, 2.0, 2.0, {});
  ASSERT_TRUE(r.detail.c_t.has_value());
  EXPECT_NEAR(*r.detail.c_t, 1.0, 1e-12);
  EXPECT_NEAR(r.rho, std::sqrt(5.0), 1e-12);
  SffParams max_norm;
  max_norm.norm_order = std::numeric_limits<double>::infinity();
  EXPECT_NEAR(compute_sff_safety_potential({0.0, 15.0}, {9.0, 10.0}, 2.0, 2.0, max_norm).rho, 2.0, 1e-12);
}

TEST(Sff, StationaryPairIsZero)
{
  EXPECT_DOUBLE_EQ(compute_sff_safety_potential({0.0, 0.0}, {10.0, 0.0}, 2.0, 2.0, {}).rho, 0.0);
}

TEST(Sff, AgreesWithSampledHardStops)
{
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> speed(0.0, 30.0);
  std::uniform_real_distribution<double> gap(0.5, 80.0);
  std::uniform_real_distribution<double> half(0.25, 5.0);
  std::uniform_real_distribution<double> decel(2.0, 9.0);
  const double dt = 1e-4;
  int overlaps = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double hr = half(rng);
    const double hf = half(rng);
    const double vr = speed(rng);
    const double vf = speed(rng);
    const double a = decel(rng);
    const double front_s = hr + hf + gap(rng);
    const auto sweep = oracles::sff_sweep(0.0, vr, front_s, vf, hr, hf, a, dt);
    const auto exact = sff_collision_time({0.0, vr}, {front_s, vf}, hr, hf, a);
    ASSERT_EQ(exact.has_value(), sweep.c_t.has_value()) << "trial " << trial;
    if (exact) {
      ++overlaps;
      EXPECT_LE(*exact, *sweep.c_t + 1e-9);
      EXPECT_GE(*exact, *sweep.c_t - dt - 1e-9);
    }
  }
  EXPECT_GT(overlaps, 100);
}

TEST(Sff, ArgumentOrderDoesNotMatter)
{
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int trial = 0; trial < 300; ++trial) {
    const AxisState a{u(rng), u(rng)};
    const AxisState b{a.s + 4.5 + u(rng), u(rng)};
    const auto ab = compute_sff_safety_potential(a, b, 2.0, 2.5, {});
    const auto ba = compute_sff_safety_potential(b, a, 2.5, 2.0, {});
    EXPECT_DOUBLE_EQ(ab.rho, ba.rho);
    EXPECT_EQ(ab.detail.c_t, ba.detail.c_t);
  }
}

TEST(Sff, NonIncreasingInGap)
{
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> speed(0.0, 30.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double vr = speed(rng);
    const double vf = speed(rng);
    double previous = std::numeric_limits<double>::infinity();
    for (double g = 0.0; g <= 120.0; g += 0.25) {
      const double rho = compute_sff_safety_potential({0.0, vr}, {4.0 + g, vf}, 2.0, 2.0, {}).rho;
      EXPECT_LE(rho, previous + 1e-12);
      previous = rho;
    }
  }
}

TEST(MeasureParams, JsonOverridesDefaults)
{
  const auto p = measure_params_from_json(Json::parse(
    R"({"rss": {"truck": {"a_max_brake": 5}}, "sff": {"norm_order": "inf"}, "ttc_int": {"simultaneity_window": 1.5}})"));
  EXPECT_DOUBLE_EQ(p.rss_for(ObjectClass::Truck).a_max_brake, 5.0);
  EXPECT_DOUBLE_EQ(p.rss_for(ObjectClass::Car).a_max_brake, 8.0);
  EXPECT_TRUE(std::isinf(p.sff.norm_order));
  EXPECT_DOUBLE_EQ(p.simultaneity_window, 1.5);
}

TEST(MeasureParams, RejectsInvalidValues)
{
  EXPECT_THROW(measure_params_from_json(Json::parse(R"({"sff": {"a_brake": 0}})")), Error);
  EXPECT_THROW(measure_params_from_json(Json::parse(R"({"rss": {"tram": {}}})")), Error);
  EXPECT_THROW(measure_params_from_json(Json::parse(R"({"sff": {"norm_order": 0.5}})")), Error);
}

GraphNode node(TrackId id, double speed, double length = 4.0)
{
  return {{id, ObjectClass::Car, length, 1.8}, fixtures::state(0, 0, 0, 0, speed), FrenetPose{1, 0.0, 0.0}};
}

TEST(EvaluateEdge, LongitudinalCarriesAllMeasures)
{
  const RelationEdge edge{1, 2, RelationKind::Longitudinal, 5.0, std::nullopt};
  const auto rec = evaluate_edge(edge, node(1, 15.0), node(2, 10.0), {}, 300);
  ASSERT_TRUE(rec.has_value());
  EXPECT_EQ(rec->timestamp, 300);
  EXPECT_DOUBLE_EQ(*rec->inv_ttc, 1.0);
  EXPECT_DOUBLE_EQ(*rec->detail.ttc, 1.0);
  EXPECT_TRUE(*rec->rss_unsafe);
  EXPECT_DOUBLE_EQ(*rec->detail.d_min, 45.875);
  EXPECT_NEAR(*rec->sff_potential, std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(*rec->detail.c_t, 1.0, 1e-12);
  EXPECT_FALSE(rec->detail.contact);
}

TEST(EvaluateEdge, ContactLeavesInverseTtcAbsent)
{
  const RelationEdge edge{1, 2, RelationKind::Longitudinal, 0.0, std::nullopt};
  const auto rec = evaluate_edge(edge, node(1, 12.0), node(2, 10.0), {}, 0);
  ASSERT_TRUE(rec.has_value());
  EXPECT_FALSE(rec->inv_ttc.has_value());
  EXPECT_TRUE(rec->detail.contact);
  EXPECT_TRUE(*rec->rss_unsafe);
  EXPECT_GT(*rec->sff_potential, 0.0);
  EXPECT_EQ(record_to_json(*rec)["inv_ttc"], nullptr);
}

TEST(EvaluateEdge, IntersectingUsesConflictArrival)
{
  RelationEdge edge{1, 2, RelationKind::Intersecting, std::nullopt, ConflictRef{{1, 2, 50, 50, {0, 0}}, 40.0, 30.0}};
  const auto rec = evaluate_edge(edge, node(1, 10.0), node(2, 10.0), {}, 0);
  ASSERT_TRUE(rec.has_value());
  EXPECT_DOUBLE_EQ(*rec->inv_ttc, 0.25);
  EXPECT_DOUBLE_EQ(*rec->detail.ttc_int, 4.0);
  EXPECT_FALSE(rec->rss_unsafe.has_value());
  EXPECT_FALSE(rec->sff_potential.has_value());

  edge.conflict->to_distance = 5.0;  // arrivals 3.5 s apart
  EXPECT_DOUBLE_EQ(*evaluate_edge(edge, node(1, 10.0), node(2, 10.0), {}, 0)->inv_ttc, 0.0);
}

TEST(EvaluateEdge, LateralHasNoRecord)
{
  const RelationEdge edge{1, 2, RelationKind::Lateral, std::nullopt, std::nullopt};
  EXPECT_FALSE(evaluate_edge(edge, node(1, 10.0), node(2, 10.0), {}, 0).has_value());
}

TEST(EvaluateGraph, SymmetricPairsEvaluatedOnce)
{
  SceneGraph g;
  g.timestamp = 100;
  g.nodes = {node(1, 10.0), node(2, 10.0)};
  const ConflictRef c{{1, 2, 50, 50, {0, 0}}, 20.0, 20.0};
  g.edges = {{1, 2, RelationKind::Intersecting, std::nullopt, c}, {2, 1, RelationKind::Intersecting, std::nullopt, c}};
  const auto recs = evaluate_graph(g, {});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].from, 1);
  EXPECT_DOUBLE_EQ(*recs[0].inv_ttc, 0.5);
}

}  // namespace
}  // namespace critscene
