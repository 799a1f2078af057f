#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "lpgeom/verify.hpp"
#include "test_util.hpp"

using namespace lpgeom;
using namespace lpgeom::test;

namespace {

const PParam kInf = PParam::infinity();
const Direction kE2(make_vec({0, 1}));
constexpr double kPi = std::numbers::pi;

ConvexBody centered(const ConvexBody& k) { return translate(k, -barycenter(k)); }

void expect_equality_witness(const CheckRecord& r) {
  EXPECT_TRUE(r.pass) << r.check_id << " " << r.instance << " margin " << r.margin;
  EXPECT_LE(std::abs(r.margin), r.slack) << r.check_id << " " << r.instance;
}

}  // namespace

TEST(Record, SlackFromErrors) {
  const auto r = make_record("x", "", Estimate::det(1.0, 0.01), Estimate::det(1.0, 0.02), -0.05, 1e-6);
  EXPECT_NEAR(r.slack, 1e-6 + 0.09, 1e-15);
  EXPECT_TRUE(r.pass);
  Estimate mc{1.0, 1.96, Method::monte_carlo, 100};
  const auto m = make_record("x", "", mc, Estimate::exact(0.0), -3.5, 0.0);
  EXPECT_NEAR(m.slack, 3.0, 1e-15);
  EXPECT_FALSE(m.pass);
  EXPECT_TRUE(m.counts_as_failure());
}

TEST(SupportConvexity, TranslationIsAffine) {
  const auto k = random_polytope(2, 8, 3);
  const auto sys = make_parallel_chord(k, kE2, SpeedFunction::constant(1.0));
  for (PParam p : {PParam(1.0), PParam(2.0), kInf}) {
    expect_equality_witness(check_support_convexity(sys, p, make_vec({0.3}), 0.7, -0.5, 1.2));
  }
}

TEST(SupportConvexity, EqualTimes) {
  const auto sys = make_parallel_chord(random_polytope(2, 8, 4), kE2, SpeedFunction::steiner());
  expect_equality_witness(check_support_convexity(sys, PParam(1.0), make_vec({0.1}), -0.4, 0.3, 0.3));
}

TEST(SupportConvexity, SteinerInstances) {
  const auto sys = make_parallel_chord(random_polytope(2, 8, 5), kE2, SpeedFunction::steiner());
  for (double s : {-1.0, 0.5, 2.0}) {
    const auto r = check_support_convexity(sys, PParam(2.0), make_vec({0.4}), s, 0.0, 1.0);
    EXPECT_TRUE(r.pass) << r.margin;
  }
}

TEST(ThreePoint, CoincidingArguments) {
  const auto sys = make_parallel_chord(random_polytope(2, 8, 6), kE2, SpeedFunction::steiner());
  expect_equality_witness(
      check_three_point_inequality(sys, PParam(1.0), make_vec({0.2}), make_vec({0.2}), 0.5, 0.4, 0.4, 1.0, 1.0));
}

TEST(ThreePoint, ZeroSpeedIsMidpointConvexity) {
  const auto sys = make_parallel_chord(random_polytope(2, 8, 7), kE2, SpeedFunction::constant(0.0));
  for (auto [b, c] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{2.0, 1.0}}) {
    const auto r =
        check_three_point_inequality(sys, PParam(2.0), make_vec({0.9}), make_vec({-0.3}), 0.2, 0.1, 0.7, b, c);
    EXPECT_TRUE(r.pass) << r.margin;
  }
}

TEST(SectionChecks, EqualTimesAndZeroSpeed) {
  const auto b = polar_bracket(random_polytope(2, 8, 21, true), PParam(1.0));
  expect_equality_witness(check_section_inclusion(b, b, b, kE2, 0.1));
  expect_equality_witness(check_slice_concavity(b, b, b, kE2, 0.1));
}

TEST(SectionChecks, SquareSteinerEndpointsAtInfinity) {
  const auto sys = make_parallel_chord(cube(2), kE2, SpeedFunction::steiner());
  const auto b0 = polar_bracket(body_at(sys, 0.0), kInf), b1 = polar_bracket(body_at(sys, 1.0), kInf),
             bm = polar_bracket(body_at(sys, 0.5), kInf);
  expect_equality_witness(check_slice_concavity(b0, b1, bm, kE2, 0.0));
}

TEST(SectionChecks, SteinerMovementOnPolygon) {
  const auto k = centered(random_polytope(2, 8, 22));
  const auto sys = make_parallel_chord(k, kE2, SpeedFunction::steiner());
  const auto b0 = polar_bracket(body_at(sys, 0.0), PParam(1.0)), b1 = polar_bracket(body_at(sys, 1.0), PParam(1.0)),
             bm = polar_bracket(body_at(sys, 0.5), PParam(1.0));
  EXPECT_TRUE(check_section_inclusion(b0, b1, bm, kE2, 0.05).pass);
  EXPECT_TRUE(check_slice_concavity(b0, b1, bm, kE2, 0.05).pass);
}

TEST(SectionSymmetry, Square) {
  const auto b = polar_bracket(cube(2), PParam(1.0));
  expect_equality_witness(check_section_symmetry(b, kE2, 0.0));
  EXPECT_TRUE(check_section_symmetry(b, kE2, 0.2).pass);
}

TEST(ReflectionSections, ProofAndStatementForms) {
  const auto k = translate(unit_triangle(), make_vec({-0.3, -0.3}));
  const auto sys = make_parallel_chord(k, kE2, SpeedFunction::steiner());
  const auto b = polar_bracket(k, PParam(1.0)), b1 = polar_bracket(body_at(sys, 1.0), PParam(1.0));
  EXPECT_TRUE(check_reflection_sections(b, b1, kE2, 0.15).pass);
  expect_equality_witness(check_reflection_sections(b, b1, kE2, 0.0));
  const auto stmt = check_reflection_sections(b, b1, kE2, 0.15, true);
  EXPECT_TRUE(stmt.diagnostic);
  EXPECT_FALSE(stmt.pass);
  EXPECT_FALSE(stmt.counts_as_failure());
}

TEST(SteinerMonotone, Cases) {
  expect_equality_witness(check_steiner_monotone(cube(2), kE2, PParam(1.0)));
  const auto rot = linear_image(cube(2), rotation2(kPi / 6));
  const auto r = check_steiner_monotone(rot, kE2, kInf);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.margin, 0.0);
  EXPECT_THROW(check_steiner_monotone(unit_triangle(), kE2, kInf), GeometryError);
}

TEST(Santalo, Cases) {
  const auto sq = check_santalo_p(cube(2), kInf);
  EXPECT_NEAR(sq.margin, kPi * kPi - 8.0, 1e-9);
  expect_equality_witness(check_santalo_p(ConvexBody::ball(Vec::Zero(2), 2.5), PParam(1.0)));
  EXPECT_TRUE(check_santalo_p(random_polytope(2, 10, 40, true), PParam(0.5)).pass);
}

TEST(PropBound, Cases) {
  const auto ball = check_prop_bound(ConvexBody::ball(Vec::Zero(2), 1.0), kInf);
  EXPECT_NEAR(ball.margin, kPi * kPi, 1e-6);
  const auto iv = check_prop_bound(cube(1), PParam(1.0));
  EXPECT_NEAR(iv.margin, 16.0 - kPi * kPi, 1e-5);
  EXPECT_TRUE(check_prop_bound(centered(random_polytope(2, 9, 41)), PParam(2.0)).pass);
  try {
    check_prop_bound(unit_triangle(), kInf);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::barycenter_not_origin);
  }
}

TEST(Sandwich, Cases) {
  expect_equality_witness(check_sandwich(centered(random_polytope(2, 9, 19)), kInf));
  EXPECT_TRUE(check_sandwich(cube(1), PParam(1.0)).pass);
  EXPECT_TRUE(check_sandwich(centered(random_polytope(2, 9, 19)), PParam(2.0)).pass);
}

TEST(TranslatePolar, Cases) {
  expect_equality_witness(check_translate_polar(cube(2), Vec::Zero(2)));
  expect_equality_witness(check_translate_polar(cube(1), make_vec({0.5})));
  const auto k = random_polytope(2, 9, 17);
  EXPECT_TRUE(check_translate_polar(k, 0.5 * barycenter(k)).pass);
}

TEST(RadialMeanInequality, ExponentialEquality) {
  const RadialFunction e{[](double r) { return std::exp(-r); }, 1.0, 1.0};
  for (int q : {1, 2, 3}) expect_equality_witness(check_ball_lemma(e, e, e, q));
}

TEST(RadialMeanInequality, PremiseViolationThrows) {
  const RadialFunction f{[](double r) { return std::exp(-r); }, 1.0, 1.0};
  const RadialFunction h{[](double r) { return std::exp(-3 * r); }, 3.0, 1.0};
  try {
    check_ball_lemma(f, f, h, 2);
    FAIL();
  } catch (const GeometryError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::hypothesis_failed);
  }
}

TEST(RadialMeanInequality, GaugeIntegrands) {
  // F, G, H from L_p gauges of K_0, K_1 and K_{1/2} along a Steiner movement
  const auto k = centered(random_polytope(2, 8, 44));
  const auto sys = make_parallel_chord(k, kE2, SpeedFunction::steiner());
  const PParam p(1.0);
  const LpEvaluator e0(body_at(sys, 0.0), p), e1(body_at(sys, 1.0), p), em(body_at(sys, 0.5), p);
  const auto y = make_vec({0.0, 1.0});
  auto radial = [&](const LpEvaluator& e) {
    const double c = 0.5 * support(e.body(), y);
    return RadialFunction{[&e, y](double r) { return std::exp(-e.h(r * y)); }, c, 1.0};
  };
  const auto r = check_ball_lemma(radial(e0), radial(e1), radial(em), 2);
  EXPECT_TRUE(r.pass) << r.margin;
}

TEST(OriginIff, ThreeModes) {
  EXPECT_TRUE(check_origin_iff(cube(2), PParam(1.0)).pass);
  const auto out = check_origin_iff(translate(cube(2), make_vec({3, 0})), PParam(1.0));
  EXPECT_TRUE(out.pass) << out.note;
  const auto edge = check_origin_iff(translate(cube(2), make_vec({1, 0})), PParam(1.0));
  EXPECT_TRUE(edge.indeterminate);
  EXPECT_FALSE(edge.counts_as_failure());
}

TEST(ConvPolar, Cases) {
  const auto k = centered(random_polytope(2, 8, 50));
  expect_equality_witness(check_conv_polar_identity(k, k));
  const auto r = check_conv_polar_identity(cube(2), linear_image(cube(2), rotation2(kPi / 4)));
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.margin + r.slack, 1e-8);
}

TEST(InfConv, Cases) {
  const auto a = centered(random_polytope(2, 8, 23)), b = centered(random_polytope(2, 8, 24));
  expect_equality_witness(check_infconv_identity(a, a, 1));
  EXPECT_TRUE(check_infconv_identity(a, b, 23).pass);
}

TEST(LogConcave, Cases) {
  expect_equality_witness(check_logconcave_projection(cube(2), Vec::Zero(2), 0.7));
  const auto g = check_logconcave_projection(-1.0, 1.0, [](double x) { return std::exp(-x * x); });
  EXPECT_TRUE(g.pass);
  EXPECT_GT(g.margin, 0.0);
  EXPECT_TRUE(check_logconcave_projection(random_polytope(2, 8, 60), make_vec({1.5, -0.5})).pass);
}

TEST(ReverseRs, SymmetricAndEquality) {
  const auto k = random_polytope(2, 8, 70, true);
  const auto r = check_reverse_rs(k, negate(k), PParam(1.0));
  EXPECT_TRUE(r.pass);
  // K = L symmetric: margin = (C(2n,n)/2^n - 1) |K^{o,p}|^2
  const auto b = polar_bracket(k, PParam(1.0));
  const double v = 0.5 * (volume(b.inner) + volume(b.outer));
  EXPECT_NEAR(r.margin, (6.0 / 4.0 - 1.0) * v * v, r.slack + 1e-3 * v * v);
  expect_equality_witness(check_reverse_rs(cube(1), cube(1), kInf));
  // forward form at n = 1: |K^o| |L^o| = 4 against |conv| |D| = 2 * 1, so the margin is 2
  const auto fwd = check_rs_forward(cube(1), cube(1), kInf);
  EXPECT_TRUE(fwd.pass);
  EXPECT_NEAR(fwd.margin, 2.0, 1e-12);
  EXPECT_THROW(check_reverse_rs(unit_triangle(), unit_triangle(), kInf), GeometryError);
}

TEST(ClassicalRs, Interval) {
  const auto rs = check_classical_rs_polar(cube(1), cube(1));
  ASSERT_EQ(rs.size(), 2u);
  for (const auto& r : rs) EXPECT_TRUE(r.pass);
  // second form: 2 * 1 against (1/2) * 4
  expect_equality_witness(rs[1]);
  EXPECT_NEAR(rs[0].margin, 2.0, 1e-12);
}

TEST(CtMachinery, IntervalAtInfinity) {
  const auto recs = check_ct_machinery(cube(1), cube(1), {0.1, 0.5, 0.9}, 200000, 5);
  ASSERT_FALSE(recs.empty());
  std::set<std::string> notes;
  for (const auto& r : recs) {
    EXPECT_TRUE(r.pass) << r.instance << " " << r.margin << " " << r.slack;
    notes.insert(r.note);
  }
  EXPECT_GE(notes.size(), 4u);
}

TEST(CtMachinery, OppositeBarycentersRequired) {
  try {
    check_ct_machinery(unit_triangle(), unit_triangle(), {0.5}, 1000, 1);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::barycenters_not_opposite);
  }
}

TEST(Suite, EmptyConfigGivesNoRecords) { EXPECT_TRUE(run_suite(SuiteConfig::empty()).empty()); }

TEST(Suite, CoverageManifestIsTotal) {
  std::set<std::string> ids;
  for (const auto& [id, count] : check_catalog()) {
    ids.insert(id);
    EXPECT_GT(count, 0);
  }
  // some checks emit a companion record id
  SuiteConfig cfg;
  cfg.checks = {"classical_rs_polar"};
  cfg.instances_per_check = 1;
  for (const auto& r : run_suite(cfg)) ids.insert(r.check_id);
  std::set<std::string> covered;
  for (const auto& entry : coverage_manifest()) {
    EXPECT_FALSE(entry.checks.empty()) << entry.statement;
    for (const auto& c : entry.checks) {
      EXPECT_TRUE(ids.count(c)) << "unknown check " << c;
      covered.insert(c);
    }
  }
  for (const auto& id : ids) EXPECT_TRUE(covered.count(id)) << id << " is not in the manifest";
}

TEST(Suite, FilteredRunIsDeterministicAndOrdered) {
  SuiteConfig cfg;
  cfg.checks = {"santalo_p", "bipolar", "origin_iff"};
  cfg.instances_per_check = 4;
  cfg.dimensions = {2};
  const auto a = run_suite(cfg), b = run_suite(cfg);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].check_id, b[i].check_id);
    EXPECT_EQ(a[i].instance, b[i].instance);
    EXPECT_EQ(a[i].margin, b[i].margin);
    EXPECT_EQ(a[i].slack, b[i].slack);
    if (i > 0) {
      const bool ordered = a[i - 1].check_id < a[i].check_id ||
                           (a[i - 1].check_id == a[i].check_id && a[i - 1].index < a[i].index);
      EXPECT_TRUE(ordered);
    }
  }
  for (const auto& r : a) EXPECT_FALSE(r.counts_as_failure()) << r.check_id << " " << r.instance;
  const auto summary = summarize(a);
  EXPECT_EQ(summary.size(), 3u);
  EXPECT_EQ(count_failures(a), 0);
}

TEST(Suite, SeedChangesInstances) {
  SuiteConfig cfg;
  cfg.checks = {"bipolar"};
  cfg.instances_per_check = 3;
  auto a = run_suite(cfg);
  cfg.master_seed += 1;
  auto b = run_suite(cfg);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_NE(a[0].instance, b[0].instance);
}
