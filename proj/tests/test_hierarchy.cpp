#include <gtest/gtest.h>

#include "nullflow/hierarchy.hpp"

using namespace nullflow;

namespace {
const DiffPoly a = param("a");
const DiffPoly b = param("b");
const DiffPoly c = param("c");
const DiffPoly e1 = param("eps1");
const DiffPoly e12 = param("eps1") * param("eps2");

bool mentions_only(const DiffPoly& p, const std::vector<std::string>& names) {
  for (const auto& [k, coeff] : p.terms()) {
    bool hit = false;
    for (const auto& n : names) hit = hit || k.params.exponent_of(n) != 0;
    if (!hit) return false;
  }
  return true;
}
}  // namespace

TEST(Seed, Examples) {
  EXPECT_EQ(seed(0, b).flow, (FlowPair{b * k1(1), b * k2(1)}));
  EXPECT_EQ(seed(1, c).flow, (FlowPair{c * (k1(3) + 3 * a * k1() * k1(1) + 6 * e12 * a * k2() * k2(1)),
                                       -c * (2 * k2(3) + 3 * a * k1() * k2(1))}));
  EXPECT_TRUE(seed(0, 0).field.is_zero());
  EXPECT_EQ(seed(1, c).field, (LocalVectorField{-a * c * k1(), 0, -2 * e1 * a * a * c, 0}));
  EXPECT_THROW(seed(2, b), std::invalid_argument);
}

TEST(RecursionStep, ReproducesV2AndV3) {
  ReferenceFixtures fx;
  HierarchyEntry v2 = recursion_step(seed(0, b), ConstantPolicy::explicit_values(param("c1"), param("c2")));
  EXPECT_EQ(v2.index, 2);
  EXPECT_EQ(v2.field, (LocalVectorField{parse_expr(fx.v2_f), parse_expr(fx.v2_h), parse_expr(fx.v2_g),
                                        parse_expr(fx.v2_l)}));
  EXPECT_EQ(v2.constants_used, (std::vector<std::string>{"c1", "c2"}));
  HierarchyEntry v3 = recursion_step(seed(1, c), ConstantPolicy::explicit_values(param("c3"), param("c4")));
  EXPECT_EQ(v3.field, (LocalVectorField{parse_expr(fx.v3_f), parse_expr(fx.v3_h), parse_expr(fx.v3_g),
                                        parse_expr(fx.v3_l)}));
  EXPECT_TRUE(recursion_step(seed(0, 0), ConstantPolicy::zero()).field.is_zero());
}

TEST(RecursionStep, FreshConstantsAreMinted) {
  HierarchyEntry e = recursion_step(seed(1, c), ConstantPolicy::fresh(7));
  EXPECT_EQ(e.constants_used, (std::vector<std::string>{"c7", "c8"}));
  EXPECT_EQ(e.field.g.constant_part(), param("c7"));
}

TEST(FlowOf, Examples) {
  ReferenceFixtures fx;
  auto entries = generate(2);
  EXPECT_EQ(flow_of(entries[2]), (FlowPair{parse_expr(fx.v2_flow_k1), parse_expr(fx.v2_flow_k2)}));
  EXPECT_EQ(flow_of(entries[0]), (FlowPair{b * k1(1), b * k2(1)}));
  EXPECT_TRUE(flow_of(HierarchyEntry{}).is_zero());
}

TEST(CommuteCheck, Examples) {
  auto entries = generate(2);
  EXPECT_TRUE(commute_check(entries[0], entries[1]));
  EXPECT_TRUE(commute_check(entries[1], entries[2]));
  EXPECT_TRUE(commute_check(entries[2], entries[2]));
}

TEST(Generate, EntriesAreTangentAndCommute) {
  auto entries = generate(3);
  for (const auto& e : entries) {
    EXPECT_EQ(classify(e.field, hierarchy_metric()), FieldClass::T_PLambda) << "V" << e.index;
    EXPECT_EQ(e.flow, flow_of(e));
  }
  auto results = commutation_suite(entries, 4);
  EXPECT_EQ(results.size(), 8u);
  for (const auto& r : results) EXPECT_TRUE(r.commute) << r.i << "," << r.j;
}

TEST(Generate, GammaBracketMatchesFlowBracket) {
  auto entries = generate(3);
  const FrameMetric m = hierarchy_metric();
  for (int i = 0; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      LocalVectorField br = gamma_bracket(entries[i].field, entries[j].field, m);
      EXPECT_EQ(variational_flow(br, m), lie_bracket_flows(entries[i].flow, entries[j].flow));
      EXPECT_TRUE(br.is_zero()) << i << "," << j;
    }
}

TEST(Generate, ZeroPolicyEqualsExplicitZero) {
  GenerateOptions zero;
  zero.constants = ConstantPolicy::Kind::zero;
  auto z = generate(3, zero);
  EXPECT_EQ(z[2].field, recursion_step(z[0], ConstantPolicy::explicit_values(0, 0)).field);
  EXPECT_EQ(z[3].field, recursion_step(z[1], ConstantPolicy::explicit_values(0, 0)).field);
}

TEST(Generate, OrderCap) {
  GenerateOptions opt;
  opt.max_order = 3;
  EXPECT_NO_THROW(generate(1, opt));
  EXPECT_THROW(generate(2, opt), OrderCapExceeded);
}

TEST(Verify, AllPassWithFreshConstants) {
  VerificationReport r = verify_against_paper();
  EXPECT_EQ(r.checks.size(), 12u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.difference;
  EXPECT_TRUE(r.all_passed());
}

TEST(Verify, PerturbedFixtureFails) {
  ReferenceFixtures fx;
  fx.v2_h = "-b/2*k1'";
  VerificationReport r = verify_against_paper(fx);
  EXPECT_FALSE(r.all_passed());
  for (const auto& c : r.checks) {
    EXPECT_EQ(c.passed, c.name != "V2 W1") << c.name;
    if (c.name == "V2 W1") {
      EXPECT_EQ(c.difference, -b * k1(1));
    }
  }
}

TEST(Verify, ZeroPolicyFailsOnlyOnConstantTerms) {
  VerificationReport r = verify_against_paper({}, ConstantPolicy::Kind::zero);
  EXPECT_FALSE(r.all_passed());
  for (const auto& c : r.checks) {
    bool constant_bearing = c.name == "V2 T" || c.name == "V2 N" || c.name == "V2 flow k1" ||
                            c.name == "V2 flow k2" || c.name == "V3 T" || c.name == "V3 N";
    EXPECT_EQ(c.passed, !constant_bearing) << c.name;
    EXPECT_TRUE(mentions_only(c.difference, {"c1", "c2", "c3", "c4"})) << c.name << ": " << c.difference;
  }
}
