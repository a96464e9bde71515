#include <gtest/gtest.h>

#include "nullflow/expr.hpp"
#include "nullflow/nullcurve.hpp"
#include "random_poly.hpp"

using namespace nullflow;
using nullflow::testing::PolyGen;

namespace {
const DiffPoly a = param("a");
const DiffPoly b = param("b");
const DiffPoly c = param("c");
const DiffPoly G = param("G");
const DiffPoly e1 = param("eps1");
const DiffPoly e2 = param("eps2");
const DiffPoly e12 = e1 * e2;

const LocalVectorField V0{b, 0, 0, 0};
const LocalVectorField V1{-a * c * k1(), 0, -2 * e1 * a * a * c, 0};

const FlowPair curve_flow_one{c * (k1(3) + 3 * a * k1() * k1(1) + 6 * e12 * a * k2() * k2(1)),
                              -c * (2 * k2(3) + 3 * a * k1() * k2(1))};

}  // namespace

namespace nullflow {
std::ostream& operator<<(std::ostream& os, const LocalVectorField& V) {
  return os << "[" << V.f << "; " << V.h << "; " << V.g << "; " << V.l << "]";
}
}  // namespace nullflow

TEST(Projections, Examples) {
  EXPECT_EQ(projections(V0), (Projections{a * b, 0, 0}));
  EXPECT_EQ(projections(V1), (Projections{a * a * c * k1(), -2 * e12 * a * a * c * k2(), 0}));
  EXPECT_EQ(projections({}), (Projections{}));
}

TEST(MakeX, Examples) {
  DiffPoly c1 = param("c1"), c2 = param("c2");
  EXPECT_EQ(make_X(0, 0, c1, c2), (LocalVectorField{divide(e1 * c1 * k1(), 2 * a) + c2, 0, c1, 0}));
  EXPECT_EQ(make_X(0, 0, 0, b), V0);
  EXPECT_EQ(make_X(0, 0, -2 * e1 * a * a * c, 0), V1);
  EXPECT_NO_THROW(make_X(k1(1), 0, 0, 0));
  EXPECT_THROW(make_X(0, k2(), 0, 0), NotExact);
}

TEST(MakeX, PreservesArcLengthAndMatchesAMatrix) {
  PolyGen gen(31);
  DiffPoly c1 = param("c1"), c2 = param("c2");
  for (int i = 0; i < 15; ++i) {
    auto [h, l] = gen.q_pair();
    LocalVectorField X = make_X(h, l, c1, c2);
    Projections p = projections(X);
    EXPECT_TRUE(p.rho.is_zero());
    EXPECT_EQ(classify(X), FieldClass::T_PLambda);
    EXPECT_EQ(a_matrix_apply(h, l, {c1, c2}), (ProjectionPair{p.phi, p.psi}));
  }
}

TEST(VariationalFlow, Examples) {
  EXPECT_EQ(variational_flow(V0), (FlowPair{b * k1(1), b * k2(1)}));
  EXPECT_EQ(variational_flow(V1), curve_flow_one);
  EXPECT_EQ(variational_flow(V1, FrameMetric::flat()), curve_flow_one);
  EXPECT_TRUE(variational_flow({}).is_zero());
}

TEST(FrameCoefficients, Examples) {
  EXPECT_EQ(frame_derivative_coeffs(V0), (FrameCoefficients{0, b * k1(), e12 * a * b * k2()}));
  EXPECT_EQ(frame_derivative_coeffs({}), (FrameCoefficients{}));
  FrameCoefficients v1{a * c * k1(1),
                       c * k1(2) + a * c * k1() * k1() + 2 * e12 * a * c * k2() * k2() + 2 * e1 * a * c * G,
                       -2 * e12 * a * c * k2(2) - e12 * a * a * c * k1() * k2()};
  EXPECT_EQ(frame_derivative_coeffs(V1), v1);
}

TEST(DV, Examples) {
  EXPECT_TRUE(d_v({}, V1).is_zero());
  EXPECT_EQ(d_v(V0, t_field()), (LocalVectorField{0, a * b, 0, 0}));
  EXPECT_TRUE(gamma_bracket(V0, V1).is_zero());
}

TEST(DV, FrameRowsFollowTheRotationMatrix) {
  PolyGen gen(32);
  LocalVectorField V = gen.screen_field();
  Projections p = projections(V);
  FrameCoefficients k = frame_derivative_coeffs(V);
  EXPECT_EQ(d_v(V, t_field()), (LocalVectorField{-k.alpha, p.phi, 0, p.psi}));
  EXPECT_EQ(d_v(V, n_field()), (LocalVectorField{0, -e1 * k.beta, k.alpha, divide(e1 * k.delta, a)}));
}

TEST(DV, CompatibleWithMetric) {
  // V<X, Y> = <D_V X, Y> + <X, D_V Y>.
  PolyGen gen(33);
  for (int i = 0; i < 5; ++i) {
    LocalVectorField V = gen.screen_field(), X = gen.screen_field(1), Y = gen.screen_field(1);
    EXPECT_EQ(field_apply(V, inner(X, Y)), inner(d_v(V, X), Y) + inner(X, d_v(V, Y)));
  }
}

TEST(Inner, Examples) {
  EXPECT_TRUE(inner(t_field(), t_field()).is_zero());
  EXPECT_EQ(inner(t_field(), n_field()), DiffPoly(-1));
  EXPECT_EQ(inner(w1_field(), w1_field()), e1);
  EXPECT_EQ(inner(w2_field(), w2_field()), e2);
}

TEST(GammaBracket, ClosureAndFlowHomomorphism) {
  PolyGen gen(34);
  for (int i = 0; i < 10; ++i) {
    LocalVectorField A = gen.screen_field(), B = gen.screen_field();
    LocalVectorField C = gamma_bracket(A, B);
    EXPECT_TRUE(satisfies_screen_condition(C));
    EXPECT_TRUE(gamma_bracket(A, A).is_zero());
    FieldAction act_a(A), act_b(B);
    FlowPair commutator{act_a.apply(act_b.flow().p1) - act_b.apply(act_a.flow().p1),
                        act_a.apply(act_b.flow().p2) - act_b.apply(act_a.flow().p2)};
    EXPECT_EQ(variational_flow(C), commutator);
  }
}

TEST(GammaBracket, ArcLengthPreservingFieldsClose) {
  PolyGen gen(35);
  for (int i = 0; i < 5; ++i) {
    auto [h1, l1] = gen.q_pair();
    auto [h2, l2] = gen.q_pair();
    LocalVectorField A = make_X(h1, l1, param("c1"), 0), B = make_X(h2, l2, 0, param("c2"));
    LocalVectorField C = gamma_bracket(A, B, FrameMetric::flat());
    EXPECT_EQ(classify(C, FrameMetric::flat()), FieldClass::T_PLambda);
    EXPECT_EQ(variational_flow(C, FrameMetric::flat()),
              lie_bracket_flows(variational_flow(A, FrameMetric::flat()), variational_flow(B, FrameMetric::flat())));
  }
}

TEST(CurvatureIdentity, VanishesWithSymbolicG) {
  PolyGen gen(36);
  EXPECT_TRUE(curvature_identity_residual(V0, V1, {}).is_zero());
  for (int i = 0; i < 3; ++i) {
    LocalVectorField A = gen.screen_field(1), B = gen.screen_field(1), U = gen.screen_field(1);
    EXPECT_TRUE(curvature_identity_residual(A, B, U).is_zero()) << curvature_identity_residual(A, B, U);
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(V0), FieldClass::T_PLambda);
  EXPECT_EQ(classify(V1), FieldClass::T_PLambda);
  EXPECT_EQ(classify({0, k1(), 0, 0}), FieldClass::X_P);
  EXPECT_EQ(classify({0, 0, param("c1"), 0}), FieldClass::XStar_P);
}
