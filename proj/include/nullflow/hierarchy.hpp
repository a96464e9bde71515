#pragma once

#include <string>
#include <vector>

#include "nullflow/expr.hpp"
#include "nullflow/nullcurve.hpp"

namespace nullflow {

/// The hierarchy lives in flat space: G is pinned to 0.
inline FrameMetric hierarchy_metric() { return FrameMetric::flat(); }

struct HierarchyEntry {
  int index = 0;
  LocalVectorField field;
  FlowPair flow;
  std::vector<std::string> constants_used;
};

/// How the two integration constants of a recursion step are chosen.
struct ConstantPolicy {
  enum class Kind { fresh, zero, explicit_values };
  Kind kind = Kind::fresh;
  DiffPoly c_odd;   // N-component constant
  DiffPoly c_even;  // T-component constant
  int next_fresh = 1;

  /// Mints c<next>, c<next+1>.
  static ConstantPolicy fresh(int next = 1) { return {Kind::fresh, {}, {}, next}; }
  static ConstantPolicy zero() { return {Kind::zero, {}, {}, 0}; }
  static ConstantPolicy explicit_values(DiffPoly c_odd, DiffPoly c_even) {
    return {Kind::explicit_values, std::move(c_odd), std::move(c_even), 0};
  }
};

namespace detail {
inline std::vector<std::string> parameter_names(const DiffPoly& p) {
  std::vector<std::string> out;
  for (const auto& [k, c] : p.terms())
    for (const auto& [s, e] : k.params.factors()) out.push_back(s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}
}  // namespace detail

/// V0 = b T (index 0) or V1 = -a c k1 T - 2 eps1 a^2 c N (index 1).
inline HierarchyEntry seed(int index, const DiffPoly& constant) {
  const FrameMetric m = hierarchy_metric();
  detail::require_constant(constant, "seed constant");
  HierarchyEntry e;
  e.index = index;
  if (index == 0)
    e.field = make_X(0, 0, 0, constant, m);
  else if (index == 1)
    e.field = make_X(0, 0, -2 * m.eps1 * m.a * m.a * constant, 0, m);
  else
    throw std::invalid_argument("seed index must be 0 or 1");
  e.flow = variational_flow(e.field, m);
  e.constants_used = detail::parameter_names(constant);
  return e;
}

/// R(V) = X(V(k1)/2, -eps1 eps2 V(k2)) with the policy's constants.
inline HierarchyEntry recursion_step(const HierarchyEntry& e, const ConstantPolicy& policy) {
  const FrameMetric m = hierarchy_metric();
  DiffPoly c_odd, c_even;
  std::vector<std::string> used;
  switch (policy.kind) {
    case ConstantPolicy::Kind::fresh: {
      std::string odd = "c" + std::to_string(policy.next_fresh);
      std::string even = "c" + std::to_string(policy.next_fresh + 1);
      c_odd = param(odd);
      c_even = param(even);
      used = {odd, even};
      break;
    }
    case ConstantPolicy::Kind::zero: break;
    case ConstantPolicy::Kind::explicit_values:
      c_odd = policy.c_odd;
      c_even = policy.c_even;
      used = detail::parameter_names(c_odd + c_even);
      break;
  }
  DiffPoly h = e.flow.p1 * Rational(1, 2);
  DiffPoly l = -m.eps12() * e.flow.p2;
  HierarchyEntry next;
  next.index = e.index + 2;
  next.field = make_X(h, l, c_odd, c_even, m);
  next.flow = variational_flow(next.field, m);
  next.constants_used = std::move(used);
  return next;
}

inline FlowPair flow_of(const HierarchyEntry& e) { return variational_flow(e.field, hierarchy_metric()); }

/// Commutation of the curvature flows, which by injectivity of the field to
/// flow map is equivalent to the vanishing of the gamma bracket.
inline bool commute_check(const HierarchyEntry& e1, const HierarchyEntry& e2) {
  return lie_bracket_flows(e1.flow, e2.flow).is_zero();
}

struct GenerateOptions {
  ConstantPolicy::Kind constants = ConstantPolicy::Kind::fresh;
  DiffPoly b = param("b");
  DiffPoly c = param("c");
  int max_order = -1;  // negative: no cap
};

/// Thrown when a generated flow exceeds the configured derivative order.
struct OrderCapExceeded : Error {
  using Error::Error;
};

/// V_0 ... V_upto. Entry n >= 2 is R V_{n-2}; fresh constants for entry n are
/// c_{2n-3}, c_{2n-2}, so V2 uses c1, c2 and V3 uses c3, c4.
inline std::vector<HierarchyEntry> generate(int upto, const GenerateOptions& opt = {}) {
  if (upto < 0) throw std::invalid_argument("upto must be non-negative");
  std::vector<HierarchyEntry> out;
  auto check = [&](const HierarchyEntry& e) {
    if (opt.max_order >= 0 && e.flow.order() > opt.max_order)
      throw OrderCapExceeded("flow of V" + std::to_string(e.index) + " has order " +
                             std::to_string(e.flow.order()) + ", above the cap " + std::to_string(opt.max_order));
  };
  for (int n = 0; n <= upto; ++n) {
    if (n < 2) {
      out.push_back(seed(n, n == 0 ? opt.b : opt.c));
    } else {
      ConstantPolicy p = opt.constants == ConstantPolicy::Kind::zero ? ConstantPolicy::zero()
                                                                      : ConstantPolicy::fresh(2 * n - 3);
      out.push_back(recursion_step(out[n - 2], p));
    }
    check(out.back());
  }
  return out;
}

/// Reference expressions for V1's flow, V2, V2's flow and V3, in parser syntax.
struct ReferenceFixtures {
  std::string v1_flow_k1 = "c*(k1''' + 3*a*k1*k1' + 6*eps1*eps2*a*k2*k2')";
  std::string v1_flow_k2 = "-c*(2*k2''' + 3*a*k1*k2')";
  std::string v2_f = "-b/(4*a)*k1'' - b/8*k1^2 + eps1*eps2*b/4*k2^2 + eps1*c1/(2*a)*k1 + c2";
  std::string v2_h = "b/2*k1'";
  std::string v2_g = "c1 - eps1*a*b/2*k1";
  std::string v2_l = "-eps1*eps2*b*k2'";
  std::string v2_flow_k1 =
      "(2*b*k1^(5) + (10*a*b*k1 - 4*eps1*c1)*k1''' + 20*eps1*eps2*a*b*k2*k2''' + 20*a*b*k1'*k1''"
      " + 20*eps1*eps2*a*b*k2'*k2'' + (15*a^2*b*k1^2 + 10*eps1*eps2*a^2*b*k2^2 - 12*eps1*a*c1*k1"
      " + 8*a^2*c2)*k1' + (20*eps1*eps2*a^2*b*k1 - 24*eps2*a*c1)*k2*k2')/(8*a^2)";
  std::string v2_flow_k2 =
      "(-8*b*k2^(5) + (8*eps1*c1 - 20*a*b*k1)*k2''' - 10*a*b*k1''*k2' - 20*a*b*k1'*k2''"
      " + (10*eps1*eps2*a^2*b*k2^2 - 5*a^2*b*k1^2 + 12*eps1*a*c1*k1 + 8*a^2*c2)*k2')/(8*a^2)";
  std::string v3_f =
      "-c/(4*a)*k1^(4) - 3*c/4*k1*k1'' - 7*c/8*k1'^2 - 5*eps1*eps2*c/2*k2*k2'' - eps1*eps2*c*k2'^2"
      " - a*c/8*k1^3 + eps1*c3/(2*a)*k1 - 3*eps1*eps2*a*c/4*k1*k2^2 + c4";
  std::string v3_h = "c/2*k1''' + 3*a*c/2*k1*k1' + 3*eps1*eps2*a*c*k2*k2'";
  std::string v3_g = "-eps1*a*c/2*k1'' - 3*eps1*a^2*c/4*k1^2 - 3*eps2*a^2*c/2*k2^2 + c3";
  std::string v3_l = "2*eps1*eps2*c*k2''' + 3*eps1*eps2*a*c*k1*k2'";
};

struct FixtureCheck {
  std::string name;
  bool passed = false;
  DiffPoly difference;  // fixture minus generated
};

struct VerificationReport {
  std::vector<FixtureCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const FixtureCheck& c) { return c.passed; });
  }
};

/// Compares generated V1 flow, V2, V2 flow and V3 with the fixtures.
/// With the zero policy the recursion constants are set to 0, so only the
/// constant-bearing components can differ.
inline VerificationReport verify_against_paper(const ReferenceFixtures& fx = {},
                                               ConstantPolicy::Kind policy = ConstantPolicy::Kind::fresh) {
  GenerateOptions opt;
  opt.constants = policy;
  auto entries = generate(3, opt);
  VerificationReport report;
  auto add = [&](std::string name, const std::string& expected, const DiffPoly& got) {
    DiffPoly diff = parse_expr(expected) - got;
    report.checks.push_back({std::move(name), diff.is_zero(), diff});
  };
  add("V1 flow k1", fx.v1_flow_k1, entries[1].flow.p1);
  add("V1 flow k2", fx.v1_flow_k2, entries[1].flow.p2);
  const LocalVectorField& v2 = entries[2].field;
  add("V2 T", fx.v2_f, v2.f);
  add("V2 W1", fx.v2_h, v2.h);
  add("V2 N", fx.v2_g, v2.g);
  add("V2 W2", fx.v2_l, v2.l);
  add("V2 flow k1", fx.v2_flow_k1, flow_of(entries[2]).p1);
  add("V2 flow k2", fx.v2_flow_k2, flow_of(entries[2]).p2);
  const LocalVectorField& v3 = entries[3].field;
  add("V3 T", fx.v3_f, v3.f);
  add("V3 W1", fx.v3_h, v3.h);
  add("V3 N", fx.v3_g, v3.g);
  add("V3 W2", fx.v3_l, v3.l);
  return report;
}

struct CommutationResult {
  int i = 0;
  int j = 0;
  bool commute = false;
};

/// All pairs i <= j <= upto with i + j <= max_sum.
inline std::vector<CommutationResult> commutation_suite(const std::vector<HierarchyEntry>& entries, int max_sum) {
  std::vector<CommutationResult> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i; j < entries.size(); ++j)
      if (static_cast<int>(i + j) <= max_sum)
        out.push_back({static_cast<int>(i), static_cast<int>(j), commute_check(entries[i], entries[j])});
  return out;
}

}  // namespace nullflow
