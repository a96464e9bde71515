#pragma once

#include <string>
#include <vector>

#include "nullflow/operators.hpp"

namespace nullflow {

/// V = f T + h W1 + g N + l W2 along the Cartan frame.
struct LocalVectorField {
  DiffPoly f;
  DiffPoly h;
  DiffPoly g;
  DiffPoly l;

  bool is_zero() const { return f.is_zero() && h.is_zero() && g.is_zero() && l.is_zero(); }
  int order() const { return std::max({f.order(), h.order(), g.order(), l.order()}); }

  friend bool operator==(const LocalVectorField&, const LocalVectorField&) = default;
  friend LocalVectorField operator+(const LocalVectorField& x, const LocalVectorField& y) {
    return {x.f + y.f, x.h + y.h, x.g + y.g, x.l + y.l};
  }
  friend LocalVectorField operator-(const LocalVectorField& x, const LocalVectorField& y) {
    return {x.f - y.f, x.h - y.h, x.g - y.g, x.l - y.l};
  }
  friend LocalVectorField operator*(const DiffPoly& s, const LocalVectorField& x) {
    return {s * x.f, s * x.h, s * x.g, s * x.l};
  }
};

inline LocalVectorField t_field() { return {1, 0, 0, 0}; }
inline LocalVectorField w1_field() { return {0, 1, 0, 0}; }
inline LocalVectorField n_field() { return {0, 0, 1, 0}; }
inline LocalVectorField w2_field() { return {0, 0, 0, 1}; }

struct Projections {
  DiffPoly phi;
  DiffPoly psi;
  DiffPoly rho;
  friend bool operator==(const Projections&, const Projections&) = default;
};

/// phi, psi: screen projections of nabla_T V; rho measures the change of the
/// pseudo arc-length (rho = 0 iff V preserves it).
inline Projections projections(const LocalVectorField& V, const FrameMetric& m = {}) {
  DiffPoly k1g = k1() * V.g;
  DiffPoly phi = m.a * V.f + total_derivative(V.h) - m.eps1 * k1g;
  DiffPoly psi = total_derivative(V.l) + m.eps2 * k2() * V.g;
  DiffPoly rho = -m.a * total_derivative(V.f) + 2 * m.a * k1() * V.h - m.a * k2() * V.l - total_derivative(phi) +
                 m.eps1 * k1() * total_derivative(V.g);
  return {phi, psi, rho};
}

/// The arc-length preserving field with screen data (h, l) and constants (c1, c2).
/// Throws NotExact unless Dinv(h) and Dinv(k1 h - k2 l) exist.
inline LocalVectorField make_X(const DiffPoly& h, const DiffPoly& l, const DiffPoly& c1, const DiffPoly& c2,
                               const FrameMetric& m = {}) {
  detail::require_constant(c1, "c1");
  detail::require_constant(c2, "c2");
  DiffPoly P = anti_derivative(h);
  DiffPoly Q = anti_derivative(k1() * h - k2() * l);
  DiffPoly g = -m.eps1 * m.a * P + c1;
  DiffPoly bracket = total_derivative(h) + m.a * k1() * P - m.a * Q - m.eps1 * c1 * k1();
  DiffPoly f = -Rational(1, 2) * m.over_a(bracket) + c2;
  return {f, h, g, l};
}

/// (V(k1), V(k2)) for a field with the screen condition, including rho and G terms.
inline FlowPair variational_flow(const LocalVectorField& V, const FrameMetric& m = {}) {
  Projections p = projections(V, m);
  FlowPair core = b_matrix_apply({p.phi, p.psi}, m);
  DiffPoly extra1 =
      m.over_a(Rational(1, 2) * m.over_a(total_derivative(p.rho, 2)) + k1() * p.rho - 2 * m.G * total_derivative(V.g));
  DiffPoly extra2 = m.over_a(k2() * p.rho) - m.eps2 * m.G * V.l;
  return {core.p1 + extra1, core.p2 + extra2};
}

struct FrameCoefficients {
  DiffPoly alpha;
  DiffPoly beta;
  DiffPoly delta;
  friend bool operator==(const FrameCoefficients&, const FrameCoefficients&) = default;
};

inline FrameCoefficients frame_derivative_coeffs(const LocalVectorField& V, const FrameMetric& m = {}) {
  Projections p = projections(V, m);
  DiffPoly alpha = m.over_a(total_derivative(p.phi) + Rational(1, 2) * p.rho);
  DiffPoly beta = m.over_a(total_derivative(alpha) + k1() * p.phi - k2() * p.psi - m.G * V.g);
  DiffPoly delta = m.over_a(total_derivative(p.psi, 2)) + k1() * p.psi + m.eps12() * k2() * p.phi;
  return {alpha, beta, delta};
}

/// Action of a field on P: V(k_i) from the variational flow, extended to
/// derivatives by V(f') = V(f)' + rho/(2a) f'.
class FieldAction {
 public:
  FieldAction(const LocalVectorField& V, const FrameMetric& m = {})
      : flow_(variational_flow(V, m)), shift_(Rational(1, 2) * m.over_a(projections(V, m).rho)) {}

  DiffPoly apply(const DiffPoly& f) {
    DiffPoly r;
    for (const auto& g : generators_of(f)) {
      const DiffPoly& x = image(g);
      if (x.is_zero()) continue;
      r += x * partial_derivative(f, g);
    }
    return r;
  }

  const FlowPair& flow() const { return flow_; }

 private:
  // V(k_slot^(m)), memoized per order.
  const DiffPoly& image(Generator g) {
    auto& c = cache_[slot(g.var)];
    if (c.empty()) c.push_back(flow_[slot(g.var)]);
    while (static_cast<int>(c.size()) <= g.order) {
      int next = static_cast<int>(c.size());
      Generator k{slot(g.var) == 0 ? Var::k1 : Var::k2, next};
      c.push_back(total_derivative(c.back()) + shift_ * DiffPoly::generator(k.var, k.order));
    }
    return c[g.order];
  }

  FlowPair flow_;
  DiffPoly shift_;
  std::array<std::vector<DiffPoly>, 2> cache_;
};

inline DiffPoly field_apply(const LocalVectorField& V, const DiffPoly& f, const FrameMetric& m = {}) {
  return FieldAction(V, m).apply(f);
}

/// Tensor derivation D_V U: V acts on the components of U and rotates the frame.
inline LocalVectorField d_v(const LocalVectorField& V, const LocalVectorField& U, const FrameMetric& m = {}) {
  FieldAction act(V, m);
  Projections p = projections(V, m);
  FrameCoefficients k = frame_derivative_coeffs(V, m);
  DiffPoly dpsi_a = m.over_a(total_derivative(p.psi));
  DiffPoly delta_a = m.over_a(k.delta);
  return {
      act.apply(U.f) - k.alpha * U.f - k.beta * U.h + m.eps12() * delta_a * U.l,
      act.apply(U.h) + p.phi * U.f - m.eps1 * k.beta * U.g - m.eps12() * dpsi_a * U.l,
      act.apply(U.g) + m.eps1 * p.phi * U.h + k.alpha * U.g + m.eps2 * p.psi * U.l,
      act.apply(U.l) + p.psi * U.f + dpsi_a * U.h + m.eps1 * delta_a * U.g,
  };
}

/// [V1, V2]_gamma = D_V1 V2 - D_V2 V1.
inline LocalVectorField gamma_bracket(const LocalVectorField& V1, const LocalVectorField& V2,
                                      const FrameMetric& m = {}) {
  return d_v(V1, V2, m) - d_v(V2, V1, m);
}

/// <V, U> with <T,N> = -1 and <Wi,Wi> = eps_i.
inline DiffPoly inner(const LocalVectorField& V, const LocalVectorField& U, const FrameMetric& m = {}) {
  return -V.f * U.g - V.g * U.f + m.eps1 * V.h * U.h + m.eps2 * V.l * U.l;
}

/// D_[V1,V2] U - D_V1 D_V2 U + D_V2 D_V1 U - G(<U,V1> V2 - <U,V2> V1); zero for every triple.
inline LocalVectorField curvature_identity_residual(const LocalVectorField& V1, const LocalVectorField& V2,
                                                    const LocalVectorField& U, const FrameMetric& m = {}) {
  LocalVectorField lhs =
      d_v(gamma_bracket(V1, V2, m), U, m) - d_v(V1, d_v(V2, U, m), m) + d_v(V2, d_v(V1, U, m), m);
  LocalVectorField rhs = m.G * (inner(U, V1, m) * V2 - inner(U, V2, m) * V1);
  return lhs - rhs;
}

enum class FieldClass { X_P, XStar_P, T_PLambda };

inline const char* to_string(FieldClass c) {
  switch (c) {
    case FieldClass::X_P: return "X_P";
    case FieldClass::XStar_P: return "X*_P";
    case FieldClass::T_PLambda: return "T_PLambda";
  }
  return "?";
}

/// Screen condition g' = -eps1 a h.
inline bool satisfies_screen_condition(const LocalVectorField& V, const FrameMetric& m = {}) {
  return (total_derivative(V.g) + m.eps1 * m.a * V.h).is_zero();
}

/// Strongest class whose defining identities hold exactly. Tangency to the
/// arc-length preserving space is tested through rho = 0, which fixes f up to
/// the additive constant left free by the field constants.
inline FieldClass classify(const LocalVectorField& V, const FrameMetric& m = {}) {
  if (!satisfies_screen_condition(V, m)) return FieldClass::X_P;
  if (!projections(V, m).rho.is_zero()) return FieldClass::XStar_P;
  return FieldClass::T_PLambda;
}

}  // namespace nullflow
