#pragma once

#include "nullflow/diffalg.hpp"
#include "nullflow/metric.hpp"

namespace nullflow {

/// Screen-bundle projections (phi_V, psi_V) of the covariant derivative of a field.
struct ProjectionPair {
  DiffPoly phi;
  DiffPoly psi;
  friend bool operator==(const ProjectionPair&, const ProjectionPair&) = default;
};

/// The two integration constants of a pseudo arc-length preserving field:
/// c1 is the constant of the N-component and c2 the constant of the
/// T-component. Both must be constant elements.
struct FieldConstants {
  DiffPoly c1;
  DiffPoly c2;
};

/// Explicit offsets added to the two anti-derivatives inside omega.
struct IntegrationConstants {
  DiffPoly first;
  DiffPoly second;
};

namespace detail {
inline void require_constant(const DiffPoly& c, const char* what) {
  if (!c.is_constant()) throw std::invalid_argument(std::string(what) + " must be a constant");
}
}  // namespace detail

/// omega(k1) f = (1/a) f' + k1 Dinv(f) + Dinv(k1 f).
inline DiffPoly omega_apply(const DiffPoly& f, const IntegrationConstants& k = {},
                            const FrameMetric& m = {}) {
  detail::require_constant(k.first, "integration constant");
  detail::require_constant(k.second, "integration constant");
  DiffPoly inner = anti_derivative(f) + k.first;
  DiffPoly outer = anti_derivative(k1() * f) + k.second;
  return m.over_a(total_derivative(f)) + k1() * inner + outer;
}

/// theta(k1) f = (1/a) f''' + k1 f' + (k1 f)'.
inline DiffPoly theta_apply(const DiffPoly& f, const FrameMetric& m = {}) {
  return m.over_a(total_derivative(f, 3)) + k1() * total_derivative(f) + total_derivative(k1() * f);
}

/// S(k2) f = (k2 f)' + k2 f'.
inline DiffPoly s_apply(const DiffPoly& f) {
  return total_derivative(k2() * f) + k2() * total_derivative(f);
}

/// Cosymplectic operator: Theta(p, q) = (1/a)(theta p + S q, S p - eps1 eps2 theta q).
inline FlowPair theta_matrix_apply(const FlowPair& pq, const FrameMetric& m = {}) {
  DiffPoly tp = theta_apply(pq.p1, m);
  DiffPoly tq = theta_apply(pq.p2, m);
  return {m.over_a(tp + s_apply(pq.p2)), m.over_a(s_apply(pq.p1) - m.eps12() * tq)};
}

/// Symplectic operator J acting on (p, q) = (2h, -eps1 eps2 l); returns (phi, -psi).
///
/// The nonlocal part needs Dinv(p) and the joint Dinv(k1 p + 2 eps1 eps2 k2 q);
/// the latter is taken as one anti-derivative so that only the sum has to be
/// exact. The constants are those of the field being reconstructed.
inline FlowPair j_matrix_apply(const FlowPair& pq, const FieldConstants& c = {},
                               const FrameMetric& m = {}) {
  detail::require_constant(c.c1, "c1");
  detail::require_constant(c.c2, "c2");
  const DiffPoly& p = pq.p1;
  const DiffPoly& q = pq.p2;
  DiffPoly P = anti_derivative(p) - 2 * m.over_a(m.eps1 * c.c1);
  DiffPoly Q = anti_derivative(k1() * p + 2 * m.eps12() * k2() * q) + 4 * c.c2;
  DiffPoly quarter_a = m.a * Rational(1, 4);
  DiffPoly j1 = total_derivative(p) * Rational(1, 4) + quarter_a * k1() * P + quarter_a * Q;
  DiffPoly j2 = m.eps12() * m.a * Rational(1, 2) * k2() * P + m.eps12() * total_derivative(q);
  return {j1, j2};
}

/// (phi_V, psi_V) from the screen data (h_V, l_V) and the field constants.
inline ProjectionPair a_matrix_apply(const DiffPoly& h, const DiffPoly& l, const FieldConstants& c = {},
                                     const FrameMetric& m = {}) {
  detail::require_constant(c.c1, "c1");
  detail::require_constant(c.c2, "c2");
  DiffPoly P = anti_derivative(h);
  DiffPoly Q = anti_derivative(k1() * h - k2() * l);
  DiffPoly half_a = m.a * Rational(1, 2);
  DiffPoly phi = total_derivative(h) * Rational(1, 2) + half_a * k1() * P + half_a * Q -
                 Rational(1, 2) * m.eps1 * c.c1 * k1() + m.a * c.c2;
  DiffPoly psi = total_derivative(l) - m.eps12() * m.a * k2() * P + m.eps2 * c.c1 * k2();
  return {phi, psi};
}

/// Curvature flow (V(k1), V(k2)) from the projections, for rho_V = 0 and G = 0.
inline FlowPair b_matrix_apply(const ProjectionPair& pp, const FrameMetric& m = {}) {
  return {m.over_a(theta_apply(pp.phi, m) - s_apply(pp.psi)),
          m.over_a(s_apply(pp.phi) + m.eps12() * theta_apply(pp.psi, m))};
}

/// R = Theta o J.
inline FlowPair recursion_curvature(const FlowPair& pq, const FieldConstants& c = {},
                                    const FrameMetric& m = {}) {
  return theta_matrix_apply(j_matrix_apply(pq, c, m), m);
}

// Classical Hirota-Satsuma operators on the independent generators (u, v).

inline DiffPoly hs_u(int order = 0) { return DiffPoly::generator(Var::u, order); }
inline DiffPoly hs_v(int order = 0) { return DiffPoly::generator(Var::v, order); }

/// J(u,v) = [[D/2 + u Dinv + Dinv u, -2 Dinv v], [-2 v Dinv, -2 D]].
inline FlowPair hs_j_apply(const FlowPair& pq) {
  DiffPoly P = anti_derivative(pq.p1);
  DiffPoly Q = anti_derivative(hs_u() * pq.p1 - 2 * hs_v() * pq.p2);
  return {total_derivative(pq.p1) * Rational(1, 2) + hs_u() * P + Q,
          -2 * hs_v() * P - 2 * total_derivative(pq.p2)};
}

/// Theta(u,v) with both diagonal entries D^3/2 + u D + D u and off-diagonals D v + v D.
inline FlowPair hs_theta_apply(const FlowPair& pq) {
  auto diag = [](const DiffPoly& f) {
    return total_derivative(f, 3) * Rational(1, 2) + hs_u() * total_derivative(f) +
           total_derivative(hs_u() * f);
  };
  auto off = [](const DiffPoly& f) { return total_derivative(hs_v() * f) + hs_v() * total_derivative(f); };
  return {diag(pq.p1) + off(pq.p2), off(pq.p1) + diag(pq.p2)};
}

/// sigma_0 = (u', v'), sigma_1 = HS-cKdV right-hand side, sigma_{n+2} = Theta J sigma_n.
inline FlowPair hs_classic_sigma(int n) {
  if (n < 0) throw std::invalid_argument("hierarchy index must be non-negative");
  FlowPair s = n % 2 == 0
                   ? FlowPair{hs_u(1), hs_v(1)}
                   : FlowPair{hs_u(3) * Rational(1, 2) + 3 * hs_u() * hs_u(1) - 6 * hs_v() * hs_v(1),
                              -hs_v(3) - 3 * hs_u() * hs_v(1)};
  for (int i = 0; i < n / 2; ++i) s = hs_theta_apply(hs_j_apply(s));
  return s;
}

}  // namespace nullflow
