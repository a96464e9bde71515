#pragma once

#include <array>
#include <vector>

#include "nullflow/diffpoly.hpp"

namespace nullflow {

/// Pair (p1, p2) of differential polynomials: an evolutionary derivation
/// acting on the two dependent variables.
struct FlowPair {
  DiffPoly p1;
  DiffPoly p2;

  const DiffPoly& operator[](int i) const { return i == 0 ? p1 : p2; }
  DiffPoly& operator[](int i) { return i == 0 ? p1 : p2; }

  bool is_zero() const { return p1.is_zero() && p2.is_zero(); }
  int order() const { return std::max(p1.order(), p2.order()); }

  friend bool operator==(const FlowPair&, const FlowPair&) = default;
  friend FlowPair operator+(const FlowPair& x, const FlowPair& y) { return {x.p1 + y.p1, x.p2 + y.p2}; }
  friend FlowPair operator-(const FlowPair& x, const FlowPair& y) { return {x.p1 - y.p1, x.p2 - y.p2}; }
  friend FlowPair operator*(const DiffPoly& s, const FlowPair& x) { return {s * x.p1, s * x.p2}; }
};

/// Variational derivative: sum over m of (-D)^m d f / d var^(m).
inline DiffPoly euler_operator(const DiffPoly& f, Var var) {
  DiffPoly r;
  int top = -1;
  for (const auto& g : generators_of(f))
    if (g.var == var) top = std::max(top, g.order);
  for (int m = top; m >= 0; --m) {
    // Horner form: r = d f/d var^(m) - D r
    r = partial_derivative(f, Generator{var, m}) - total_derivative(r);
  }
  return r;
}

namespace detail {

// Ordering used by integration by parts: derivative order first, then variable.
inline bool ibp_less(Generator x, Generator y) {
  return x.order != y.order ? x.order < y.order : x.var < y.var;
}

// Polynomial antiderivative with respect to one generator, others held fixed.
inline DiffPoly integrate_in(const DiffPoly& f, Generator z) {
  DiffPoly r;
  for (const auto& [k, c] : f.terms()) {
    int e = k.gens.exponent_of(z);
    r.add_term({k.gens.adjusted(z, 1), k.params}, c / (e + 1));
  }
  return r;
}

}  // namespace detail

/// Unique g in P0 with D g = f.
///
/// Integrates by parts from the highest generator downward: if f = A x + B
/// with x the top generator, A is integrated in the predecessor of x and D of
/// the result is subtracted. Throws NotExact when the residue cannot be
/// reduced to zero and NonZeroConstantTerm when f is not in P0.
inline DiffPoly anti_derivative(const DiffPoly& f) {
  if (!f.in_p0()) throw NonZeroConstantTerm("anti-derivative of an element with a constant term");
  DiffPoly rest = f;
  DiffPoly result;
  while (!rest.is_zero()) {
    auto gens = generators_of(rest);
    Generator top = *std::max_element(gens.begin(), gens.end(), detail::ibp_less);
    if (top.order == 0) throw NotExact("residue has no derivative generators");

    DiffPoly coeff;
    for (const auto& [k, c] : rest.terms()) {
      int e = k.gens.exponent_of(top);
      if (e > 1) throw NotExact("nonlinear in the highest derivative");
      if (e == 1) coeff.add_term({k.gens.adjusted(top, -1), k.params}, c);
    }
    const Generator z{top.var, top.order - 1};
    for (const auto& g : generators_of(coeff))
      if (!detail::ibp_less(g.derivative(), top) && g != z)
        throw NotExact("coefficient of the highest derivative is too high order");

    DiffPoly piece = detail::integrate_in(coeff, z);
    rest -= total_derivative(piece);
    result += piece;
  }
  return result;
}

/// Exactness test that does not go through integration by parts.
inline bool is_total_derivative(const DiffPoly& f) {
  if (!f.in_p0()) return false;
  for (Var v : {Var::k1, Var::k2, Var::u, Var::v})
    if (!euler_operator(f, v).is_zero()) return false;
  return true;
}

/// Frechet derivative A'[B]: componentwise sum of D^m(b_i) * d a_j / d u_i^(m).
inline FlowPair frechet(const FlowPair& A, const FlowPair& B) {
  // cache[slot] holds D^m(b_slot) for m = 0, 1, ...
  std::array<std::vector<DiffPoly>, 2> cache;
  auto derivative_of = [&](int s, int m) -> const DiffPoly& {
    auto& c = cache[s];
    if (c.empty()) c.push_back(B[s]);
    while (static_cast<int>(c.size()) <= m) c.push_back(total_derivative(c.back()));
    return c[m];
  };
  FlowPair r;
  for (int j = 0; j < 2; ++j) {
    for (const auto& g : generators_of(A[j])) {
      const DiffPoly& b = derivative_of(slot(g.var), g.order);
      if (b.is_zero()) continue;
      r[j] += b * partial_derivative(A[j], g);
    }
  }
  return r;
}

/// [A, B] = B'[A] - A'[B], the bracket of the evolutionary derivations.
inline FlowPair lie_bracket_flows(const FlowPair& A, const FlowPair& B) {
  return frechet(B, A) - frechet(A, B);
}

/// True when S is a symmetry of the evolution equation u_t = F.
inline bool is_symmetry(const FlowPair& F, const FlowPair& S) {
  return lie_bracket_flows(F, S).is_zero();
}

/// Applies the evolutionary derivation defined by `A` to a polynomial.
inline DiffPoly apply_derivation(const FlowPair& A, const DiffPoly& f) {
  return frechet(FlowPair{f, {}}, A).p1;
}

}  // namespace nullflow
