#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nullflow/param.hpp"

namespace nullflow {

/// Dependent variables. k1/k2 are the curvatures; u/v carry the classical
/// Hirota-Satsuma cross-check on an independent generator set.
enum class Var : std::uint8_t { k1 = 0, k2 = 1, u = 2, v = 3 };

/// Position of a variable inside a FlowPair (k1, u -> 0; k2, v -> 1).
constexpr int slot(Var v) { return static_cast<int>(v) & 1; }

inline const char* var_name(Var v) {
  switch (v) {
    case Var::k1: return "k1";
    case Var::k2: return "k2";
    case Var::u: return "u";
    case Var::v: return "v";
  }
  return "?";
}

struct Generator {
  Var var = Var::k1;
  int order = 0;

  Generator derivative() const { return {var, order + 1}; }
  friend auto operator<=>(const Generator&, const Generator&) = default;
};

/// Product of generator powers, sorted by (variable, order).
class Monomial {
 public:
  struct Power {
    Generator gen;
    int exp;
    friend auto operator<=>(const Power&, const Power&) = default;
  };

  Monomial() = default;
  explicit Monomial(Generator g, int exp = 1) {
    if (exp > 0) {
      powers_.push_back({g, exp});
      degree_ = exp;
    }
  }

  const std::vector<Power>& powers() const { return powers_; }
  bool empty() const { return powers_.empty(); }
  int degree() const { return degree_; }

  int exponent_of(Generator g) const {
    auto it = find(g);
    return it != powers_.end() && it->gen == g ? it->exp : 0;
  }

  int max_order() const {
    int m = -1;
    for (const auto& p : powers_) m = std::max(m, p.gen.order);
    return m;
  }

  /// Returns the monomial with the exponent of `g` changed by `delta`.
  Monomial adjusted(Generator g, int delta) const {
    Monomial r = *this;
    auto it = r.find(g);
    if (it != r.powers_.end() && it->gen == g) {
      it->exp += delta;
      if (it->exp == 0) r.powers_.erase(it);
    } else {
      if (delta < 0) throw std::logic_error("negative generator exponent");
      r.powers_.insert(it, {g, delta});
    }
    r.degree_ += delta;
    return r;
  }

  friend Monomial operator*(const Monomial& x, const Monomial& y) {
    Monomial r;
    r.powers_.reserve(x.powers_.size() + y.powers_.size());
    auto i = x.powers_.begin();
    auto j = y.powers_.begin();
    while (i != x.powers_.end() || j != y.powers_.end()) {
      if (j == y.powers_.end() || (i != x.powers_.end() && i->gen < j->gen)) {
        r.powers_.push_back(*i++);
      } else if (i == x.powers_.end() || j->gen < i->gen) {
        r.powers_.push_back(*j++);
      } else {
        r.powers_.push_back({i->gen, i->exp + j->exp});
        ++i;
        ++j;
      }
    }
    r.degree_ = x.degree_ + y.degree_;
    return r;
  }

  friend bool operator==(const Monomial& x, const Monomial& y) { return x.powers_ == y.powers_; }
  // Graded: total degree first, then lexicographic on (variable, order, exponent).
  friend std::strong_ordering operator<=>(const Monomial& x, const Monomial& y) {
    if (auto c = x.degree_ <=> y.degree_; c != 0) return c;
    return x.powers_ <=> y.powers_;
  }

 private:
  std::vector<Power>::iterator find(Generator g) {
    return std::lower_bound(powers_.begin(), powers_.end(), g,
                            [](const Power& p, const Generator& q) { return p.gen < q; });
  }
  std::vector<Power>::const_iterator find(Generator g) const {
    return std::lower_bound(powers_.begin(), powers_.end(), g,
                            [](const Power& p, const Generator& q) { return p.gen < q; });
  }

  std::vector<Power> powers_;
  int degree_ = 0;
};

/// Element of the differential polynomial algebra over the parameter ring.
///
/// Stored as a sparse map from (generator monomial, parameter monomial) to a
/// nonzero rational. Equality is structural equality of the canonical form.
class DiffPoly {
 public:
  struct Key {
    Monomial gens;
    ParamMonomial params;
    friend bool operator==(const Key&, const Key&) = default;
    friend std::strong_ordering operator<=>(const Key& x, const Key& y) {
      if (auto c = x.gens <=> y.gens; c != 0) return c;
      return x.params <=> y.params;
    }
  };
  using TermMap = std::map<Key, Rational>;

  DiffPoly() = default;
  DiffPoly(int c) : DiffPoly(Rational(c)) {}
  DiffPoly(const Rational& c) {
    if (c != 0) terms_.emplace(Key{}, canonical(c));
  }
  DiffPoly(const ParamCoeff& c) {
    if (!c.is_zero()) terms_.emplace(Key{Monomial{}, c.mono}, c.value);
  }

  static DiffPoly generator(Var v, int order = 0) {
    DiffPoly p;
    p.terms_.emplace(Key{Monomial(Generator{v, order}), {}}, Rational(1));
    return p;
  }
  static DiffPoly param(std::string name, int exponent = 1) {
    return DiffPoly(ParamCoeff::symbol(std::move(name), exponent));
  }
  static DiffPoly term(const Rational& c, Monomial gens, ParamMonomial params = {}) {
    DiffPoly p;
    if (c != 0) p.terms_.emplace(Key{std::move(gens), std::move(params)}, canonical(c));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// True when no generator appears (the element is a parameter polynomial).
  bool is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.gens.empty(); });
  }

  DiffPoly constant_part() const {
    DiffPoly r;
    for (const auto& [k, c] : terms_)
      if (k.gens.empty()) r.terms_.emplace(k, c);
    return r;
  }

  /// Membership in P0: the constant part vanishes.
  bool in_p0() const { return constant_part().is_zero(); }

  DiffPoly& operator+=(const DiffPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  DiffPoly& operator-=(const DiffPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

  friend DiffPoly operator+(DiffPoly x, const DiffPoly& y) { return x += y; }
  friend DiffPoly operator-(DiffPoly x, const DiffPoly& y) { return x -= y; }
  friend DiffPoly operator-(DiffPoly x) {
    for (auto& [k, c] : x.terms_) c = -c;
    return x;
  }

  friend DiffPoly operator*(const DiffPoly& x, const DiffPoly& y) {
    DiffPoly r;
    for (const auto& [kx, cx] : x.terms_)
      for (const auto& [ky, cy] : y.terms_)
        r.add_term(Key{kx.gens * ky.gens, kx.params * ky.params}, cx * cy);
    return r;
  }

  friend DiffPoly operator*(DiffPoly x, const Rational& s) {
    if (s == 0) return {};
    Rational q = canonical(s);
    for (auto& [k, c] : x.terms_) c *= q;
    return x;
  }
  friend DiffPoly operator*(const Rational& s, DiffPoly x) { return std::move(x) * s; }
  friend DiffPoly operator*(DiffPoly x, int s) { return std::move(x) * Rational(s); }
  friend DiffPoly operator*(int s, DiffPoly x) { return std::move(x) * Rational(s); }

  friend DiffPoly operator*(const DiffPoly& x, const ParamCoeff& s) {
    if (s.is_zero()) return {};
    if (s.mono.empty()) return x * s.value;
    DiffPoly r;
    for (const auto& [k, c] : x.terms_) r.add_term(Key{k.gens, k.params * s.mono}, c * s.value);
    return r;
  }
  friend DiffPoly operator*(const ParamCoeff& s, const DiffPoly& x) { return x * s; }

  friend bool operator==(const DiffPoly& x, const DiffPoly& y) { return x.terms_ == y.terms_; }

  /// Largest derivative order of any generator; -1 for constants.
  int order() const {
    int m = -1;
    for (const auto& [k, c] : terms_) m = std::max(m, k.gens.max_order());
    return m;
  }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.gens.degree());
    return d;
  }

  /// Adds c times the basis term `k`, dropping it if the sum cancels.
  void add_term(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

 private:
  TermMap terms_;
};

inline DiffPoly k1(int order = 0) { return DiffPoly::generator(Var::k1, order); }
inline DiffPoly k2(int order = 0) { return DiffPoly::generator(Var::k2, order); }
inline DiffPoly param(std::string name, int exponent = 1) {
  return DiffPoly::param(std::move(name), exponent);
}

/// Multiplication by the inverse of a unit coefficient (a, eps_i, nonzero rationals).
inline DiffPoly divide(const DiffPoly& p, const DiffPoly& unit) {
  if (unit.size() != 1 || !unit.is_constant()) throw NotInvertible("divisor is not a unit monomial");
  const auto& [k, c] = *unit.terms().begin();
  return p * ParamCoeff(c, k.params).inverse();
}

/// Total derivative D: k^(m) -> k^(m+1), parameters are constants.
inline DiffPoly total_derivative(const DiffPoly& f) {
  DiffPoly r;
  for (const auto& [k, c] : f.terms()) {
    for (const auto& p : k.gens.powers()) {
      Monomial m = k.gens.adjusted(p.gen, -1).adjusted(p.gen.derivative(), 1);
      r.add_term({std::move(m), k.params}, c * p.exp);
    }
  }
  return r;
}

inline DiffPoly total_derivative(const DiffPoly& f, int times) {
  DiffPoly r = f;
  for (int i = 0; i < times; ++i) r = total_derivative(r);
  return r;
}

/// Formal partial derivative with respect to one generator.
inline DiffPoly partial_derivative(const DiffPoly& f, Generator g) {
  DiffPoly r;
  for (const auto& [k, c] : f.terms()) {
    int e = k.gens.exponent_of(g);
    if (e == 0) continue;
    r.add_term({k.gens.adjusted(g, -1), k.params}, c * e);
  }
  return r;
}

/// Distinct generators appearing in `f`, sorted.
inline std::vector<Generator> generators_of(const DiffPoly& f) {
  std::vector<Generator> out;
  for (const auto& [k, c] : f.terms())
    for (const auto& p : k.gens.powers()) out.push_back(p.gen);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline int order_of(const DiffPoly& f) { return f.order(); }

}  // namespace nullflow
