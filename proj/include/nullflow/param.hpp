#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nullflow/errors.hpp"

namespace nullflow {

using Rational = mpq_class;

/// mpq_class(n, d) does not reduce; arithmetic assumes reduced operands.
inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

namespace symbols {
inline constexpr std::string_view a = "a";
inline constexpr std::string_view eps1 = "eps1";
inline constexpr std::string_view eps2 = "eps2";
inline constexpr std::string_view G = "G";
}  // namespace symbols

inline bool is_involutive(std::string_view s) { return s == symbols::eps1 || s == symbols::eps2; }
inline bool is_unit_symbol(std::string_view s) { return s == symbols::a; }

/// Monomial in the parameter symbols.
///
/// Canonical form: factors sorted by name, no zero exponents, eps1/eps2
/// exponents reduced mod 2, and only `a` may carry a negative exponent.
class ParamMonomial {
 public:
  using Factor = std::pair<std::string, int>;

  ParamMonomial() = default;

  static ParamMonomial symbol(std::string name, int exponent = 1) {
    ParamMonomial m;
    m.multiply_factor(std::move(name), exponent);
    return m;
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  int exponent_of(std::string_view name) const {
    for (const auto& [s, e] : factors_)
      if (s == name) return e;
    return 0;
  }

  bool only_units() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) {
      return is_unit_symbol(f.first) || is_involutive(f.first);
    });
  }

  ParamMonomial inverse() const {
    if (!only_units()) throw NotInvertible("parameter monomial is not a unit");
    ParamMonomial r;
    for (const auto& [s, e] : factors_) r.multiply_factor(s, -e);
    return r;
  }

  friend ParamMonomial operator*(const ParamMonomial& x, const ParamMonomial& y) {
    ParamMonomial r;
    r.factors_.reserve(x.factors_.size() + y.factors_.size());
    auto i = x.factors_.begin();
    auto j = y.factors_.begin();
    while (i != x.factors_.end() || j != y.factors_.end()) {
      if (j == y.factors_.end() || (i != x.factors_.end() && i->first < j->first)) {
        r.factors_.push_back(*i++);
      } else if (i == x.factors_.end() || j->first < i->first) {
        r.factors_.push_back(*j++);
      } else {
        int e = is_involutive(i->first) ? (i->second + j->second) % 2 : i->second + j->second;
        if (e != 0) r.factors_.emplace_back(i->first, e);
        ++i;
        ++j;
      }
    }
    return r;
  }

  friend bool operator==(const ParamMonomial&, const ParamMonomial&) = default;
  friend auto operator<=>(const ParamMonomial& x, const ParamMonomial& y) {
    return x.factors_ <=> y.factors_;
  }

 private:
  void multiply_factor(std::string name, int exponent) {
    if (is_involutive(name)) exponent = ((exponent % 2) + 2) % 2;
    if (exponent < 0 && !is_unit_symbol(name))
      throw NotInvertible("negative exponent on non-unit parameter '" + name + "'");
    auto it = std::lower_bound(factors_.begin(), factors_.end(), name,
                               [](const Factor& f, const std::string& n) { return f.first < n; });
    if (it != factors_.end() && it->first == name) {
      int e = is_involutive(name) ? (it->second + exponent) % 2 : it->second + exponent;
      if (e == 0)
        factors_.erase(it);
      else
        it->second = e;
    } else if (exponent != 0) {
      factors_.insert(it, {std::move(name), exponent});
    }
  }

  std::vector<Factor> factors_;
};

/// A single coefficient term: rational times a parameter monomial.
struct ParamCoeff {
  Rational value{0};
  ParamMonomial mono;

  ParamCoeff() = default;
  ParamCoeff(Rational v) : value(std::move(v)) { canonicalize(); }
  ParamCoeff(int v) : value(v) {}
  ParamCoeff(Rational v, ParamMonomial m) : value(std::move(v)), mono(std::move(m)) {
    canonicalize();
  }

  static ParamCoeff symbol(std::string name, int exponent = 1) {
    return {Rational(1), ParamMonomial::symbol(std::move(name), exponent)};
  }

  bool is_zero() const { return value == 0; }

  ParamCoeff inverse() const {
    if (value == 0) throw NotInvertible("division by zero coefficient");
    return {Rational(1) / value, mono.inverse()};
  }

  friend ParamCoeff operator*(const ParamCoeff& x, const ParamCoeff& y) {
    return {x.value * y.value, x.mono * y.mono};
  }
  friend ParamCoeff operator-(const ParamCoeff& x) { return {-x.value, x.mono}; }
  friend bool operator==(const ParamCoeff& x, const ParamCoeff& y) {
    return x.value == y.value && x.mono == y.mono;
  }

 private:
  void canonicalize() {
    value.canonicalize();
    if (value == 0) mono = ParamMonomial{};
  }
};

}  // namespace nullflow
