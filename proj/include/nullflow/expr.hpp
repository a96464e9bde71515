#pragma once

#include <cctype>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nullflow/diffalg.hpp"

namespace nullflow {

enum class RenderFormat { plain, latex };

namespace detail {

inline bool is_known_parameter(std::string_view s) {
  if (s == "a" || s == "b" || s == "c" || s == "G" || s == "eps1" || s == "eps2") return true;
  if (s.size() > 1 && s[0] == 'c')
    return std::all_of(s.begin() + 1, s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
  return false;
}

inline std::string plain_generator(Generator g) {
  std::string s = var_name(g.var);
  if (g.order <= 3)
    s.append(static_cast<std::size_t>(g.order), '\'');
  else
    s += "^(" + std::to_string(g.order) + ")";
  return s;
}

inline std::string latex_generator(Generator g) {
  std::string s;
  switch (g.var) {
    case Var::k1: s = "k_{1}"; break;
    case Var::k2: s = "k_{2}"; break;
    case Var::u: s = "u"; break;
    case Var::v: s = "v"; break;
  }
  if (g.order <= 3)
    s.append(static_cast<std::size_t>(g.order), '\'');
  else
    s += "^{(" + std::to_string(g.order) + ")}";
  return s;
}

inline std::string latex_parameter(const std::string& name) {
  if (name == "eps1") return "\\varepsilon_{1}";
  if (name == "eps2") return "\\varepsilon_{2}";
  if (name.size() > 1 && name[0] == 'c') return "c_{" + name.substr(1) + "}";
  return name;
}

inline std::string render_term(const DiffPoly::Key& k, const Rational& c, RenderFormat fmt) {
  std::vector<std::string> factors;
  for (const auto& [s, e] : k.params.factors()) {
    if (fmt == RenderFormat::plain)
      factors.push_back(e == 1 ? s : s + "^" + std::to_string(e));
    else
      factors.push_back(e == 1 ? latex_parameter(s) : latex_parameter(s) + "^{" + std::to_string(e) + "}");
  }
  for (const auto& p : k.gens.powers()) {
    if (fmt == RenderFormat::plain) {
      std::string g = plain_generator(p.gen);
      factors.push_back(p.exp == 1 ? g : g + "^" + std::to_string(p.exp));
    } else {
      std::string g = latex_generator(p.gen);
      if (p.exp != 1) g = (p.gen.order > 3 ? "(" + g + ")" : g) + "^{" + std::to_string(p.exp) + "}";
      factors.push_back(g);
    }
  }
  Rational mag = abs(c);
  std::string coeff;
  if (fmt == RenderFormat::plain) {
    coeff = mag.get_str();
  } else if (mag.get_den() == 1) {
    coeff = mag.get_num().get_str();
  } else {
    coeff = "\\frac{" + mag.get_num().get_str() + "}{" + mag.get_den().get_str() + "}";
  }
  const char* sep = fmt == RenderFormat::plain ? "*" : " ";
  std::string out;
  if (factors.empty() || mag != 1) out = coeff;
  for (const auto& f : factors) {
    if (!out.empty()) out += sep;
    out += f;
  }
  return out;
}

}  // namespace detail

/// Canonical text form. Terms run from highest to lowest in the canonical
/// monomial order, so the output is byte-stable for equal polynomials.
inline std::string render(const DiffPoly& p, RenderFormat fmt = RenderFormat::plain) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [k, c] = *it;
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    out += detail::render_term(k, c, fmt);
    first = false;
  }
  return out;
}

inline std::string render(const FlowPair& f, RenderFormat fmt = RenderFormat::plain) {
  return "(" + render(f.p1, fmt) + ", " + render(f.p2, fmt) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const DiffPoly& p) { return os << render(p); }
inline std::ostream& operator<<(std::ostream& os, const FlowPair& f) { return os << render(f); }

/// Parsed expression tree. Evaluation is separate from parsing so that a
/// syntactically valid Dinv(...) only fails when it is evaluated.
struct Expr {
  enum class Kind { number, parameter, generator, neg, add, sub, mul, div, pow, deriv, antideriv };
  Kind kind;
  std::string text;      // number literal or parameter name
  Generator gen{};       // for generator leaves
  int exponent = 0;      // for pow
  std::size_t offset = 0;
  std::vector<std::unique_ptr<Expr>> args;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : s_(src) {}

  std::unique_ptr<Expr> parse() {
    auto e = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  using Ptr = std::unique_ptr<Expr>;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char ch) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }

  static Ptr node(Expr::Kind k, std::size_t off) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->offset = off;
    return e;
  }
  static Ptr binary(Expr::Kind k, Ptr l, Ptr r, std::size_t off) {
    auto e = node(k, off);
    e->args.push_back(std::move(l));
    e->args.push_back(std::move(r));
    return e;
  }

  Ptr expression() {
    Ptr lhs = term();
    for (;;) {
      skip_ws();
      std::size_t off = pos_;
      if (accept('+'))
        lhs = binary(Expr::Kind::add, std::move(lhs), term(), off);
      else if (accept('-'))
        lhs = binary(Expr::Kind::sub, std::move(lhs), term(), off);
      else
        return lhs;
    }
  }

  Ptr term() {
    Ptr lhs = unary();
    for (;;) {
      skip_ws();
      std::size_t off = pos_;
      if (accept('*'))
        lhs = binary(Expr::Kind::mul, std::move(lhs), unary(), off);
      else if (accept('/'))
        lhs = binary(Expr::Kind::div, std::move(lhs), unary(), off);
      else
        return lhs;
    }
  }

  Ptr unary() {
    skip_ws();
    std::size_t off = pos_;
    if (accept('-')) {
      auto e = node(Expr::Kind::neg, off);
      e->args.push_back(unary());
      return e;
    }
    return power();
  }

  Ptr power() {
    Ptr base = postfix();
    skip_ws();
    std::size_t off = pos_;
    if (!accept('^')) return base;
    auto e = node(Expr::Kind::pow, off);
    e->exponent = signed_integer();
    e->args.push_back(std::move(base));
    return e;
  }

  Ptr postfix() {
    Ptr e = primary();
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      if (e->kind == Expr::Kind::generator) {
        ++e->gen.order;
      } else {
        auto d = node(Expr::Kind::deriv, pos_);
        d->args.push_back(std::move(e));
        e = std::move(d);
      }
      ++pos_;
    }
    return e;
  }

  int signed_integer() {
    skip_ws();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("exponent too large");
    }
    int v = std::stoi(std::string(s_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }

  Ptr primary() {
    skip_ws();
    std::size_t off = pos_;
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto e = node(Expr::Kind::number, off);
      e->text = std::string(s_.substr(start, pos_ - start));
      return e;
    }
    if (ch == '(') {
      ++pos_;
      Ptr e = expression();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "D" || name == "Dinv") {
        auto e = node(name == "D" ? Expr::Kind::deriv : Expr::Kind::antideriv, off);
        expect('(');
        e->args.push_back(expression());
        expect(')');
        return e;
      }
      if (name == "k1" || name == "k2" || name == "u" || name == "v") {
        auto e = node(Expr::Kind::generator, off);
        e->gen.var = name == "k1" ? Var::k1 : name == "k2" ? Var::k2 : name == "u" ? Var::u : Var::v;
        // k1^(m): derivative order. A bare ^ without parenthesis is a power.
        std::size_t save = pos_;
        if (pos_ + 1 < s_.size() && s_[pos_] == '^' && s_[pos_ + 1] == '(') {
          pos_ += 2;
          skip_ws();
          std::size_t digits = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (digits == pos_ || pos_ - digits > 6) {
            pos_ = digits;
            fail("expected derivative order");
          }
          e->gen.order = std::stoi(std::string(s_.substr(digits, pos_ - digits)));
          skip_ws();
          if (pos_ >= s_.size() || s_[pos_] != ')') {
            pos_ = save;
            fail("unterminated derivative order");
          }
          ++pos_;
        }
        return e;
      }
      if (is_known_parameter(name)) {
        auto e = node(Expr::Kind::parameter, off);
        e->text = name;
        return e;
      }
      throw UnknownSymbol(name, off);
    }
    fail("unexpected character '" + std::string(1, ch) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::unique_ptr<Expr> parse_ast(std::string_view text) { return detail::Parser(text).parse(); }

/// Evaluates a parse tree. Division and negative powers require unit divisors.
inline DiffPoly evaluate(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::number: return DiffPoly(Rational(e.text));
    case K::parameter: return param(e.text);
    case K::generator: return DiffPoly::generator(e.gen.var, e.gen.order);
    case K::neg: return -evaluate(*e.args[0]);
    case K::add: return evaluate(*e.args[0]) + evaluate(*e.args[1]);
    case K::sub: return evaluate(*e.args[0]) - evaluate(*e.args[1]);
    case K::mul: return evaluate(*e.args[0]) * evaluate(*e.args[1]);
    case K::div: {
      DiffPoly d = evaluate(*e.args[1]);
      if (d.is_zero()) throw NotInvertible("division by zero");
      return divide(evaluate(*e.args[0]), d);
    }
    case K::pow: {
      DiffPoly base = evaluate(*e.args[0]);
      int n = e.exponent;
      if (n < 0) {
        if (base.is_zero()) throw NotInvertible("negative power of zero");
        base = divide(DiffPoly(1), base);
        n = -n;
      }
      DiffPoly r(1);
      for (int i = 0; i < n; ++i) r *= base;
      return r;
    }
    case K::deriv: return total_derivative(evaluate(*e.args[0]));
    case K::antideriv: return anti_derivative(evaluate(*e.args[0]));
  }
  return {};
}

inline DiffPoly parse_expr(std::string_view text) { return evaluate(*parse_ast(text)); }

namespace detail {
// Splits on a separator that is not nested inside parentheses.
inline std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == sep && depth == 0) {
      parts.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.emplace_back(text.substr(start));
  return parts;
}
}  // namespace detail

/// "p1, p2" -> FlowPair.
inline FlowPair parse_flow(std::string_view text) {
  auto parts = detail::split_top_level(text, ',');
  if (parts.size() != 2) throw SyntaxError("flow pair needs two comma-separated expressions", 0);
  std::size_t second = parts[0].size() + 1;
  DiffPoly p1 = parse_expr(parts[0]);
  try {
    return {p1, parse_expr(parts[1])};
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.message, e.offset + second);
  }
}

}  // namespace nullflow
