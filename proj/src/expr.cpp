#include "uconvex/expr.hpp"

#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

#include "uconvex/error.hpp"
#include "uconvex/format.hpp"

namespace uconvex {

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::vector<Expr> kids;
};

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("expression constants must be finite");
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::var() {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  return Expr(std::move(n));
}

#define UCONVEX_BINARY(name, kind)                  \
  Expr Expr::name(Expr lhs, Expr rhs) {             \
    auto n = std::make_shared<Node>();              \
    n->op = Op::kind;                               \
    n->kids = {std::move(lhs), std::move(rhs)};     \
    return Expr(std::move(n));                      \
  }

UCONVEX_BINARY(add, Add)
UCONVEX_BINARY(sub, Sub)
UCONVEX_BINARY(mul, Mul)
UCONVEX_BINARY(div, Div)
#undef UCONVEX_BINARY

#define UCONVEX_UNARY(name, kind)                   \
  Expr Expr::name(Expr arg) {                       \
    auto n = std::make_shared<Node>();              \
    n->op = Op::kind;                               \
    n->kids = {std::move(arg)};                     \
    return Expr(std::move(n));                      \
  }

UCONVEX_UNARY(exp, Exp)
UCONVEX_UNARY(log, Log)
UCONVEX_UNARY(neg, Neg)
#undef UCONVEX_UNARY

Expr Expr::pow(Expr base, Expr exponent) {
  if (exponent.depends_on_t()) throw InvalidArgument("pow exponent must not depend on t");
  if (!exponent.is_constant()) exponent = constant(eval(exponent, 0.0));
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->kids = {std::move(base), std::move(exponent)};
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, double exponent) { return pow(std::move(base), constant(exponent)); }

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
std::size_t Expr::arity() const noexcept { return node_->kids.size(); }

const Expr& Expr::child(std::size_t i) const {
  if (i >= node_->kids.size()) throw InvalidArgument("expression child index out of range");
  return node_->kids[i];
}

bool Expr::depends_on_t() const noexcept {
  if (op() == Op::Var) return true;
  for (std::size_t i = 0; i < arity(); ++i)
    if (child(i).depends_on_t()) return true;
  return false;
}

std::size_t Expr::node_count() const noexcept {
  std::size_t count = 1;
  for (std::size_t i = 0; i < arity(); ++i) count += child(i).node_count();
  return count;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  if (a.op() == Op::Const) return a.value() == b.value();
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Expr& e) {
  switch (e.op()) {
    case Op::Const: {
      const double v = e.value();
      if (std::signbit(v)) return "(-" + format_double(-v) + ")";
      return format_double(v);
    }
    case Op::Var:
      return "t";
    case Op::Add:
      return "(" + to_string(e.child(0)) + " + " + to_string(e.child(1)) + ")";
    case Op::Sub:
      return "(" + to_string(e.child(0)) + " - " + to_string(e.child(1)) + ")";
    case Op::Mul:
      return "(" + to_string(e.child(0)) + " * " + to_string(e.child(1)) + ")";
    case Op::Div:
      return "(" + to_string(e.child(0)) + " / " + to_string(e.child(1)) + ")";
    case Op::Pow:
      return "(" + to_string(e.child(0)) + "^" + to_string(e.child(1)) + ")";
    case Op::Exp:
      return "exp(" + to_string(e.child(0)) + ")";
    case Op::Log:
      return "log(" + to_string(e.child(0)) + ")";
    case Op::Neg:
      // A bare literal would fold back into a negative constant on reparse.
      if (e.child(0).is_constant()) return "(-(" + to_string(e.child(0)) + "))";
      return "(-" + to_string(e.child(0)) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const Expr& e, double t, const char* why) {
  throw DomainError(std::string(why) + " in '" + to_string(e) + "' at t = " + format_double(t));
}

}  // namespace

double eval(const Expr& e, double t) {
  double r = 0.0;
  switch (e.op()) {
    case Op::Const:
      return e.value();
    case Op::Var:
      return t;
    case Op::Add:
      r = eval(e.child(0), t) + eval(e.child(1), t);
      break;
    case Op::Sub:
      r = eval(e.child(0), t) - eval(e.child(1), t);
      break;
    case Op::Mul:
      r = eval(e.child(0), t) * eval(e.child(1), t);
      break;
    case Op::Div: {
      const double den = eval(e.child(1), t);
      if (den == 0.0) domain_fail(e, t, "division by zero");
      r = eval(e.child(0), t) / den;
      break;
    }
    case Op::Pow: {
      const double base = eval(e.child(0), t);
      const double p = e.child(1).value();
      if (base < 0.0 && std::floor(p) != p) domain_fail(e, t, "negative base with non-integer exponent");
      if (base == 0.0 && p < 0.0) domain_fail(e, t, "zero base with negative exponent");
      r = std::pow(base, p);
      break;
    }
    case Op::Exp:
      r = std::exp(eval(e.child(0), t));
      break;
    case Op::Log: {
      const double arg = eval(e.child(0), t);
      if (!(arg > 0.0)) domain_fail(e, t, "non-positive logarithm argument");
      r = std::log(arg);
      break;
    }
    case Op::Neg:
      r = -eval(e.child(0), t);
      break;
  }
  if (!std::isfinite(r)) domain_fail(e, t, "non-finite value");
  return r;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError(pos_, "expected an expression, found end of input");
    Expr e = expression();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "expected operator or end of input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(pos_, std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::add(lhs, term());
      else if (accept('-'))
        lhs = Expr::sub(lhs, term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::mul(lhs, unary());
      else if (accept('/'))
        lhs = Expr::div(lhs, unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) {
      Expr operand = unary();
      if (operand.is_constant()) return Expr::constant(-operand.value());
      return Expr::neg(operand);
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      Expr exponent = unary();
      if (exponent.depends_on_t()) throw ParseError(at, "non-constant exponent (write exp(g*log(f)) instead)");
      double p = 0.0;
      try {
        p = eval(exponent, 0.0);
      } catch (const DomainError& err) {
        throw ParseError(at, std::string("exponent is not a finite constant: ") + err.what());
      }
      return Expr::pow(base, p);
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError(pos_, "expected a number, 't', 'exp(', 'log(' or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expression();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (is_ident_char(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      const std::string_view id = src_.substr(start, pos_ - start);
      if (id == "t") return Expr::var();
      if (id == "exp" || id == "log") {
        expect('(');
        Expr arg = expression();
        expect(')');
        return id == "exp" ? Expr::exp(arg) : Expr::log(arg);
      }
      throw ParseError(start, "unknown identifier '" + std::string(id) + "'; expected 't', 'exp' or 'log'");
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'; expected a number, 't', 'exp(', 'log(' or '('");
  }

  Expr number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) throw ParseError(pos_, "malformed number");
    if (!std::isfinite(v)) throw ParseError(pos_, "number out of range");
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(v);
  }

  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Simplification

namespace {

bool is_const(const Expr& e, double v) { return e.is_constant() && e.value() == v; }

Expr fold_if_constant(const Expr& e) {
  if (e.is_constant() || e.depends_on_t()) return e;
  try {
    return Expr::constant(eval(e, 0.0));
  } catch (const DomainError&) {
    return e;
  }
}

Expr rebuild(const Expr& e, const Expr& a, const Expr& b) {
  switch (e.op()) {
    case Op::Add: return Expr::add(a, b);
    case Op::Sub: return Expr::sub(a, b);
    case Op::Mul: return Expr::mul(a, b);
    case Op::Div: return Expr::div(a, b);
    case Op::Pow: return Expr::pow(a, b);
    default: return e;
  }
}

}  // namespace

Expr simplify(const Expr& e) {
  if (e.arity() == 0) return e;
  if (e.arity() == 1) {
    Expr a = simplify(e.child(0));
    if (e.op() == Op::Neg && a.op() == Op::Neg) return a.child(0);
    Expr out = e.op() == Op::Exp ? Expr::exp(a) : e.op() == Op::Log ? Expr::log(a) : Expr::neg(a);
    return fold_if_constant(out);
  }
  Expr a = simplify(e.child(0));
  Expr b = simplify(e.child(1));
  switch (e.op()) {
    case Op::Add:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return b;
      break;
    case Op::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return fold_if_constant(Expr::neg(b));
      break;
    case Op::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Div:
      if (is_const(b, 1.0)) return a;
      if (is_const(a, 0.0)) return Expr::constant(0.0);
      break;
    case Op::Pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return Expr::constant(1.0);
      break;
    default:
      break;
  }
  return fold_if_constant(rebuild(e, a, b));
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr d_raw(const Expr& e) {
  using E = Expr;
  switch (e.op()) {
    case Op::Const:
      return E::constant(0.0);
    case Op::Var:
      return E::constant(1.0);
    case Op::Add:
      return E::add(d_raw(e.child(0)), d_raw(e.child(1)));
    case Op::Sub:
      return E::sub(d_raw(e.child(0)), d_raw(e.child(1)));
    case Op::Mul: {
      const Expr& f = e.child(0);
      const Expr& g = e.child(1);
      return E::add(E::mul(d_raw(f), g), E::mul(f, d_raw(g)));
    }
    case Op::Div: {
      const Expr& f = e.child(0);
      const Expr& g = e.child(1);
      return E::div(E::sub(E::mul(d_raw(f), g), E::mul(f, d_raw(g))), E::pow(g, 2.0));
    }
    case Op::Pow: {
      const Expr& f = e.child(0);
      const double p = e.child(1).value();
      return E::mul(E::mul(E::constant(p), E::pow(f, p - 1.0)), d_raw(f));
    }
    case Op::Exp:
      return E::mul(e, d_raw(e.child(0)));
    case Op::Log:
      return E::div(d_raw(e.child(0)), e.child(0));
    case Op::Neg:
      return E::neg(d_raw(e.child(0)));
  }
  return E::constant(0.0);
}

}  // namespace

Expr differentiate(const Expr& e) { return simplify(d_raw(e)); }

}  // namespace uconvex
