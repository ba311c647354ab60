#include "jetgeom/expr.hpp"

#include <array>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace jetgeom {

namespace {

ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprPtr num_node(double v) {
  ExprNode n;
  n.kind = ExprNode::Kind::Number;
  n.number = v;
  return make_node(std::move(n));
}

ExprPtr var_node(int idx) {
  ExprNode n;
  n.kind = ExprNode::Kind::Var;
  n.var = idx;
  return make_node(std::move(n));
}

ExprPtr binary_node(ExprNode::Kind k, ExprPtr a, ExprPtr b) {
  ExprNode n;
  n.kind = k;
  n.a = std::move(a);
  n.b = std::move(b);
  return make_node(std::move(n));
}

ExprPtr neg_node(ExprPtr a) {
  ExprNode n;
  n.kind = ExprNode::Kind::Neg;
  n.a = std::move(a);
  return make_node(std::move(n));
}

ExprPtr fn_node(UnaryFn f, ExprPtr a) {
  ExprNode n;
  n.kind = ExprNode::Kind::Fn;
  n.fn = f;
  n.a = std::move(a);
  return make_node(std::move(n));
}

const char* fn_name(UnaryFn f) {
  switch (f) {
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Tan: return "tan";
    case UnaryFn::Sinh: return "sinh";
    case UnaryFn::Cosh: return "cosh";
    case UnaryFn::Tanh: return "tanh";
    case UnaryFn::Sqrt: return "sqrt";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// parser

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  int dim;

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' ||
                                src[pos] == '\n' || src[pos] == '\r'))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = binary_node(ExprNode::Kind::Add, lhs, parse_term());
      else if (eat('-'))
        lhs = binary_node(ExprNode::Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (eat('*'))
        lhs = binary_node(ExprNode::Kind::Mul, lhs, parse_factor());
      else if (eat('/'))
        lhs = binary_node(ExprNode::Kind::Div, lhs, parse_factor());
      else
        return lhs;
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    if (eat('^')) return binary_node(ExprNode::Kind::Pow, base, parse_factor());
    return base;
  }

  ExprPtr parse_base() {
    skip_ws();
    if (pos >= src.size()) throw ParseError("unexpected end of input", pos);
    char c = src[pos];
    if (c == '-') {
      ++pos;
      return neg_node(parse_base());
    }
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')
      return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr parse_number() {
    double v = 0.0;
    const char* first = src.data() + pos;
    const char* last = src.data() + src.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) throw ParseError("malformed number", pos);
    pos += std::size_t(p - first);
    return num_node(v);
  }

  ExprPtr parse_ident() {
    std::size_t start = pos;
    while (pos < src.size() &&
           ((src[pos] >= 'a' && src[pos] <= 'z') ||
            (src[pos] >= 'A' && src[pos] <= 'Z') ||
            (src[pos] >= '0' && src[pos] <= '9') || src[pos] == '_'))
      ++pos;
    std::string_view name = src.substr(start, pos - start);

    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        if (name[i] < '0' || name[i] > '9') digits = false;
      if (digits) {
        int idx = 0;
        std::from_chars(name.data() + 1, name.data() + name.size(), idx);
        if (idx < 1 || idx > dim)
          throw ParseError("variable index out of range: " + std::string(name) +
                               " in a chart of dimension " + std::to_string(dim),
                           start);
        return var_node(idx - 1);
      }
    }

    static const std::map<std::string_view, UnaryFn> fns = {
        {"exp", UnaryFn::Exp},   {"log", UnaryFn::Log},  {"sin", UnaryFn::Sin},
        {"cos", UnaryFn::Cos},   {"tan", UnaryFn::Tan},  {"sinh", UnaryFn::Sinh},
        {"cosh", UnaryFn::Cosh}, {"tanh", UnaryFn::Tanh}, {"sqrt", UnaryFn::Sqrt}};
    auto it = fns.find(name);
    if (it == fns.end()) {
      if (name == "abs")
        throw ParseError("abs is not smooth and is not supported", start);
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    if (!eat('('))
      throw ParseError("expected '(' after function name", pos);
    ExprPtr arg = parse_expr();
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return fn_node(it->second, arg);
  }
};

// ---------------------------------------------------------------------------
// printing; precedence levels: add 1, mul 2, pow 3, atoms 4

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Add:
    case ExprNode::Kind::Sub: return 1;
    case ExprNode::Kind::Mul:
    case ExprNode::Kind::Div: return 2;
    case ExprNode::Kind::Pow: return 3;
    default: return 4;  // Number, Var, Fn, Neg print as base-level tokens
  }
}

std::string number_str(double v) {
  std::array<char, 64> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), p);
}

void print_node(const ExprNode& n, std::string& out) {
  auto child = [&out](const ExprPtr& c, int min_prec) {
    bool paren = precedence(*c) < min_prec;
    if (paren) out += '(';
    print_node(*c, out);
    if (paren) out += ')';
  };
  switch (n.kind) {
    case ExprNode::Kind::Number: out += number_str(n.number); break;
    case ExprNode::Kind::Var: out += "x" + std::to_string(n.var + 1); break;
    case ExprNode::Kind::Add:
      child(n.a, 1); out += " + "; child(n.b, 2);
      break;
    case ExprNode::Kind::Sub:
      // rhs needs strictly higher precedence: a - (b + c) vs a - b + c
      child(n.a, 1); out += " - "; child(n.b, 2);
      break;
    case ExprNode::Kind::Mul:
      child(n.a, 2); out += "*"; child(n.b, 3);
      break;
    case ExprNode::Kind::Div:
      child(n.a, 2); out += "/"; child(n.b, 3);
      break;
    case ExprNode::Kind::Pow:
      // '^' is right-associative and its left operand is a base
      child(n.a, 4); out += "^"; child(n.b, 3);
      break;
    case ExprNode::Kind::Neg:
      out += '-';
      child(n.a, 4);
      break;
    case ExprNode::Kind::Fn:
      out += fn_name(n.fn);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      break;
  }
}

// ---------------------------------------------------------------------------
// jet arithmetic: explicit order-3 Taylor composition rules

ScalarJet jet_add(const ScalarJet& x, const ScalarJet& y, double sy) {
  ScalarJet r(x.dim);
  r.value = x.value + sy * y.value;
  for (std::size_t i = 0; i < r.d1.size(); ++i) r.d1[i] = x.d1[i] + sy * y.d1[i];
  for (std::size_t i = 0; i < r.d2.size(); ++i) r.d2[i] = x.d2[i] + sy * y.d2[i];
  for (std::size_t i = 0; i < r.d3.size(); ++i) r.d3[i] = x.d3[i] + sy * y.d3[i];
  return r;
}

ScalarJet jet_neg(const ScalarJet& x) {
  ScalarJet r(x.dim);
  r.value = -x.value;
  for (std::size_t i = 0; i < r.d1.size(); ++i) r.d1[i] = -x.d1[i];
  for (std::size_t i = 0; i < r.d2.size(); ++i) r.d2[i] = -x.d2[i];
  for (std::size_t i = 0; i < r.d3.size(); ++i) r.d3[i] = -x.d3[i];
  return r;
}

// write one value into every permutation of (i,j,k); keeps d3 exactly
// symmetric under index permutations
void fill3(ScalarJet& r, int i, int j, int k, double v) {
  r.third(i, j, k) = r.third(i, k, j) = r.third(j, i, k) = r.third(j, k, i) =
      r.third(k, i, j) = r.third(k, j, i) = v;
}

ScalarJet jet_mul(const ScalarJet& x, const ScalarJet& y) {
  const int n = x.dim;
  ScalarJet r(n);
  r.value = x.value * y.value;
  for (int i = 0; i < n; ++i)
    r.first(i) = x.first(i) * y.value + x.value * y.first(i);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      r.second(i, j) = r.second(j, i) =
          x.second(i, j) * y.value + x.first(i) * y.first(j) +
          x.first(j) * y.first(i) + x.value * y.second(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        fill3(r, i, j, k,
              x.third(i, j, k) * y.value + x.second(i, j) * y.first(k) +
                  x.second(i, k) * y.first(j) + x.second(j, k) * y.first(i) +
                  x.first(i) * y.second(j, k) + x.first(j) * y.second(i, k) +
                  x.first(k) * y.second(i, j) + x.value * y.third(i, j, k));
  return r;
}

// compose a univariate f (derivatives f0..f3 at u.value) with the jet u
ScalarJet jet_compose(const ScalarJet& u, double f0, double f1, double f2,
                      double f3) {
  const int n = u.dim;
  ScalarJet r(n);
  r.value = f0;
  for (int i = 0; i < n; ++i) r.first(i) = f1 * u.first(i);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      r.second(i, j) = r.second(j, i) =
          f2 * u.first(i) * u.first(j) + f1 * u.second(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        fill3(r, i, j, k,
              f3 * u.first(i) * u.first(j) * u.first(k) +
                  f2 * (u.second(i, j) * u.first(k) +
                        u.second(i, k) * u.first(j) +
                        u.second(j, k) * u.first(i)) +
                  f1 * u.third(i, j, k));
  return r;
}

ScalarJet jet_recip(const ScalarJet& u, const ExprNode& where) {
  if (u.value == 0.0) {
    std::string s;
    print_node(where, s);
    throw DomainError("division by zero", s);
  }
  const double iv = 1.0 / u.value;
  return jet_compose(u, iv, -iv * iv, 2.0 * iv * iv * iv,
                     -6.0 * iv * iv * iv * iv);
}

ScalarJet jet_int_pow(const ScalarJet& u, long k, const ExprNode& where) {
  if (k == 0) {
    ScalarJet r(u.dim);
    r.value = 1.0;
    return r;
  }
  if (k < 0) return jet_recip(jet_int_pow(u, -k, where), where);
  ScalarJet r = u;
  for (long i = 1; i < k; ++i) r = jet_mul(r, u);
  return r;
}

bool integer_literal(const ExprNode& e, long& out) {
  const ExprNode* p = &e;
  double sign = 1.0;
  if (p->kind == ExprNode::Kind::Neg && p->a->kind == ExprNode::Kind::Number) {
    sign = -1.0;
    p = p->a.get();
  }
  if (p->kind != ExprNode::Kind::Number) return false;
  double v = sign * p->number;
  if (v != std::floor(v) || std::abs(v) > 64.0) return false;
  out = long(v);
  return true;
}

ScalarJet eval_node(const ExprNode& e, std::span<const double> p);

ScalarJet eval_fn(const ExprNode& e, std::span<const double> p) {
  ScalarJet u = eval_node(*e.a, p);
  const double v = u.value;
  auto bad = [&](const char* msg) {
    std::string s;
    print_node(e, s);
    return DomainError(msg, s);
  };
  switch (e.fn) {
    case UnaryFn::Exp: {
      double ev = std::exp(v);
      return jet_compose(u, ev, ev, ev, ev);
    }
    case UnaryFn::Log: {
      if (v <= 0.0) throw bad("log of a non-positive value");
      double iv = 1.0 / v;
      return jet_compose(u, std::log(v), iv, -iv * iv, 2.0 * iv * iv * iv);
    }
    case UnaryFn::Sin:
      return jet_compose(u, std::sin(v), std::cos(v), -std::sin(v), -std::cos(v));
    case UnaryFn::Cos:
      return jet_compose(u, std::cos(v), -std::sin(v), -std::cos(v), std::sin(v));
    case UnaryFn::Tan: {
      double t = std::tan(v), s = 1.0 + t * t;
      return jet_compose(u, t, s, 2.0 * t * s, s * (2.0 + 6.0 * t * t));
    }
    case UnaryFn::Sinh:
      return jet_compose(u, std::sinh(v), std::cosh(v), std::sinh(v), std::cosh(v));
    case UnaryFn::Cosh:
      return jet_compose(u, std::cosh(v), std::sinh(v), std::cosh(v), std::sinh(v));
    case UnaryFn::Tanh: {
      double t = std::tanh(v), s = 1.0 - t * t;
      return jet_compose(u, t, s, -2.0 * t * s, -2.0 * s * (s - 2.0 * t * t));
    }
    case UnaryFn::Sqrt: {
      if (v <= 0.0) throw bad("sqrt of a non-positive value");
      double r = std::sqrt(v);
      return jet_compose(u, r, 0.5 / r, -0.25 / (v * r), 0.375 / (v * v * r));
    }
  }
  throw bad("unreachable");
}

ScalarJet eval_node(const ExprNode& e, std::span<const double> p) {
  const int n = int(p.size());
  switch (e.kind) {
    case ExprNode::Kind::Number: {
      ScalarJet r(n);
      r.value = e.number;
      return r;
    }
    case ExprNode::Kind::Var: {
      ScalarJet r(n);
      r.value = p[std::size_t(e.var)];
      r.first(e.var) = 1.0;
      return r;
    }
    case ExprNode::Kind::Add:
      return jet_add(eval_node(*e.a, p), eval_node(*e.b, p), 1.0);
    case ExprNode::Kind::Sub:
      return jet_add(eval_node(*e.a, p), eval_node(*e.b, p), -1.0);
    case ExprNode::Kind::Mul:
      return jet_mul(eval_node(*e.a, p), eval_node(*e.b, p));
    case ExprNode::Kind::Div:
      return jet_mul(eval_node(*e.a, p), jet_recip(eval_node(*e.b, p), *e.b));
    case ExprNode::Kind::Neg:
      return jet_neg(eval_node(*e.a, p));
    case ExprNode::Kind::Fn:
      return eval_fn(e, p);
    case ExprNode::Kind::Pow: {
      long k = 0;
      ScalarJet base = eval_node(*e.a, p);
      if (integer_literal(*e.b, k)) return jet_int_pow(base, k, e);
      if (e.b->kind == ExprNode::Kind::Number) {
        // real constant exponent: power rule, base must be positive
        const double c = e.b->number;
        if (base.value <= 0.0) {
          std::string s;
          print_node(e, s);
          throw DomainError("power of a non-positive base", s);
        }
        double f0 = std::pow(base.value, c);
        double f1 = c * std::pow(base.value, c - 1.0);
        double f2 = c * (c - 1.0) * std::pow(base.value, c - 2.0);
        double f3 = c * (c - 1.0) * (c - 2.0) * std::pow(base.value, c - 3.0);
        return jet_compose(base, f0, f1, f2, f3);
      }
      // general exponent: a^b = exp(b*log(a)), a > 0
      if (base.value <= 0.0) {
        std::string s;
        print_node(e, s);
        throw DomainError("power of a non-positive base", s);
      }
      double v = base.value, iv = 1.0 / v;
      ScalarJet lg =
          jet_compose(base, std::log(v), iv, -iv * iv, 2.0 * iv * iv * iv);
      ScalarJet prod = jet_mul(eval_node(*e.b, p), lg);
      double ev = std::exp(prod.value);
      return jet_compose(prod, ev, ev, ev, ev);
    }
  }
  throw std::logic_error("bad expression node");
}

double value_node(const ExprNode& e, std::span<const double> p) {
  auto bad = [&](const char* msg) {
    std::string s;
    print_node(e, s);
    return DomainError(msg, s);
  };
  switch (e.kind) {
    case ExprNode::Kind::Number: return e.number;
    case ExprNode::Kind::Var: return p[std::size_t(e.var)];
    case ExprNode::Kind::Add: return value_node(*e.a, p) + value_node(*e.b, p);
    case ExprNode::Kind::Sub: return value_node(*e.a, p) - value_node(*e.b, p);
    case ExprNode::Kind::Mul: return value_node(*e.a, p) * value_node(*e.b, p);
    case ExprNode::Kind::Div: {
      double d = value_node(*e.b, p);
      if (d == 0.0) {
        std::string s;
        print_node(*e.b, s);
        throw DomainError("division by zero", s);
      }
      return value_node(*e.a, p) / d;
    }
    case ExprNode::Kind::Neg: return -value_node(*e.a, p);
    case ExprNode::Kind::Pow: {
      double a = value_node(*e.a, p);
      long k = 0;
      if (integer_literal(*e.b, k)) return std::pow(a, double(k));
      if (a <= 0.0) throw bad("power of a non-positive base");
      return std::pow(a, value_node(*e.b, p));
    }
    case ExprNode::Kind::Fn: {
      double a = value_node(*e.a, p);
      switch (e.fn) {
        case UnaryFn::Exp: return std::exp(a);
        case UnaryFn::Log:
          if (a <= 0.0) throw bad("log of a non-positive value");
          return std::log(a);
        case UnaryFn::Sin: return std::sin(a);
        case UnaryFn::Cos: return std::cos(a);
        case UnaryFn::Tan: return std::tan(a);
        case UnaryFn::Sinh: return std::sinh(a);
        case UnaryFn::Cosh: return std::cosh(a);
        case UnaryFn::Tanh: return std::tanh(a);
        case UnaryFn::Sqrt:
          if (a <= 0.0) throw bad("sqrt of a non-positive value");
          return std::sqrt(a);
      }
      throw bad("unreachable");
    }
  }
  throw std::logic_error("bad expression node");
}

// ---------------------------------------------------------------------------
// symbolic derivative (builder-level constant folding keeps trees small)

bool is_num(const ExprPtr& e, double v) {
  return e->kind == ExprNode::Kind::Number && e->number == v;
}

ExprPtr fold_add(ExprPtr a, ExprPtr b) {
  if (is_num(a, 0.0)) return b;
  if (is_num(b, 0.0)) return a;
  return binary_node(ExprNode::Kind::Add, std::move(a), std::move(b));
}
ExprPtr fold_sub(ExprPtr a, ExprPtr b) {
  if (is_num(b, 0.0)) return a;
  if (is_num(a, 0.0)) return neg_node(std::move(b));
  return binary_node(ExprNode::Kind::Sub, std::move(a), std::move(b));
}
ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
  if (is_num(a, 0.0) || is_num(b, 0.0)) return num_node(0.0);
  if (is_num(a, 1.0)) return b;
  if (is_num(b, 1.0)) return a;
  return binary_node(ExprNode::Kind::Mul, std::move(a), std::move(b));
}
ExprPtr fold_div(ExprPtr a, ExprPtr b) {
  if (is_num(a, 0.0)) return num_node(0.0);
  if (is_num(b, 1.0)) return a;
  return binary_node(ExprNode::Kind::Div, std::move(a), std::move(b));
}

ExprPtr diff_node(const ExprPtr& e, int var) {
  switch (e->kind) {
    case ExprNode::Kind::Number: return num_node(0.0);
    case ExprNode::Kind::Var: return num_node(e->var == var ? 1.0 : 0.0);
    case ExprNode::Kind::Add:
      return fold_add(diff_node(e->a, var), diff_node(e->b, var));
    case ExprNode::Kind::Sub:
      return fold_sub(diff_node(e->a, var), diff_node(e->b, var));
    case ExprNode::Kind::Mul:
      return fold_add(fold_mul(diff_node(e->a, var), e->b),
                      fold_mul(e->a, diff_node(e->b, var)));
    case ExprNode::Kind::Div:
      return fold_div(
          fold_sub(fold_mul(diff_node(e->a, var), e->b),
                   fold_mul(e->a, diff_node(e->b, var))),
          binary_node(ExprNode::Kind::Mul, e->b, e->b));
    case ExprNode::Kind::Neg: {
      ExprPtr d = diff_node(e->a, var);
      if (is_num(d, 0.0)) return d;
      return neg_node(std::move(d));
    }
    case ExprNode::Kind::Pow: {
      long k = 0;
      if (integer_literal(*e->b, k)) {
        if (k == 0) return num_node(0.0);
        ExprPtr da = diff_node(e->a, var);
        if (is_num(da, 0.0)) return da;
        ExprPtr p = k == 2 ? e->a
                           : binary_node(ExprNode::Kind::Pow, e->a,
                                         num_node(double(k - 1)));
        if (k == 1) return da;
        return fold_mul(fold_mul(num_node(double(k)), std::move(p)),
                        std::move(da));
      }
      // a^b -> a^b * (b' log a + b a'/a)
      ExprPtr da = diff_node(e->a, var);
      ExprPtr db = diff_node(e->b, var);
      ExprPtr t1 = fold_mul(db, fn_node(UnaryFn::Log, e->a));
      ExprPtr t2 = fold_div(fold_mul(e->b, da), e->a);
      return fold_mul(e, fold_add(std::move(t1), std::move(t2)));
    }
    case ExprNode::Kind::Fn: {
      ExprPtr da = diff_node(e->a, var);
      if (is_num(da, 0.0)) return da;
      ExprPtr outer;
      switch (e->fn) {
        case UnaryFn::Exp: outer = e; break;
        case UnaryFn::Log: return fold_div(std::move(da), e->a);
        case UnaryFn::Sin: outer = fn_node(UnaryFn::Cos, e->a); break;
        case UnaryFn::Cos:
          outer = neg_node(fn_node(UnaryFn::Sin, e->a));
          break;
        case UnaryFn::Tan:
          outer = fold_add(num_node(1.0),
                           binary_node(ExprNode::Kind::Pow, e, num_node(2.0)));
          break;
        case UnaryFn::Sinh: outer = fn_node(UnaryFn::Cosh, e->a); break;
        case UnaryFn::Cosh: outer = fn_node(UnaryFn::Sinh, e->a); break;
        case UnaryFn::Tanh:
          outer = fold_sub(num_node(1.0),
                           binary_node(ExprNode::Kind::Pow, e, num_node(2.0)));
          break;
        case UnaryFn::Sqrt:
          return fold_div(std::move(da), fold_mul(num_node(2.0), e));
      }
      return fold_mul(std::move(outer), std::move(da));
    }
  }
  throw std::logic_error("bad expression node");
}

ExprPtr substitute_node(const ExprPtr& e, int var, double v) {
  switch (e->kind) {
    case ExprNode::Kind::Number: return e;
    case ExprNode::Kind::Var: return e->var == var ? num_node(v) : e;
    default: {
      ExprNode n = *e;
      if (n.a) n.a = substitute_node(e->a, var, v);
      if (n.b) n.b = substitute_node(e->b, var, v);
      return make_node(std::move(n));
    }
  }
}

ExprPtr remap_node(const ExprPtr& e, std::span<const int> var_map) {
  switch (e->kind) {
    case ExprNode::Kind::Number: return e;
    case ExprNode::Kind::Var: {
      int nv = var_map[std::size_t(e->var)];
      if (nv < 0) throw std::invalid_argument("remapped(): variable still in use");
      return var_node(nv);
    }
    default: {
      ExprNode n = *e;
      if (n.a) n.a = remap_node(e->a, var_map);
      if (n.b) n.b = remap_node(e->b, var_map);
      return make_node(std::move(n));
    }
  }
}

bool same_node(const ExprNode& x, const ExprNode& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprNode::Kind::Number: return x.number == y.number;
    case ExprNode::Kind::Var: return x.var == y.var;
    case ExprNode::Kind::Fn:
      if (x.fn != y.fn) return false;
      return same_node(*x.a, *y.a);
    case ExprNode::Kind::Neg: return same_node(*x.a, *y.a);
    default:
      return same_node(*x.a, *y.a) && same_node(*x.b, *y.b);
  }
}

void check_dims(const ScalarExpr& x, const ScalarExpr& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("mixing expressions of different chart dimension");
}

[[noreturn]] void rethrow_with_point(const DomainError& err,
                                     std::span<const double> p) {
  std::string msg = err.what();
  msg += " at point (";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) msg += ", ";
    msg += number_str(p[i]);
  }
  msg += ")";
  throw DomainError(DomainError::preformatted{}, msg, err.subexpr);
}

}  // namespace

// ---------------------------------------------------------------------------

ScalarExpr ScalarExpr::parse(std::string_view src, int dim) {
  if (dim < 1) throw std::invalid_argument("parse(): dimension must be >= 1");
  bool blank = true;
  for (char c : src)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') blank = false;
  if (blank) throw ParseError("empty expression", 0);
  Parser ps{src, 0, dim};
  ExprPtr root = ps.parse_expr();
  ps.skip_ws();
  if (ps.pos != src.size())
    throw ParseError("unexpected trailing input", ps.pos);
  return ScalarExpr(std::move(root), dim);
}

ScalarExpr ScalarExpr::number(double v, int dim) {
  return ScalarExpr(num_node(v), dim);
}

ScalarExpr ScalarExpr::var(int index, int dim) {
  if (index < 0 || index >= dim)
    throw std::invalid_argument("var(): index out of range");
  return ScalarExpr(var_node(index), dim);
}

ScalarExpr ScalarExpr::apply(UnaryFn f, const ScalarExpr& e) {
  return ScalarExpr(fn_node(f, e.node()), e.dim());
}

ScalarExpr ScalarExpr::pow(const ScalarExpr& base, const ScalarExpr& expo) {
  check_dims(base, expo);
  return ScalarExpr(binary_node(ExprNode::Kind::Pow, base.node(), expo.node()),
                    base.dim());
}

ScalarExpr ScalarExpr::pow(const ScalarExpr& base, double expo) {
  return pow(base, ScalarExpr::number(expo, base.dim()));
}

std::string ScalarExpr::str() const {
  if (!root_) return "<empty>";
  std::string out;
  print_node(*root_, out);
  return out;
}

double ScalarExpr::value(std::span<const double> p) const {
  if (int(p.size()) != dim_)
    throw std::invalid_argument("value(): point dimension mismatch");
  try {
    double v = value_node(*root_, p);
    if (!std::isfinite(v)) throw DomainError("non-finite value", str());
    return v;
  } catch (const DomainError& err) {
    rethrow_with_point(err, p);
  }
}

ScalarJet ScalarExpr::jet(std::span<const double> p) const {
  if (int(p.size()) != dim_)
    throw std::invalid_argument("jet(): point dimension mismatch");
  try {
    ScalarJet j = eval_node(*root_, p);
    if (!std::isfinite(j.value)) throw DomainError("non-finite value", str());
    return j;
  } catch (const DomainError& err) {
    rethrow_with_point(err, p);
  }
}

ScalarExpr ScalarExpr::derivative(int var) const {
  if (var < 0 || var >= dim_)
    throw std::invalid_argument("derivative(): index out of range");
  return ScalarExpr(diff_node(root_, var), dim_);
}

ScalarExpr ScalarExpr::substituted(int var, double v) const {
  return ScalarExpr(substitute_node(root_, var, v), dim_);
}

ScalarExpr ScalarExpr::remapped(std::span<const int> var_map, int new_dim) const {
  if (int(var_map.size()) != dim_)
    throw std::invalid_argument("remapped(): map size mismatch");
  return ScalarExpr(remap_node(root_, var_map), new_dim);
}

bool ScalarExpr::is_number(double v) const {
  return root_ && root_->kind == ExprNode::Kind::Number && root_->number == v;
}

bool ScalarExpr::same_tree(const ScalarExpr& x, const ScalarExpr& y) {
  if (!x.root_ || !y.root_) return x.root_ == y.root_;
  if (x.root_ == y.root_) return true;
  return same_node(*x.root_, *y.root_);
}

ScalarExpr operator+(const ScalarExpr& x, const ScalarExpr& y) {
  check_dims(x, y);
  return ScalarExpr(fold_add(x.node(), y.node()), x.dim());
}
ScalarExpr operator-(const ScalarExpr& x, const ScalarExpr& y) {
  check_dims(x, y);
  return ScalarExpr(fold_sub(x.node(), y.node()), x.dim());
}
ScalarExpr operator*(const ScalarExpr& x, const ScalarExpr& y) {
  check_dims(x, y);
  return ScalarExpr(fold_mul(x.node(), y.node()), x.dim());
}
ScalarExpr operator/(const ScalarExpr& x, const ScalarExpr& y) {
  check_dims(x, y);
  return ScalarExpr(fold_div(x.node(), y.node()), x.dim());
}
ScalarExpr operator-(const ScalarExpr& x) {
  if (x.node()->kind == ExprNode::Kind::Number)
    return ScalarExpr::number(-x.node()->number, x.dim());
  return ScalarExpr(neg_node(x.node()), x.dim());
}

}  // namespace jetgeom
