#ifndef JETGEOM_EXPR_HPP
#define JETGEOM_EXPR_HPP

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetgeom {

/// Truncated Taylor data of a scalar function at a point: value and all
/// partial derivatives up to order 3. d2 and d3 are stored dense and are
/// symmetric under any permutation of their indices.
struct ScalarJet {
  int dim = 0;
  double value = 0.0;
  std::vector<double> d1;  // dim
  std::vector<double> d2;  // dim*dim
  std::vector<double> d3;  // dim*dim*dim

  ScalarJet() = default;
  explicit ScalarJet(int n)
      : dim(n), d1(n, 0.0), d2(std::size_t(n) * n, 0.0),
        d3(std::size_t(n) * n * n, 0.0) {}

  double first(int i) const { return d1[std::size_t(i)]; }
  double second(int i, int j) const { return d2[std::size_t(i) * dim + j]; }
  double third(int i, int j, int k) const {
    return d3[(std::size_t(i) * dim + j) * dim + k];
  }
  double& first(int i) { return d1[std::size_t(i)]; }
  double& second(int i, int j) { return d2[std::size_t(i) * dim + j]; }
  double& third(int i, int j, int k) {
    return d3[(std::size_t(i) * dim + j) * dim + k];
  }
};

struct ParseError : std::runtime_error {
  std::size_t offset;  // byte offset into the source text
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"),
        offset(off) {}
};

struct DomainError : std::runtime_error {
  std::string subexpr;  // offending subexpression, printed
  DomainError(const std::string& msg, std::string sub)
      : std::runtime_error(msg + " in '" + sub + "'"), subexpr(std::move(sub)) {}
  struct preformatted {};
  DomainError(preformatted, const std::string& full, std::string sub)
      : std::runtime_error(full), subexpr(std::move(sub)) {}
};

enum class UnaryFn { Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Fn };
  Kind kind;
  double number = 0.0;  // Kind::Number
  int var = -1;         // Kind::Var, 0-based
  UnaryFn fn{};         // Kind::Fn
  ExprPtr a, b;
};

/// A closed-form coordinate expression over x1..xn. Immutable and freely
/// shareable across threads; evaluation is pure.
///
/// Grammar (infix, '^' right-associative, function application tightest):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' factor)?
///   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
/// Identifiers are x1..xn and exp, log, sin, cos, tan, sinh, cosh, tanh,
/// sqrt. abs is rejected: it is not smooth.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  static ScalarExpr parse(std::string_view src, int dim);
  static ScalarExpr number(double v, int dim);
  static ScalarExpr var(int index, int dim);  // 0-based index
  static ScalarExpr apply(UnaryFn f, const ScalarExpr& e);
  static ScalarExpr pow(const ScalarExpr& base, const ScalarExpr& expo);
  static ScalarExpr pow(const ScalarExpr& base, double expo);

  bool valid() const { return root_ != nullptr; }
  int dim() const { return dim_; }
  const ExprPtr& node() const { return root_; }
  std::string str() const;

  double value(std::span<const double> p) const;
  ScalarJet jet(std::span<const double> p) const;

  /// Exact symbolic partial derivative with respect to coordinate `var`
  /// (0-based). Used to build derived fields as closed forms.
  ScalarExpr derivative(int var) const;

  /// Pin coordinate `var` to a constant; the variable set keeps its indices.
  ScalarExpr substituted(int var, double v) const;

  /// Re-index variables: old index i becomes var_map[i] in a new chart of
  /// dimension new_dim. var_map[i] < 0 asserts the variable is unused.
  ScalarExpr remapped(std::span<const int> var_map, int new_dim) const;

  bool is_number(double v) const;
  static bool same_tree(const ScalarExpr& x, const ScalarExpr& y);

  friend ScalarExpr operator+(const ScalarExpr& x, const ScalarExpr& y);
  friend ScalarExpr operator-(const ScalarExpr& x, const ScalarExpr& y);
  friend ScalarExpr operator*(const ScalarExpr& x, const ScalarExpr& y);
  friend ScalarExpr operator/(const ScalarExpr& x, const ScalarExpr& y);
  friend ScalarExpr operator-(const ScalarExpr& x);

  ScalarExpr(ExprPtr r, int dim) : root_(std::move(r)), dim_(dim) {}

 private:
  ExprPtr root_;
  int dim_ = 0;
};

inline ScalarExpr operator+(const ScalarExpr& x, double c) {
  return x + ScalarExpr::number(c, x.dim());
}
inline ScalarExpr operator+(double c, const ScalarExpr& x) {
  return ScalarExpr::number(c, x.dim()) + x;
}
inline ScalarExpr operator-(const ScalarExpr& x, double c) {
  return x - ScalarExpr::number(c, x.dim());
}
inline ScalarExpr operator-(double c, const ScalarExpr& x) {
  return ScalarExpr::number(c, x.dim()) - x;
}
inline ScalarExpr operator*(const ScalarExpr& x, double c) {
  return x * ScalarExpr::number(c, x.dim());
}
inline ScalarExpr operator*(double c, const ScalarExpr& x) {
  return ScalarExpr::number(c, x.dim()) * x;
}
inline ScalarExpr operator/(const ScalarExpr& x, double c) {
  return x / ScalarExpr::number(c, x.dim());
}
inline ScalarExpr operator/(double c, const ScalarExpr& x) {
  return ScalarExpr::number(c, x.dim()) / x;
}

inline ScalarExpr exp(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Exp, e); }
inline ScalarExpr log(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Log, e); }
inline ScalarExpr sin(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Sin, e); }
inline ScalarExpr cos(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Cos, e); }
inline ScalarExpr tan(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Tan, e); }
inline ScalarExpr sinh(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Sinh, e); }
inline ScalarExpr cosh(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Cosh, e); }
inline ScalarExpr tanh(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Tanh, e); }
inline ScalarExpr sqrt(const ScalarExpr& e) { return ScalarExpr::apply(UnaryFn::Sqrt, e); }

}  // namespace jetgeom

#endif  // JETGEOM_EXPR_HPP
