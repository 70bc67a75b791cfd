#pragma once

#include <memory>
#include <string>

namespace rdd {

/// Variables an expression may reference. `ustar` and `pi` are bound by the
/// caller (ustar = 0 when no constitutive table is in play).
struct ExprEnv {
  double x = 0, z = 0, t = 0, u = 0;
  double ustar = 0;
};

/// A parsed arithmetic expression over x, z, t, u, ustar and pi with
/// + - * / ^, unary minus, parentheses and the functions
/// sin cos exp sqrt abs min max. Parse errors throw std::invalid_argument
/// with a column pointer.
class Expression {
 public:
  explicit Expression(const std::string& text);
  ~Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  Expression(const Expression&) = delete;
  Expression& operator=(const Expression&) = delete;

  double eval(const ExprEnv& env) const;
  const std::string& text() const { return text_; }

  struct Node; // exposed for the implementation file only

 private:
  std::string text_;
  std::unique_ptr<Node> root_;
};

} // namespace rdd
