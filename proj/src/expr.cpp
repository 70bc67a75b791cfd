#include "rdd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace rdd {

namespace {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Abs, Min, Max };
enum class Var { X, Z, T, U, Ustar };

} // namespace

struct Expression::Node {
  Op op = Op::Const;
  double value = 0;
  Var var = Var::X;
  std::unique_ptr<Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    auto n = sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at column " + std::to_string(pos_ + 1) +
                                ": " + what + " in \"" + text_ + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr sum() {
    auto lhs = product();
    for (;;) {
      if (consume('+'))
        lhs = make(Op::Add, std::move(lhs), product());
      else if (consume('-'))
        lhs = make(Op::Sub, std::move(lhs), product());
      else
        return lhs;
    }
  }

  NodePtr product() {
    auto lhs = unary();
    for (;;) {
      if (consume('*'))
        lhs = make(Op::Mul, std::move(lhs), unary());
      else if (consume('/'))
        lhs = make(Op::Div, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (consume('-')) return make(Op::Neg, unary());
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (consume('^')) return make(Op::Pow, std::move(base), unary()); // right-associative
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = sum();
      if (!consume(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = make(Op::Const);
    n->value = v;
    return n;
  }

  NodePtr variable(Var v) {
    auto n = make(Op::Var);
    n->var = v;
    return n;
  }

  NodePtr constant(double v) {
    auto n = make(Op::Const);
    n->value = v;
    return n;
  }

  NodePtr call(Op op, int arity) {
    if (!consume('(')) fail("expected '(' after function name");
    auto a = sum();
    if (arity == 1) {
      if (!consume(')')) fail("expected ')'");
      return make(op, std::move(a));
    }
    if (!consume(',')) fail("expected ','");
    auto b = sum();
    if (!consume(')')) fail("expected ')'");
    return make(op, std::move(a), std::move(b));
  }

  NodePtr name() {
    std::size_t end = pos_;
    while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                  text_[end] == '_'))
      ++end;
    const std::string id = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (id == "x") return variable(Var::X);
    if (id == "z") return variable(Var::Z);
    if (id == "t") return variable(Var::T);
    if (id == "u") return variable(Var::U);
    if (id == "ustar") return variable(Var::Ustar);
    if (id == "pi") return constant(3.14159265358979323846);
    if (id == "sin") return call(Op::Sin, 1);
    if (id == "cos") return call(Op::Cos, 1);
    if (id == "exp") return call(Op::Exp, 1);
    if (id == "sqrt") return call(Op::Sqrt, 1);
    if (id == "abs") return call(Op::Abs, 1);
    if (id == "min") return call(Op::Min, 2);
    if (id == "max") return call(Op::Max, 2);
    pos_ -= id.size();
    fail("unknown identifier '" + id + "'");
  }
};

double eval_node(const Node& n, const ExprEnv& env) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      switch (n.var) {
        case Var::X: return env.x;
        case Var::Z: return env.z;
        case Var::T: return env.t;
        case Var::U: return env.u;
        case Var::Ustar: return env.ustar;
      }
      return 0;
    case Op::Neg: return -eval_node(*n.lhs, env);
    case Op::Add: return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
    case Op::Sub: return eval_node(*n.lhs, env) - eval_node(*n.rhs, env);
    case Op::Mul: return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
    case Op::Div: return eval_node(*n.lhs, env) / eval_node(*n.rhs, env);
    case Op::Pow: return std::pow(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
    case Op::Sin: return std::sin(eval_node(*n.lhs, env));
    case Op::Cos: return std::cos(eval_node(*n.lhs, env));
    case Op::Exp: return std::exp(eval_node(*n.lhs, env));
    case Op::Sqrt: return std::sqrt(eval_node(*n.lhs, env));
    case Op::Abs: return std::abs(eval_node(*n.lhs, env));
    case Op::Min: return std::min(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
    case Op::Max: return std::max(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
  }
  return 0;
}

} // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text).parse()) {}
Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::eval(const ExprEnv& env) const { return eval_node(*root_, env); }

} // namespace rdd
