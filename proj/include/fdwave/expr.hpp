#ifndef FDWAVE_EXPR_HPP
#define FDWAVE_EXPR_HPP

// Closed-form expressions in x, y, t for user-supplied problem files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?            right associative
//   primary := number | name | call | '(' expr ')'
//   call    := ('sin' | 'cos' | 'exp' | 'sqrt' | 'gamma') '(' expr ')'
//
// Names are the variables x, y, t, the constants pi and e, and any named
// parameter supplied at parse time (alpha for problem files). gamma() only
// accepts constant arguments and is folded at parse time.

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fdwave/errors.hpp"

namespace fdwave {

class Expression {
public:
  using Params = std::map<std::string, double>;

  Expression() : Expression(constant(0.0)) {}

  static Expression parse(const std::string& text, const Params& params = {}) {
    Parser p(text, params);
    return Expression(p.parse_all());
  }

  double operator()(double x, double y, double t) const {
    const double vars[3] = {x, y, t};
    return eval(*root_, vars);
  }

  bool is_constant() const { return !uses_vars(*root_); }

private:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt };

  struct Node {
    Op op = Op::Const;
    double value = 0.0;  // Const
    int var = 0;         // Var: 0 = x, 1 = y, 2 = t
    std::shared_ptr<const Node> lhs, rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  static NodePtr constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
  }
  static NodePtr make(Op op, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    // Fold constant subtrees.
    if (!uses_vars(*n)) {
      const double vars[3] = {0.0, 0.0, 0.0};
      return constant(eval(*n, vars));
    }
    return n;
  }

  static bool uses_vars(const Node& n) {
    if (n.op == Op::Var)
      return true;
    return (n.lhs && uses_vars(*n.lhs)) || (n.rhs && uses_vars(*n.rhs));
  }

  static double eval(const Node& n, const double* vars) {
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return vars[n.var];
    case Op::Neg: return -eval(*n.lhs, vars);
    case Op::Add: return eval(*n.lhs, vars) + eval(*n.rhs, vars);
    case Op::Sub: return eval(*n.lhs, vars) - eval(*n.rhs, vars);
    case Op::Mul: return eval(*n.lhs, vars) * eval(*n.rhs, vars);
    case Op::Div: return eval(*n.lhs, vars) / eval(*n.rhs, vars);
    case Op::Pow: return std::pow(eval(*n.lhs, vars), eval(*n.rhs, vars));
    case Op::Sin: return std::sin(eval(*n.lhs, vars));
    case Op::Cos: return std::cos(eval(*n.lhs, vars));
    case Op::Exp: return std::exp(eval(*n.lhs, vars));
    case Op::Sqrt: return std::sqrt(eval(*n.lhs, vars));
    }
    return 0.0;
  }

  class Parser {
  public:
    Parser(const std::string& text, const Params& params)
        : s_(text), params_(params) {}

    NodePtr parse_all() {
      NodePtr n = expr();
      skip();
      if (pos_ != s_.size())
        fail("unexpected '" + std::string(1, s_[pos_]) + "'");
      return n;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
      throw ParseError("expression '" + s_ + "' at " + std::to_string(pos_) +
                       ": " + msg);
    }
    void skip() {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
    }
    bool accept(char c) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == c) {
        ++pos_;
        return true;
      }
      return false;
    }
    void expect(char c) {
      if (!accept(c))
        fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
      NodePtr n = term();
      for (;;) {
        if (accept('+'))
          n = make(Op::Add, n, term());
        else if (accept('-'))
          n = make(Op::Sub, n, term());
        else
          return n;
      }
    }
    NodePtr term() {
      NodePtr n = unary();
      for (;;) {
        if (accept('*'))
          n = make(Op::Mul, n, unary());
        else if (accept('/'))
          n = make(Op::Div, n, unary());
        else
          return n;
      }
    }
    NodePtr unary() {
      if (accept('-'))
        return make(Op::Neg, unary());
      if (accept('+'))
        return unary();
      return power();
    }
    NodePtr power() {
      NodePtr base = primary();
      if (accept('^'))
        return make(Op::Pow, base, unary());
      return base;
    }
    NodePtr primary() {
      skip();
      if (pos_ >= s_.size())
        fail("unexpected end of input");
      const char c = s_[pos_];
      if (accept('(')) {
        NodePtr n = expr();
        expect(')');
        return n;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
        return number();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
        return name();
      fail(std::string("unexpected '") + c + "'");
    }
    NodePtr number() {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin)
        fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(v);
    }
    NodePtr name() {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string id = s_.substr(start, pos_ - start);

      static const std::map<std::string, Op> functions = {
          {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"sqrt", Op::Sqrt}};
      if (auto f = functions.find(id); f != functions.end()) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make(f->second, arg);
      }
      if (id == "gamma") {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        if (uses_vars(*arg))
          fail("gamma() only accepts constant arguments");
        return constant(std::tgamma(arg->value));
      }
      if (id == "x" || id == "y" || id == "t") {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = id == "x" ? 0 : id == "y" ? 1 : 2;
        return n;
      }
      if (id == "pi")
        return constant(std::numbers::pi);
      if (id == "e")
        return constant(std::numbers::e);
      if (auto p = params_.find(id); p != params_.end())
        return constant(p->second);
      pos_ = start;
      fail("unknown name '" + id + "'");
    }

    std::string s_;
    const Params& params_;
    std::size_t pos_ = 0;
  };

  NodePtr root_;
};

} // namespace fdwave

#endif // FDWAVE_EXPR_HPP
