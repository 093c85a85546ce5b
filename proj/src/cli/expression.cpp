#include "swaa/cli/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "swaa/error.hpp"

namespace swaa::cli {

struct Expression::Node {
  enum class Op { constant, var_x, var_h, neg, add, sub, mul, div, pow, call1, call2 };
  Op op = Op::constant;
  double value = 0.0;
  double (*f1)(double) = nullptr;
  double (*f2)(double, double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double h) const {
    switch (op) {
      case Op::constant: return value;
      case Op::var_x: return x;
      case Op::var_h: return h;
      case Op::neg: return -a->eval(x, h);
      case Op::add: return a->eval(x, h) + b->eval(x, h);
      case Op::sub: return a->eval(x, h) - b->eval(x, h);
      case Op::mul: return a->eval(x, h) * b->eval(x, h);
      case Op::div: return a->eval(x, h) / b->eval(x, h);
      case Op::pow: return std::pow(a->eval(x, h), b->eval(x, h));
      case Op::call1: return f1(a->eval(x, h));
      case Op::call2: return f2(a->eval(x, h), b->eval(x, h));
    }
    return 0.0;
  }
};

namespace {

using NodeP = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

struct Fn1 {
  const char* name;
  double (*f)(double);
};
struct Fn2 {
  const char* name;
  double (*f)(double, double);
};

const Fn1 kFn1[] = {
    {"sqrt", [](double v) { return std::sqrt(v); }}, {"exp", [](double v) { return std::exp(v); }},
    {"log", [](double v) { return std::log(v); }},   {"sin", [](double v) { return std::sin(v); }},
    {"cos", [](double v) { return std::cos(v); }},   {"tan", [](double v) { return std::tan(v); }},
    {"sinh", [](double v) { return std::sinh(v); }}, {"cosh", [](double v) { return std::cosh(v); }},
    {"tanh", [](double v) { return std::tanh(v); }}, {"abs", [](double v) { return std::abs(v); }},
};
const Fn2 kFn2[] = {
    {"min", [](double a, double b) { return std::fmin(a, b); }},
    {"max", [](double a, double b) { return std::fmax(a, b); }},
    {"pow", [](double a, double b) { return std::pow(a, b); }},
};

class Parser {
 public:
  Parser(const std::string& s, const std::string& origin) : s_(s), origin_(origin) {}

  NodeP parse() {
    NodeP n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::config,
                origin_ + ": " + what + " at column " + std::to_string(pos_ + 1) + " of '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodeP make(Op op, NodeP a = nullptr, NodeP b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodeP expr() {
    NodeP n = term();
    for (;;) {
      if (eat('+')) n = make(Op::add, n, term());
      else if (eat('-')) n = make(Op::sub, n, term());
      else return n;
    }
  }

  NodeP term() {
    NodeP n = unary();
    for (;;) {
      if (eat('*')) n = make(Op::mul, n, unary());
      else if (eat('/')) n = make(Op::div, n, unary());
      else return n;
    }
  }

  NodeP unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  // Right-associative; binds tighter than unary minus on its left: -x^2 = -(x^2).
  NodeP power() {
    NodeP base = primary();
    if (eat('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodeP primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      NodeP n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Op::var_x);
      if (id == "h") return make(Op::var_h);
      if (id == "pi" || id == "e") {
        auto n = std::make_shared<Expression::Node>();
        n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
        return n;
      }
      for (const auto& f : kFn1) {
        if (id == f.name) {
          if (!eat('(')) fail("expected '(' after " + id);
          auto n = std::make_shared<Expression::Node>();
          n->op = Op::call1;
          n->f1 = f.f;
          n->a = expr();
          if (!eat(')')) fail("missing ')'");
          return n;
        }
      }
      for (const auto& f : kFn2) {
        if (id == f.name) {
          if (!eat('(')) fail("expected '(' after " + id);
          auto n = std::make_shared<Expression::Node>();
          n->op = Op::call2;
          n->f2 = f.f;
          n->a = expr();
          if (!eat(',')) fail("expected ',' in " + id);
          n->b = expr();
          if (!eat(')')) fail("missing ')'");
          return n;
        }
      }
      pos_ = start;
      fail("unknown name '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::string& origin_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text, const std::string& origin)
    : text_(text), root_(Parser(text_, origin).parse()) {}
Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(double x, double h) const { return root_->eval(x, h); }

}  // namespace swaa::cli
