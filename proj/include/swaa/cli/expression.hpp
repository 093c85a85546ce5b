#pragma once

#include <memory>
#include <string>

namespace swaa::cli {

/// Arithmetic expression in the variables x and h. Supports + - * / ^,
/// parentheses, the constants pi and e, and sqrt exp log sin cos tan
/// sinh cosh tanh abs min max pow.
class Expression {
 public:
  struct Node;

  /// Raises a config error naming `origin` on a syntax error.
  Expression(const std::string& text, const std::string& origin);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(double x, double h) const;
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace swaa::cli
