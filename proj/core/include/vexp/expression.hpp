#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vexp {

/// A parsed arithmetic expression in the variables `x` and `y`.
///
/// Grammar: the usual `+ - * / ^` with `^` right-associative, unary minus,
/// parentheses, the constants `pi` and `e`, and the functions
/// `sin cos tan exp log sqrt abs min max pow`. Parsing errors raise
/// `ConfigError` with the offending column.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double x, double y = 0.0) const;

  const std::string& source() const noexcept { return source_; }
  /// True when the expression references `y`.
  bool uses_y() const noexcept { return uses_y_; }

 private:
  friend class ExpressionParser;
  struct Node;
  Expression(std::string source, std::shared_ptr<const Node> root, bool uses_y);

  std::string source_;
  std::shared_ptr<const Node> root_;
  bool uses_y_ = false;
};

}  // namespace vexp
