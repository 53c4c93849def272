#include "vexp/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>

#include "vexp/errors.hpp"

namespace vexp {

struct Expression::Node {
  enum class Kind { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::Number: return value;
      case Kind::VarX: return x;
      case Kind::VarY: return y;
      case Kind::Neg: return -args[0]->eval(x, y);
      case Kind::Add: return args[0]->eval(x, y) + args[1]->eval(x, y);
      case Kind::Sub: return args[0]->eval(x, y) - args[1]->eval(x, y);
      case Kind::Mul: return args[0]->eval(x, y) * args[1]->eval(x, y);
      case Kind::Div: return args[0]->eval(x, y) / args[1]->eval(x, y);
      case Kind::Pow: return std::pow(args[0]->eval(x, y), args[1]->eval(x, y));
      case Kind::Call: return call(x, y);
    }
    return 0.0;
  }

  double call(double x, double y) const {
    const double a = args[0]->eval(x, y);
    if (function == "sin") return std::sin(a);
    if (function == "cos") return std::cos(a);
    if (function == "tan") return std::tan(a);
    if (function == "exp") return std::exp(a);
    if (function == "log") return std::log(a);
    if (function == "sqrt") return std::sqrt(a);
    if (function == "abs") return std::fabs(a);
    const double b = args[1]->eval(x, y);
    if (function == "min") return std::fmin(a, b);
    if (function == "max") return std::fmax(a, b);
    return std::pow(a, b);  // "pow"
  }
};

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  std::shared_ptr<const Expression::Node> parse() {
    auto root = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

  bool uses_y = false;

 private:
  using Node = Expression::Node;
  using Ptr = std::shared_ptr<const Node>;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + msg + " at column " +
                      std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Ptr binary(Node::Kind kind, Ptr lhs, Ptr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = {std::move(lhs), std::move(rhs)};
    return n;
  }

  Ptr parse_sum() {
    Ptr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Node::Kind::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = binary(Node::Kind::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Ptr parse_product() {
    Ptr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Node::Kind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Node::Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Ptr parse_unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Neg;
      n->args = {parse_unary()};
      return n;
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  // '^' binds tighter than unary minus on its left: -x^2 == -(x^2).
  Ptr parse_power() {
    Ptr base = parse_atom();
    if (accept('^')) return binary(Node::Kind::Pow, base, parse_unary());
    return base;
  }

  Ptr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Ptr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Ptr parse_number() {
    const std::string tail(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(tail.c_str(), &end);
    if (end == tail.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - tail.c_str());
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  Ptr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id(text_.substr(start, pos_ - start));
    auto n = std::make_shared<Node>();
    if (id == "x") {
      n->kind = Node::Kind::VarX;
      return n;
    }
    if (id == "y") {
      uses_y = true;
      n->kind = Node::Kind::VarY;
      return n;
    }
    if (id == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "e") {
      n->value = std::numbers::e;
      return n;
    }
    static const char* unary[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs"};
    static const char* binary_fns[] = {"min", "max", "pow"};
    std::size_t arity = 0;
    for (const char* f : unary) {
      if (id == f) arity = 1;
    }
    for (const char* f : binary_fns) {
      if (id == f) arity = 2;
    }
    if (arity == 0) fail("unknown identifier '" + id + "'");
    if (!accept('(')) fail("expected '(' after " + id);
    n->kind = Node::Kind::Call;
    n->function = id;
    n->args.push_back(parse_sum());
    if (arity == 2) {
      if (!accept(',')) fail("expected ',' in " + id);
      n->args.push_back(parse_sum());
    }
    if (!accept(')')) fail("expected ')' after arguments of " + id);
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Expression::Expression(std::string source, std::shared_ptr<const Node> root, bool uses_y)
    : source_(std::move(source)), root_(std::move(root)), uses_y_(uses_y) {}

Expression Expression::parse(std::string_view text) {
  ExpressionParser parser(text);
  auto root = parser.parse();
  return Expression(std::string(text), std::move(root), parser.uses_y);
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace vexp
