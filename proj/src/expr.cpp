#include "specbound/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace specbound::expr {

struct Expression::Node {
  enum class Kind { Constant, Variable, Unary, Binary, Call } kind;
  double constant = 0.0;
  int variable = -1;  // 0-based coordinate index
  char op = 0;        // binary ops and unary '-'
  std::string call;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->constant = v;
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, int dim) : text_(text), dim_(dim) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = binary('+', lhs, parse_product());
      else if (accept('-'))
        lhs = binary('-', lhs, parse_product());
      else
        return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = binary('*', lhs, parse_unary());
      else if (accept('/'))
        lhs = binary('/', lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->lhs = parse_unary();
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return binary('^', base, parse_unary());  // right assoc
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    size_t start = pos_;
    size_t used = 0;
    double v;
    try {
      v = std::stod(text_.substr(start), &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ = start + used;
    return make_const(v);
  }

  NodePtr parse_name() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        int idx = std::stoi(name.substr(1));
        if (idx < 1 || idx > dim_) {
          pos_ = start;
          fail("variable " + name + " out of range for dimension " +
               std::to_string(dim_));
        }
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        n->variable = idx - 1;
        return n;
      }
    }
    if (name == "abs" || name == "sqrt" || name == "exp" || name == "log") {
      if (!accept('(')) fail("expected '(' after " + name);
      NodePtr arg = parse_sum();
      if (!accept(')')) fail("expected ')'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->call = name;
      n->lhs = arg;
      return n;
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  const std::string& text_;
  int dim_;
  size_t pos_ = 0;
};

double eval_node(const Node& n, const model::Point& x) {
  switch (n.kind) {
    case Node::Kind::Constant:
      return n.constant;
    case Node::Kind::Variable:
      return x[n.variable];
    case Node::Kind::Unary:
      return -eval_node(*n.lhs, x);
    case Node::Kind::Binary: {
      double a = eval_node(*n.lhs, x);
      double b = eval_node(*n.rhs, x);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      break;
    }
    case Node::Kind::Call: {
      double a = eval_node(*n.lhs, x);
      if (n.call == "abs") return std::abs(a);
      if (n.call == "sqrt") return std::sqrt(a);
      if (n.call == "exp") return std::exp(a);
      if (n.call == "log") return std::log(a);
      break;
    }
  }
  throw std::logic_error("corrupt expression tree");
}

}  // namespace

Expression Expression::parse(const std::string& text, int dim) {
  Expression e;
  e.dim_ = dim;
  e.root_ = Parser(text, dim).run();
  return e;
}

double Expression::evaluate(const model::Point& x) const {
  if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  return eval_node(*root_, x);
}

model::Potential make_expression_potential(const std::string& text, int dim) {
  Expression e = Expression::parse(text, dim);
  auto value = [e](const model::Point& x) { return e.evaluate(x); };
  return model::make_custom(dim, value);
}

}  // namespace specbound::expr
