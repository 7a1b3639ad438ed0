#pragma once

#include "specbound/model.hpp"

#include <memory>
#include <string>

namespace specbound::expr {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// Compiled arithmetic expression over variables x1..xd.
/// Operators + - * / ^, functions abs sqrt exp log, numeric literals.
class Expression {
 public:
  static Expression parse(const std::string& text, int dim);
  double evaluate(const model::Point& x) const;
  int dim() const { return dim_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  int dim_ = 0;
};

/// Potential backed by a parsed expression; derivatives by nested central
/// differences.
model::Potential make_expression_potential(const std::string& text, int dim);

}  // namespace specbound::expr
