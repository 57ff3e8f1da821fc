#pragma once

// A tiny smooth expression language: literals, variables, unary minus,
// + - * / ^ (right-associative), and the calls sin, cos, exp, ln, sqrt.
// Expressions evaluate over jet scalars, so parsed models are
// differentiable end to end.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "liouville/jet.hpp"

namespace liouville {

struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& message, int line_, int column_)
      : std::runtime_error(message + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(column_)),
        line(line_),
        column(column_) {}
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { number, variable, unary_minus, binary, call };
  Kind kind = Kind::number;
  double number = 0.0;
  std::string name;  // variable or function name, or binary operator
  ExprPtr lhs;       // also the sole child of unary minus and calls
  ExprPtr rhs;
};

ExprPtr parse_expression(const std::string& source);
std::string print_expression(const ExprPtr& e);
std::vector<std::string> free_variables(const ExprPtr& e);

// Resolves every variable against the given ordered list and returns a
// jet-evaluable function of that arity.  Unknown names are rejected.
SmoothFn bind_expression(const ExprPtr& e,
                         const std::vector<std::string>& variables);

}  // namespace liouville
