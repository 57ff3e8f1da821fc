#include "liouville/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace liouville {

namespace {

const std::set<std::string> kFunctions = {"sin", "cos", "exp", "ln", "sqrt"};

struct Token {
  enum class Kind { number, identifier, op, lparen, rparen, end };
  Kind kind = Kind::end;
  double number = 0.0;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& source) : src_(source) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
    current_ = {Token::Kind::end, 0.0, "", line_, column_};
    if (pos_ >= src_.size()) return;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(src_.substr(pos_), &used);
      } catch (const std::exception&) {
        throw ParseError("malformed number", line_, column_);
      }
      current_.kind = Token::Kind::number;
      current_.number = value;
      current_.text = src_.substr(pos_, used);
      pos_ += used;
      column_ += static_cast<int>(used);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) ||
              src_[end] == '_'))
        ++end;
      current_.kind = Token::Kind::identifier;
      current_.text = src_.substr(pos_, end - pos_);
      column_ += static_cast<int>(end - pos_);
      pos_ = end;
      return;
    }
    if (c == '(') {
      current_.kind = Token::Kind::lparen;
    } else if (c == ')') {
      current_.kind = Token::Kind::rparen;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      current_.kind = Token::Kind::op;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_,
                       column_);
    }
    current_.text = std::string(1, c);
    ++pos_;
    ++column_;
  }

  std::string src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

ExprPtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::number;
  n->number = v;
  return n;
}

ExprPtr make_variable(const std::string& name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::variable;
  n->name = name;
  return n;
}

ExprPtr make_unary(ExprPtr arg) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::unary_minus;
  n->lhs = std::move(arg);
  return n;
}

ExprPtr make_binary(const std::string& op, ExprPtr lhs, ExprPtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::binary;
  n->name = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

ExprPtr make_call(const std::string& fn, ExprPtr arg) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::call;
  n->name = fn;
  n->lhs = std::move(arg);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& source) : lex_(source) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::end)
      throw ParseError("trailing token '" + t.text + "'", t.line, t.column);
    return e;
  }

 private:
  ExprPtr sum() {
    ExprPtr e = product();
    while (lex_.peek().kind == Token::Kind::op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      const std::string op = lex_.take().text;
      e = make_binary(op, e, product());
    }
    return e;
  }

  ExprPtr product() {
    ExprPtr e = unary();
    while (lex_.peek().kind == Token::Kind::op &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      const std::string op = lex_.take().text;
      e = make_binary(op, e, unary());
    }
    return e;
  }

  ExprPtr unary() {
    if (lex_.peek().kind == Token::Kind::op && lex_.peek().text == "-") {
      lex_.take();
      return make_unary(unary());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (lex_.peek().kind == Token::Kind::op && lex_.peek().text == "^") {
      lex_.take();
      return make_binary("^", base, unary());
    }
    return base;
  }

  ExprPtr primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::number:
        return make_number(t.number);
      case Token::Kind::identifier: {
        if (kFunctions.count(t.text)) {
          Token open = lex_.take();
          if (open.kind != Token::Kind::lparen)
            throw ParseError("expected '(' after '" + t.text + "'", open.line,
                             open.column);
          ExprPtr arg = sum();
          expect_rparen();
          return make_call(t.text, arg);
        }
        return make_variable(t.text);
      }
      case Token::Kind::lparen: {
        ExprPtr e = sum();
        expect_rparen();
        return e;
      }
      default:
        throw ParseError(t.kind == Token::Kind::end
                             ? "unexpected end of expression"
                             : "unexpected token '" + t.text + "'",
                         t.line, t.column);
    }
  }

  void expect_rparen() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::rparen)
      throw ParseError("expected ')'", t.line, t.column);
  }

  Lexer lex_;
};

JetScalar apply_call(const std::string& fn, const JetScalar& x) {
  if (fn == "sin") return sin(x);
  if (fn == "cos") return cos(x);
  if (fn == "exp") return exp(x);
  if (fn == "ln") return log(x);
  if (fn == "sqrt") return sqrt(x);
  throw std::logic_error("unknown function " + fn);
}

JetScalar jet_pow(const JetScalar& a, const JetScalar& b) {
  if (b.ds == 0.0 && b.dt == 0.0 && b.dst == 0.0) return pow(a, b.val);
  return exp(b * log(a));
}

JetScalar evaluate(const ExprNode& node,
                   const std::map<std::string, int>& slots,
                   std::span<const JetScalar> x) {
  switch (node.kind) {
    case ExprNode::Kind::number:
      return JetScalar(node.number);
    case ExprNode::Kind::variable:
      return x[slots.at(node.name)];
    case ExprNode::Kind::unary_minus:
      return -evaluate(*node.lhs, slots, x);
    case ExprNode::Kind::call:
      return apply_call(node.name, evaluate(*node.lhs, slots, x));
    case ExprNode::Kind::binary: {
      const JetScalar l = evaluate(*node.lhs, slots, x);
      const JetScalar r = evaluate(*node.rhs, slots, x);
      if (node.name == "+") return l + r;
      if (node.name == "-") return l - r;
      if (node.name == "*") return l * r;
      if (node.name == "/") return l / r;
      return jet_pow(l, r);
    }
  }
  throw std::logic_error("unreachable expression kind");
}

void collect_variables(const ExprNode& node, std::set<std::string>& out) {
  if (node.kind == ExprNode::Kind::variable) out.insert(node.name);
  if (node.lhs) collect_variables(*node.lhs, out);
  if (node.rhs) collect_variables(*node.rhs, out);
}

}  // namespace

ExprPtr parse_expression(const std::string& source) {
  return Parser(source).parse();
}

std::string print_expression(const ExprPtr& e) {
  switch (e->kind) {
    case ExprNode::Kind::number: {
      std::ostringstream os;
      os.precision(17);
      os << e->number;
      return os.str();
    }
    case ExprNode::Kind::variable:
      return e->name;
    case ExprNode::Kind::unary_minus:
      return "(-" + print_expression(e->lhs) + ")";
    case ExprNode::Kind::call:
      return e->name + "(" + print_expression(e->lhs) + ")";
    case ExprNode::Kind::binary:
      return "(" + print_expression(e->lhs) + " " + e->name + " " +
             print_expression(e->rhs) + ")";
  }
  throw std::logic_error("unreachable expression kind");
}

std::vector<std::string> free_variables(const ExprPtr& e) {
  std::set<std::string> names;
  collect_variables(*e, names);
  return {names.begin(), names.end()};
}

SmoothFn bind_expression(const ExprPtr& e,
                         const std::vector<std::string>& variables) {
  std::map<std::string, int> slots;
  for (std::size_t i = 0; i < variables.size(); ++i)
    slots[variables[i]] = static_cast<int>(i);
  for (const std::string& name : free_variables(e))
    if (!slots.count(name))
      throw std::invalid_argument("unknown identifier '" + name +
                                  "' (expected one of the declared variables)");
  ExprPtr root = e;
  return {static_cast<int>(variables.size()),
          [root, slots](std::span<const JetScalar> x) {
            return evaluate(*root, slots, x);
          }};
}

}  // namespace liouville
