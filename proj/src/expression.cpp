// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace aaaeigs
{

struct Expression::Node
{
  enum class Kind
  {
    Number,
    Variable,
    Parameter,
    Negate,
    Add,
    Subtract,
    Multiply,
    Divide,
    Power,
    Call,
  };
  Kind kind;
  Complex value{};
  std::string name;  // parameter or function name
  std::vector<std::shared_ptr<const Node>> args;
};

namespace
{

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

const std::set<std::string, std::less<>> FUNCTIONS = {"sqrt", "exp", "log", "sin", "cos"};

[[noreturn]] void fail(std::size_t pos, const std::string &what)
{
  throw Error(ErrorKind::Parse, "column " + std::to_string(pos + 1) + ": " + what);
}

NodePtr make(Kind kind, std::vector<NodePtr> args = {})
{
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

NodePtr number(Complex v)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

class Parser
{
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run()
  {
    NodePtr e = sum();
    skip();
    if (pos_ < text_.size())
    {
      fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

private:
  void skip()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
    {
      ++pos_;
    }
  }

  bool accept(char c)
  {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c)
    {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum()
  {
    NodePtr lhs = product();
    while (true)
    {
      if (accept('+'))
      {
        lhs = make(Kind::Add, {lhs, product()});
      }
      else if (accept('-'))
      {
        lhs = make(Kind::Subtract, {lhs, product()});
      }
      else
      {
        return lhs;
      }
    }
  }

  NodePtr product()
  {
    NodePtr lhs = unary();
    while (true)
    {
      if (accept('*'))
      {
        lhs = make(Kind::Multiply, {lhs, unary()});
      }
      else if (accept('/'))
      {
        lhs = make(Kind::Divide, {lhs, unary()});
      }
      else
      {
        return lhs;
      }
    }
  }

  NodePtr unary()
  {
    if (accept('-'))
    {
      return make(Kind::Negate, {unary()});
    }
    if (accept('+'))
    {
      return unary();
    }
    return power();
  }

  NodePtr power()
  {
    NodePtr base = atom();
    if (accept('^'))
    {
      // Right associative; the exponent may carry its own sign.
      return make(Kind::Power, {base, unary()});
    }
    return base;
  }

  NodePtr atom()
  {
    skip();
    if (pos_ >= text_.size())
    {
      fail(pos_, "unexpected end of expression");
    }
    const char c = text_[pos_];
    if (c == '(')
    {
      ++pos_;
      NodePtr e = sum();
      if (!accept(')'))
      {
        fail(pos_, "expected ')'");
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
    {
      return literal();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
    {
      return identifier();
    }
    fail(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr literal()
  {
    const char *begin = text_.data() + pos_;
    const char *end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc())
    {
      fail(pos_, "malformed number");
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return number(v);
  }

  NodePtr identifier()
  {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
    {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    skip();
    if (pos_ < text_.size() && text_[pos_] == '(')
    {
      if (!FUNCTIONS.contains(name))
      {
        fail(start, "unknown function '" + name + "'");
      }
      ++pos_;
      std::vector<NodePtr> args;
      if (!accept(')'))
      {
        args.push_back(sum());
        while (accept(','))
        {
          args.push_back(sum());
        }
        if (!accept(')'))
        {
          fail(pos_, "expected ')' after arguments");
        }
      }
      if (args.size() != 1)
      {
        fail(start, name + " takes 1 argument, got " + std::to_string(args.size()));
      }
      auto n = std::make_shared<Node>();
      n->kind = Kind::Call;
      n->name = name;
      n->args = std::move(args);
      return n;
    }
    if (FUNCTIONS.contains(name))
    {
      fail(start, "function '" + name + "' used without arguments");
    }
    if (name == "i")
    {
      return number(Complex(0.0, 1.0));
    }
    if (name == "pi")
    {
      return number(std::numbers::pi);
    }
    if (name == "lam" || name == "lambda")
    {
      return make(Kind::Variable);
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Parameter;
    n->name = name;
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Complex power(Complex base, Complex exponent)
{
  if (exponent.imag() == 0.0)
  {
    const double e = exponent.real();
    if (e == std::round(e) && std::abs(e) <= 64)
    {
      // Exact repeated squaring keeps integer powers free of branch effects.
      auto k = static_cast<long>(std::abs(e));
      Complex acc = 1.0, b = base;
      while (k > 0)
      {
        if (k & 1)
        {
          acc *= b;
        }
        b *= b;
        k >>= 1;
      }
      return e < 0 ? 1.0 / acc : acc;
    }
    if (base == 0.0)
    {
      return e > 0 ? Complex(0.0) : Complex(std::numeric_limits<double>::infinity());
    }
    return std::pow(base, e);
  }
  return std::pow(base, exponent);
}

Complex eval(const Node &n, Complex lam, const ParamTable &params)
{
  switch (n.kind)
  {
  case Kind::Number:
    return n.value;
  case Kind::Variable:
    return lam;
  case Kind::Parameter: {
    auto it = params.find(n.name);
    if (it == params.end())
    {
      throw Error(ErrorKind::InvalidInput, "unknown identifier '" + n.name + "'");
    }
    return it->second;
  }
  case Kind::Negate:
    // 0 − x keeps a zero imaginary part positive, so sqrt(-4) = 2i.
    return Complex(0.0) - eval(*n.args[0], lam, params);
  case Kind::Add:
    return eval(*n.args[0], lam, params) + eval(*n.args[1], lam, params);
  case Kind::Subtract:
    return eval(*n.args[0], lam, params) - eval(*n.args[1], lam, params);
  case Kind::Multiply:
    return eval(*n.args[0], lam, params) * eval(*n.args[1], lam, params);
  case Kind::Divide:
    return eval(*n.args[0], lam, params) / eval(*n.args[1], lam, params);
  case Kind::Power:
    return power(eval(*n.args[0], lam, params), eval(*n.args[1], lam, params));
  case Kind::Call: {
    const Complex x = eval(*n.args[0], lam, params);
    if (n.name == "sqrt")
    {
      return std::sqrt(x);
    }
    if (n.name == "exp")
    {
      return std::exp(x);
    }
    if (n.name == "log")
    {
      return std::log(x);
    }
    if (n.name == "sin")
    {
      return std::sin(x);
    }
    return std::cos(x);
  }
  }
  return 0.0;
}

std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_node(const Node &n)
{
  switch (n.kind)
  {
  case Kind::Number: {
    const double re = n.value.real(), im = n.value.imag();
    if (im == 0.0)
    {
      return re < 0 ? "(-" + format_number(-re) + ")" : format_number(re);
    }
    if (re == 0.0 && im == 1.0)
    {
      return "i";
    }
    return "(" + format_number(re) + (im < 0 ? "-" : "+") + format_number(std::abs(im)) + "*i)";
  }
  case Kind::Variable:
    return "lam";
  case Kind::Parameter:
    return n.name;
  case Kind::Negate:
    return "(-" + format_node(*n.args[0]) + ")";
  case Kind::Call:
    return n.name + "(" + format_node(*n.args[0]) + ")";
  default:
    break;
  }
  const char *op = n.kind == Kind::Add        ? "+"
                   : n.kind == Kind::Subtract ? "-"
                   : n.kind == Kind::Multiply ? "*"
                   : n.kind == Kind::Divide   ? "/"
                                              : "^";
  return "(" + format_node(*n.args[0]) + op + format_node(*n.args[1]) + ")";
}

void collect(const Node &n, std::set<std::string> &out)
{
  if (n.kind == Kind::Parameter)
  {
    out.insert(n.name);
  }
  for (const auto &a : n.args)
  {
    collect(*a, out);
  }
}

}  // namespace

Expression Expression::parse(std::string_view text)
{
  return Expression(Parser(text).run());
}

Complex Expression::evaluate(Complex lam, const ParamTable &params) const
{
  return eval(*root_, lam, params);
}

std::string Expression::format() const
{
  return format_node(*root_);
}

std::set<std::string> Expression::parameters() const
{
  std::set<std::string> out;
  collect(*root_, out);
  return out;
}

ScalarFunction ScalarFunction::parse(std::string_view text, const ParamTable &params)
{
  ScalarFunction f;
  f.expr_ = std::make_shared<const Expression>(Expression::parse(text));
  for (const auto &name : f.expr_->parameters())
  {
    auto it = params.find(name);
    if (it == params.end())
    {
      throw Error(ErrorKind::Parse, "unknown identifier '" + name + "'");
    }
    f.params_.emplace(name, it->second);
  }
  return f;
}

ScalarFunction ScalarFunction::builtin(std::string name, ScalarFn fn)
{
  ScalarFunction f;
  f.builtin_name_ = std::move(name);
  f.builtin_ = std::move(fn);
  return f;
}

Complex ScalarFunction::operator()(Complex lam) const
{
  if (expr_)
  {
    return expr_->evaluate(lam, params_);
  }
  if (!builtin_)
  {
    throw Error(ErrorKind::InvalidInput, "evaluating an empty scalar function");
  }
  return builtin_(lam);
}

ScalarFn ScalarFunction::as_fn() const
{
  return [self = *this](Complex lam) { return self(lam); };
}

std::string ScalarFunction::text() const
{
  return expr_ ? expr_->format() : "builtin:" + builtin_name_;
}

}  // namespace aaaeigs
