// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "aaaeigs/common.hpp"

namespace aaaeigs
{

using ParamTable = std::map<std::string, double, std::less<>>;

// Expression over the variable `lam` (alias `lambda`).
//
// Grammar, loosest binding first: `+ -`, `* /`, unary `-`/`+`, `^` (right
// associative). Atoms: numbers, `i`, `pi`, `lam`, parameter names, and calls
// sqrt, exp, log, sin, cos. sqrt and log use the principal branch, so the cut
// lies on the negative real axis of the argument.
class Expression
{
public:
  struct Node;

  // Throws Error(Parse) with the 1-based column of the offending token.
  static Expression parse(std::string_view text);

  // Throws Error(InvalidInput) for parameters missing from `params`.
  Complex evaluate(Complex lam, const ParamTable &params) const;

  // Fully parenthesized, 17-digit form that parses back to the same tree.
  std::string format() const;

  // Parameter names referenced by the expression.
  std::set<std::string> parameters() const;

private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

// A scalar nonlinearity with its parameters resolved, or a registered built-in.
class ScalarFunction
{
public:
  ScalarFunction() = default;

  // Parses and binds; unknown identifiers are reported immediately.
  static ScalarFunction parse(std::string_view text, const ParamTable &params = {});
  static ScalarFunction builtin(std::string name, ScalarFn fn);

  Complex operator()(Complex lam) const;
  ScalarFn as_fn() const;

  // Expression text (formatted) or "builtin:<name>".
  std::string text() const;
  bool is_builtin() const { return !expr_; }
  const ParamTable &params() const { return params_; }

private:
  std::shared_ptr<const Expression> expr_;
  ParamTable params_;
  std::string builtin_name_;
  ScalarFn builtin_;
};

}  // namespace aaaeigs
