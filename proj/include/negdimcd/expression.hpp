#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "negdimcd/scalar_function.hpp"

namespace negdimcd::expr {

/// Value with first and second derivative in the single variable.
struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;

/// A parsed one-variable expression.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | name | name '(' expr ')' | '(' expr ')'
///
/// The variable is `x` (alias `theta`). Names `pi` and `e` are constants;
/// any other name must be supplied in `params`. Functions: exp, log, sqrt,
/// sin, cos, tan, sinh, cosh, tanh, abs.
class Expression {
 public:
  static Expression parse(const std::string& text,
                          const std::map<std::string, double>& params = {});

  [[nodiscard]] Jet jet(double x) const;
  [[nodiscard]] double operator()(double x) const { return jet(x).v; }
  [[nodiscard]] const std::string& text() const { return text_; }

  /// As a ScalarFunction1D with analytic derivatives.
  [[nodiscard]] ScalarFunction1D function() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace negdimcd::expr
