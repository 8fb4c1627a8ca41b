#include "negdimcd/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace negdimcd::expr {

struct Node {
  enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kCall };
  Op op = Op::kConst;
  double value = 0.0;
  std::string fn;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return n;
}

const std::vector<std::string> kFunctions = {"exp",  "log",  "sqrt", "sin",  "cos",
                                             "tan",  "sinh", "cosh", "tanh", "abs"};

class Parser {
 public:
  Parser(const std::string& s, const std::map<std::string, double>& params)
      : s_(s), params_(params) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + s_ + "\" at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Node::Op::kAdd, n, term());
      else if (eat('-')) n = make(Node::Op::kSub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Node::Op::kMul, n, unary());
      else if (eat('/')) n = make(Node::Op::kDiv, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Op::kNeg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::Op::kPow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name = s_.substr(start, pos_ - start);
      if (eat('(')) {
        bool known = false;
        for (const auto& f : kFunctions) known = known || f == name;
        if (!known) fail("unknown function '" + name + "'");
        auto n = std::make_shared<Node>();
        n->op = Node::Op::kCall;
        n->fn = name;
        n->a = expr();
        if (!eat(')')) fail("expected ')'");
        return n;
      }
      if (name == "x" || name == "theta") return make(Node::Op::kVar);
      if (name == "pi") return constant(std::numbers::pi);
      if (name == "e") return constant(std::numbers::e);
      auto it = params_.find(name);
      if (it == params_.end()) fail("unknown name '" + name + "'");
      return constant(it->second);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

// g(u) with g, g', g'' evaluated at u.v.
Jet chain(const Jet& u, double g, double g1, double g2) {
  return {g, g1 * u.d, g2 * u.d * u.d + g1 * u.dd};
}

Jet mul(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd};
}

Jet call(const std::string& fn, const Jet& u) {
  const double v = u.v;
  if (fn == "exp") {
    const double e = std::exp(v);
    return chain(u, e, e, e);
  }
  if (fn == "log") return chain(u, std::log(v), 1 / v, -1 / (v * v));
  if (fn == "sqrt") {
    const double r = std::sqrt(v);
    return chain(u, r, 0.5 / r, -0.25 / (r * v));
  }
  if (fn == "sin") return chain(u, std::sin(v), std::cos(v), -std::sin(v));
  if (fn == "cos") return chain(u, std::cos(v), -std::sin(v), -std::cos(v));
  if (fn == "tan") {
    const double t = std::tan(v), sec2 = 1 + t * t;
    return chain(u, t, sec2, 2 * t * sec2);
  }
  if (fn == "sinh") return chain(u, std::sinh(v), std::cosh(v), std::sinh(v));
  if (fn == "cosh") return chain(u, std::cosh(v), std::sinh(v), std::cosh(v));
  if (fn == "tanh") {
    const double t = std::tanh(v), sech2 = 1 - t * t;
    return chain(u, t, sech2, -2 * t * sech2);
  }
  // abs
  const double s = v < 0 ? -1.0 : 1.0;
  return chain(u, std::abs(v), s, 0.0);
}

Jet pow_jet(const Jet& a, const Jet& b) {
  const bool const_exp = b.d == 0.0 && b.dd == 0.0;
  if (const_exp) {
    const double c = b.v;
    if (c == 0.0) return {1.0, 0.0, 0.0};
    if (c == 1.0) return a;
    if (c == 2.0) return mul(a, a);
    const double g = std::pow(a.v, c);
    const double g1 = c * std::pow(a.v, c - 1);
    const double g2 = c * (c - 1) * std::pow(a.v, c - 2);
    return chain(a, g, g1, g2);
  }
  // a^b = exp(b log a)
  const Jet l = call("log", a);
  return call("exp", mul(b, l));
}

Jet eval(const Node& n, double x) {
  switch (n.op) {
    case Node::Op::kConst: return {n.value, 0.0, 0.0};
    case Node::Op::kVar: return {x, 1.0, 0.0};
    case Node::Op::kAdd: {
      const Jet a = eval(*n.a, x), b = eval(*n.b, x);
      return {a.v + b.v, a.d + b.d, a.dd + b.dd};
    }
    case Node::Op::kSub: {
      const Jet a = eval(*n.a, x), b = eval(*n.b, x);
      return {a.v - b.v, a.d - b.d, a.dd - b.dd};
    }
    case Node::Op::kMul: return mul(eval(*n.a, x), eval(*n.b, x));
    case Node::Op::kDiv: {
      const Jet a = eval(*n.a, x), b = eval(*n.b, x);
      const Jet inv = chain(b, 1 / b.v, -1 / (b.v * b.v), 2 / (b.v * b.v * b.v));
      return mul(a, inv);
    }
    case Node::Op::kPow: return pow_jet(eval(*n.a, x), eval(*n.b, x));
    case Node::Op::kNeg: {
      const Jet a = eval(*n.a, x);
      return {-a.v, -a.d, -a.dd};
    }
    case Node::Op::kCall: return call(n.fn, eval(*n.a, x));
  }
  return {};
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::map<std::string, double>& params) {
  Parser p(text, params);
  Expression e;
  e.root_ = p.parse();
  e.text_ = text;
  return e;
}

Jet Expression::jet(double x) const { return eval(*root_, x); }

ScalarFunction1D Expression::function() const {
  const auto root = root_;
  return ScalarFunction1D([root](double x) { return eval(*root, x).v; },
                          ScalarFunction1D::Fn([root](double x) { return eval(*root, x).d; }),
                          ScalarFunction1D::Fn([root](double x) { return eval(*root, x).dd; }));
}

}  // namespace negdimcd::expr
