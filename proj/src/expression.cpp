#include "hmlab/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hmlab/error.hpp"

namespace hmlab {

using cd = std::complex<double>;

struct Expression::Node {
  enum class Op { constant, var_w, var_x, var_y, neg, add, sub, mul, div, pow, call };
  Op op = Op::constant;
  cd value{};
  cd (*fn)(cd) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  cd eval(cd w) const {
    switch (op) {
      case Op::constant: return value;
      case Op::var_w: return w;
      case Op::var_x: return w.real();
      case Op::var_y: return w.imag();
      case Op::neg: return -lhs->eval(w);
      case Op::add: return lhs->eval(w) + rhs->eval(w);
      case Op::sub: return lhs->eval(w) - rhs->eval(w);
      case Op::mul: return lhs->eval(w) * rhs->eval(w);
      case Op::div: return lhs->eval(w) / rhs->eval(w);
      case Op::pow: {
        const cd b = lhs->eval(w);
        const cd p = rhs->eval(w);
        // Integer powers of real-or-complex bases stay exact and branch free.
        if (p.imag() == 0.0 && p.real() == std::round(p.real()) && std::abs(p.real()) <= 64.0) {
          const int n = static_cast<int>(p.real());
          cd acc(1.0, 0.0);
          for (int k = 0; k < std::abs(n); ++k) acc *= b;
          return n < 0 ? cd(1.0, 0.0) / acc : acc;
        }
        if (b.imag() == 0.0 && b.real() > 0.0 && p.imag() == 0.0) return std::pow(b.real(), p.real());
        return std::pow(b, p);
      }
      case Op::call: return fn(lhs->eval(w));
    }
    return {};
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr constant(cd v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return n;
}

const std::unordered_map<std::string, cd (*)(cd)>& functions() {
  static const std::unordered_map<std::string, cd (*)(cd)> table{
      {"exp", [](cd a) { return std::exp(a); }},
      {"log", [](cd a) { return a.imag() == 0.0 && a.real() > 0.0 ? cd(std::log(a.real())) : std::log(a); }},
      {"sqrt", [](cd a) { return a.imag() == 0.0 && a.real() >= 0.0 ? cd(std::sqrt(a.real())) : std::sqrt(a); }},
      {"sin", [](cd a) { return std::sin(a); }},
      {"cos", [](cd a) { return std::cos(a); }},
      {"tan", [](cd a) { return std::tan(a); }},
      {"sinh", [](cd a) { return std::sinh(a); }},
      {"cosh", [](cd a) { return std::cosh(a); }},
      {"tanh", [](cd a) { return std::tanh(a); }},
      {"abs", [](cd a) { return cd(std::abs(a)); }},
      {"re", [](cd a) { return cd(a.real()); }},
      {"im", [](cd a) { return cd(a.imag()); }},
      {"conj", [](cd a) { return std::conj(a); }},
      {"arg", [](cd a) { return cd(std::arg(a)); }},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("expression '" + s_ + "' at " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (accept('+')) n = make(Node::Op::add, n, product());
      else if (accept('-')) n = make(Node::Op::sub, n, product());
      else return n;
    }
  }

  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Node::Op::mul, n, unary());
      else if (accept('/')) n = make(Node::Op::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // Right associative; binds tighter than unary minus on its left (-w^2 == -(w^2)).
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (c == '|') {
      ++pos_;
      NodePtr inner = sum();
      if (!accept('|')) fail("expected closing '|'");
      auto n = std::make_shared<Node>();
      n->op = Node::Op::call;
      n->fn = functions().at("abs");
      n->lhs = inner;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "w" || name == "z") return make(Node::Op::var_w);
    if (name == "x") return make(Node::Op::var_x);
    if (name == "y") return make(Node::Op::var_y);
    if (name == "i") return constant(cd(0.0, 1.0));
    if (name == "pi") return constant(std::numbers::pi);
    if (name == "e") return constant(std::numbers::e);
    auto it = functions().find(name);
    if (it == functions().end()) fail("unknown name '" + name + "'");
    if (!accept('(')) fail("expected '(' after " + name);
    NodePtr arg = sum();
    if (!accept(')')) fail("expected ')'");
    auto n = std::make_shared<Node>();
    n->op = Node::Op::call;
    n->fn = it->second;
    n->lhs = arg;
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return Expression(text, p.parse());
}

std::complex<double> Expression::eval(std::complex<double> w) const { return root_->eval(w); }

}  // namespace hmlab
