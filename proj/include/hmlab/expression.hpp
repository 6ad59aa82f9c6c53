#pragma once

#include <complex>
#include <memory>
#include <string>

namespace hmlab {

/// A parsed arithmetic expression in one complex variable.
///
/// Grammar: numbers, the variables `w` (alias `z`), `x`, `y`, constants `i`,
/// `pi`, `e`, operators `+ - * / ^`, absolute value bars `|...|`, and the
/// functions exp, log, sqrt, sin, cos, tan, sinh, cosh, tanh, abs, re, im,
/// conj, arg. Evaluation is in complex arithmetic.
class Expression {
 public:
  static Expression parse(const std::string& text);

  std::complex<double> eval(std::complex<double> w) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root) : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace hmlab
