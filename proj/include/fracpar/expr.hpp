#ifndef FRACPAR_EXPR_HPP
#define FRACPAR_EXPR_HPP

#include <memory>
#include <string>

namespace fracpar {

// Minimal closed-form expression grammar for coefficient/data fields:
//   expr   := term (('+' | '-') term)*
//   term   := pow (('*' | '/') pow)*
//   pow    := unary ('^' pow)?
//   unary  := '-' unary | atom
//   atom   := number | 'pi' | 'x' | 'y' | 't' | sin|cos|exp '(' expr ')'
//            | '(' expr ')'
// Restriction to Q (or a window) is applied by the caller through masks.
class Expression {
 public:
  static Expression parse(const std::string& text);
  double eval(double x, double y, double t) const;
  const std::string& text() const { return text_; }

  Expression();
  Expression(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression);
  ~Expression();

 private:
  struct Node;
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace fracpar

#endif
