#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace pwsmooth {

// A parsed single-variable arithmetic expression.
//
// Grammar (ASCII, whitespace insignificant):
//   expression := term (('+'|'-') term)*
//   term       := unary (('*'|'/') unary)*
//   unary      := '-' unary | power
//   power      := atom ('^' unary)?          -- right-associative, binds tightest
//   atom       := number | ident | ident '(' expression ')' | '(' expression ')'
//
// Known functions: sin cos tan exp ln log10 sinh cosh tanh sqrt abs floor sign.
// Known constants: pi, e.  The first identifier that is neither becomes the
// independent variable; any further distinct identifier is an error.
//
// Expressions are immutable after parse; evaluation is pure and reentrant.
class Expression {
  public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    Expression() = default;

    static Expression parse(std::string_view text);

    // Constant expression (no variable reference).
    static Expression constant(double value);

    // IEEE-style evaluation: division by zero, log of a non-positive value
    // and the like yield infinities or NaN in-band, never a throw.
    double operator()(double x) const;

    // Canonical text form; parsing it back yields a structurally identical tree.
    std::string str() const;

    bool structurally_equal(const Expression& other) const;

    // The tree with the variable replaced by variable/k, used when an
    // approximant is rescaled to a larger or smaller domain.
    Expression with_scaled_variable(double k) const;

    const std::string& variable() const { return variable_; }
    bool empty() const { return root_ == nullptr; }

  private:
    Expression(NodePtr root, std::string variable)
        : root_(std::move(root)), variable_(std::move(variable)) {}

    NodePtr root_;
    std::string variable_ = "x";
};

} // namespace pwsmooth
