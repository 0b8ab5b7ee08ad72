#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "fredholm/types.hpp"

namespace fredholm::cli {

/// Parse failure with the byte offset of the offending input.
class ExpressionError : public StructuralError {
public:
    ExpressionError(std::size_t offset, const std::string& what);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

enum class Variable { T, Eps };

/// Immutable arithmetic expression over t and eps.
///
/// Grammar (lowest to highest precedence):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | '+' unary | power
///   power   := primary ('^' integer)*
///   primary := number ['i'] | 'i' | 't' | 'eps' | func '(' sum ')' | '(' sum ')'
/// with func one of sin, cos, exp.
class Expression {
public:
    enum class Op { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };
    struct Node;

    static Expression parse(std::string_view source);
    static Expression constant(Complex value);
    static Expression variable(Variable v);

    Complex evaluate(double t, double eps = 0.0) const;
    Expression derivative(Variable v) const;
    Expression derivative(Variable v, int times) const;

    bool depends_on(Variable v) const;
    bool is_constant() const { return !depends_on(Variable::T) && !depends_on(Variable::Eps); }

    /// Fully parenthesized text that parses back to the same tree.
    std::string to_string() const;

    friend bool operator==(const Expression& x, const Expression& y) { return x.to_string() == y.to_string(); }

    const Node& root() const { return *root_; }

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

struct Expression::Node {
    Op op;
    Complex value;  // Number
    Variable var;   // Var
    int exponent;   // Pow
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
};

}  // namespace fredholm::cli
