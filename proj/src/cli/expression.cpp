#include "fredholm/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace fredholm::cli {

ExpressionError::ExpressionError(std::size_t offset, const std::string& what)
    : StructuralError("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Op;

namespace {

NodePtr make(Op op, NodePtr left = nullptr, NodePtr right = nullptr) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{op, Complex(0.0), Variable::T, 0, std::move(left), std::move(right)});
}

NodePtr number(Complex v) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Op::Number, v, Variable::T, 0, nullptr, nullptr});
}

NodePtr var(Variable v) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Op::Var, Complex(0.0), v, 0, nullptr, nullptr});
}

NodePtr power(NodePtr base, int exponent) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Op::Pow, Complex(0.0), Variable::T, exponent, std::move(base), nullptr});
}

bool is_number(const NodePtr& n, Complex v) { return n->op == Op::Number && n->value == v; }

// Builders with light simplification, used for derivatives.
NodePtr add(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->op == Op::Number && b->op == Op::Number) return number(a->value + b->value);
    return make(Op::Add, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
    if (a->op == Op::Number) return number(-a->value);
    if (a->op == Op::Neg) return a->left;
    return make(Op::Neg, std::move(a));
}

NodePtr sub(NodePtr a, NodePtr b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return neg(std::move(b));
    if (a->op == Op::Number && b->op == Op::Number) return number(a->value - b->value);
    return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->op == Op::Number && b->op == Op::Number) return number(a->value * b->value);
    return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return number(0.0);
    if (is_number(b, 1.0)) return a;
    return make(Op::Div, std::move(a), std::move(b));
}

NodePtr pow_simplified(NodePtr base, int exponent) {
    if (exponent == 0) return number(1.0);
    if (exponent == 1) return base;
    return power(std::move(base), exponent);
}

NodePtr differentiate(const NodePtr& n, Variable v) {
    switch (n->op) {
        case Op::Number: return number(0.0);
        case Op::Var: return number(n->var == v ? 1.0 : 0.0);
        case Op::Add: return add(differentiate(n->left, v), differentiate(n->right, v));
        case Op::Sub: return sub(differentiate(n->left, v), differentiate(n->right, v));
        case Op::Neg: return neg(differentiate(n->left, v));
        case Op::Mul:
            return add(mul(differentiate(n->left, v), n->right), mul(n->left, differentiate(n->right, v)));
        case Op::Div: {
            NodePtr top = sub(mul(differentiate(n->left, v), n->right), mul(n->left, differentiate(n->right, v)));
            return div(std::move(top), pow_simplified(n->right, 2));
        }
        case Op::Pow:
            return mul(mul(number(static_cast<double>(n->exponent)), pow_simplified(n->left, n->exponent - 1)),
                       differentiate(n->left, v));
        case Op::Sin: return mul(make(Op::Cos, n->left), differentiate(n->left, v));
        case Op::Cos: return mul(neg(make(Op::Sin, n->left)), differentiate(n->left, v));
        case Op::Exp: return mul(n, differentiate(n->left, v));
    }
    return number(0.0);
}

Complex eval(const Expression::Node& n, double t, double eps) {
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Var: return n.var == Variable::T ? t : eps;
        case Op::Add: return eval(*n.left, t, eps) + eval(*n.right, t, eps);
        case Op::Sub: return eval(*n.left, t, eps) - eval(*n.right, t, eps);
        case Op::Mul: return eval(*n.left, t, eps) * eval(*n.right, t, eps);
        case Op::Div: return eval(*n.left, t, eps) / eval(*n.right, t, eps);
        case Op::Neg: return -eval(*n.left, t, eps);
        case Op::Pow: {
            const Complex base = eval(*n.left, t, eps);
            Complex out = 1.0;
            for (int k = 0; k < n.exponent; ++k) out *= base;
            return out;
        }
        case Op::Sin: return std::sin(eval(*n.left, t, eps));
        case Op::Cos: return std::cos(eval(*n.left, t, eps));
        case Op::Exp: return std::exp(eval(*n.left, t, eps));
    }
    return 0.0;
}

bool depends(const Expression::Node& n, Variable v) {
    if (n.op == Op::Var) return n.var == v;
    if (n.left && depends(*n.left, v)) return true;
    return n.right && depends(*n.right, v);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_number(Complex v) {
    const auto real = [](double x) {
        return x < 0 ? "(-" + format_double(-x) + ")" : format_double(x);
    };
    const auto imag = [](double x) {
        return x < 0 ? "(-" + format_double(-x) + "i)" : format_double(x) + "i";
    };
    if (v.imag() == 0.0) return real(v.real());
    if (v.real() == 0.0) return imag(v.imag());
    return "(" + real(v.real()) + " + " + imag(v.imag()) + ")";
}

std::string print(const Expression::Node& n) {
    switch (n.op) {
        case Op::Number: return format_number(n.value);
        case Op::Var: return n.var == Variable::T ? "t" : "eps";
        case Op::Add: return "(" + print(*n.left) + " + " + print(*n.right) + ")";
        case Op::Sub: return "(" + print(*n.left) + " - " + print(*n.right) + ")";
        case Op::Mul: return "(" + print(*n.left) + " * " + print(*n.right) + ")";
        case Op::Div: return "(" + print(*n.left) + " / " + print(*n.right) + ")";
        case Op::Neg: return "(-" + print(*n.left) + ")";
        case Op::Pow: return "(" + print(*n.left) + "^" + std::to_string(n.exponent) + ")";
        case Op::Sin: return "sin(" + print(*n.left) + ")";
        case Op::Cos: return "cos(" + print(*n.left) + ")";
        case Op::Exp: return "exp(" + print(*n.left) + ")";
    }
    return "";
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        NodePtr out = sum();
        skip();
        if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(pos_, what); }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    NodePtr sum() {
        NodePtr left = product();
        for (;;) {
            if (accept('+')) {
                left = make(Op::Add, left, product());
            } else if (accept('-')) {
                left = make(Op::Sub, left, product());
            } else {
                return left;
            }
        }
    }

    NodePtr product() {
        NodePtr left = unary();
        for (;;) {
            if (accept('*')) {
                left = make(Op::Mul, left, unary());
            } else if (accept('/')) {
                left = make(Op::Div, left, unary());
            } else {
                return left;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return pow();
    }

    NodePtr pow() {
        NodePtr base = primary();
        while (accept('^')) {
            skip();
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ == start || (pos_ < src_.size() && (src_[pos_] == '.' || ident_char(src_[pos_])))) {
                pos_ = start;
                fail("exponent must be a non-negative integer literal");
            }
            int exponent = 0;
            const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, exponent);
            if (res.ec != std::errc()) {
                pos_ = start;
                fail("exponent out of range");
            }
            base = power(base, exponent);
        }
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= src_.size()) fail("expected an operand");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        if (c == '(') {
            ++pos_;
            NodePtr inner = sum();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
            const std::string_view name = src_.substr(start, pos_ - start);
            if (name == "t") return var(Variable::T);
            if (name == "eps") return var(Variable::Eps);
            if (name == "i") return number(Complex(0.0, 1.0));
            Op fn;
            if (name == "sin") {
                fn = Op::Sin;
            } else if (name == "cos") {
                fn = Op::Cos;
            } else if (name == "exp") {
                fn = Op::Exp;
            } else {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            if (!accept('(')) fail("expected '(' after " + std::string(name));
            NodePtr arg = sum();
            if (!accept(')')) fail("expected ')'");
            return make(fn, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr literal() {
        const std::size_t start = pos_;
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
        if (res.ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(res.ptr - src_.data());
        if (pos_ < src_.size() && src_[pos_] == 'i' &&
            (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
            ++pos_;
            return number(Complex(0.0, value));
        }
        if (pos_ < src_.size() && ident_char(src_[pos_])) {
            pos_ = start;
            fail("malformed number");
        }
        return number(value);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view source) { return Expression(Parser(source).parse()); }

Expression Expression::constant(Complex value) { return Expression(number(value)); }

Expression Expression::variable(Variable v) { return Expression(var(v)); }

Complex Expression::evaluate(double t, double eps) const { return eval(*root_, t, eps); }

Expression Expression::derivative(Variable v) const { return Expression(differentiate(root_, v)); }

Expression Expression::derivative(Variable v, int times) const {
    Expression out = *this;
    for (int k = 0; k < times; ++k) out = out.derivative(v);
    return out;
}

bool Expression::depends_on(Variable v) const { return depends(*root_, v); }

std::string Expression::to_string() const { return print(*root_); }

}  // namespace fredholm::cli
