#include "beamcontact/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <iomanip>

namespace beamcontact {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log };

struct Expression::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    return std::make_shared<const Expression::Node>(Expression::Node{op, 0.0, std::move(lhs), std::move(rhs)});
}

NodePtr konst(double v) {
    return std::make_shared<const Expression::Node>(Expression::Node{Op::Const, v, nullptr, nullptr});
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

double eval(const Expression::Node& n, double x) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return x;
        case Op::Neg: return -eval(*n.lhs, x);
        case Op::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Op::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Op::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Op::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
        case Op::Pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
        case Op::Sin: return std::sin(eval(*n.lhs, x));
        case Op::Cos: return std::cos(eval(*n.lhs, x));
        case Op::Exp: return std::exp(eval(*n.lhs, x));
        case Op::Log: return std::log(eval(*n.lhs, x));
    }
    return 0.0;
}

bool depends_on_x(const NodePtr& n) {
    if (!n) return false;
    if (n->op == Op::Var) return true;
    return depends_on_x(n->lhs) || depends_on_x(n->rhs);
}

// Builders with light constant folding so derivatives stay readable.
NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return konst(a->value + b->value);
    return make(Op::Add, std::move(a), std::move(b));
}
NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return konst(a->value - b->value);
    if (is_const(a, 0.0)) return make(Op::Neg, std::move(b));
    return make(Op::Sub, std::move(a), std::move(b));
}
NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return konst(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return konst(a->value * b->value);
    return make(Op::Mul, std::move(a), std::move(b));
}
NodePtr divide(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return konst(0.0);
    if (is_const(b, 1.0)) return a;
    return make(Op::Div, std::move(a), std::move(b));
}
NodePtr neg(NodePtr a) {
    if (a->op == Op::Const) return konst(-a->value);
    return make(Op::Neg, std::move(a));
}

NodePtr differentiate(const NodePtr& n) {
    switch (n->op) {
        case Op::Const: return konst(0.0);
        case Op::Var: return konst(1.0);
        case Op::Neg: return neg(differentiate(n->lhs));
        case Op::Add: return add(differentiate(n->lhs), differentiate(n->rhs));
        case Op::Sub: return sub(differentiate(n->lhs), differentiate(n->rhs));
        case Op::Mul:
            return add(mul(differentiate(n->lhs), n->rhs), mul(n->lhs, differentiate(n->rhs)));
        case Op::Div:
            return divide(sub(mul(differentiate(n->lhs), n->rhs), mul(n->lhs, differentiate(n->rhs))),
                          mul(n->rhs, n->rhs));
        case Op::Pow: {
            const auto& u = n->lhs;
            const auto& v = n->rhs;
            if (!depends_on_x(v)) {
                // v u^(v-1) u'
                return mul(mul(v, make(Op::Pow, u, sub(v, konst(1.0)))), differentiate(u));
            }
            // u^v (v' ln u + v u' / u)
            return mul(n, add(mul(differentiate(v), make(Op::Log, u)),
                              divide(mul(v, differentiate(u)), u)));
        }
        case Op::Sin: return mul(make(Op::Cos, n->lhs), differentiate(n->lhs));
        case Op::Cos: return neg(mul(make(Op::Sin, n->lhs), differentiate(n->lhs)));
        case Op::Exp: return mul(n, differentiate(n->lhs));
        case Op::Log: return divide(differentiate(n->lhs), n->lhs);
    }
    return konst(0.0);
}

std::string render(const NodePtr& n) {
    auto bin = [&](const char* sym) {
        return "(" + render(n->lhs) + " " + sym + " " + render(n->rhs) + ")";
    };
    switch (n->op) {
        case Op::Const: {
            std::ostringstream os;
            os << std::setprecision(17) << n->value;
            return n->value < 0 ? "(" + os.str() + ")" : os.str();
        }
        case Op::Var: return "x";
        case Op::Neg: return "(-" + render(n->lhs) + ")";
        case Op::Add: return bin("+");
        case Op::Sub: return bin("-");
        case Op::Mul: return bin("*");
        case Op::Div: return bin("/");
        case Op::Pow: return bin("^");
        case Op::Sin: return "sin(" + render(n->lhs) + ")";
        case Op::Cos: return "cos(" + render(n->lhs) + ")";
        case Op::Exp: return "exp(" + render(n->lhs) + ")";
        // Not part of the input grammar; only produced by differentiation.
        case Op::Log: return "log(" + render(n->lhs) + ")";
    }
    return "";
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        auto node = expr();
        skip_space();
        if (pos_ != text_.size()) {
            throw ExpressionError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return node;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw ExpressionError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr expr() {
        auto node = term();
        for (;;) {
            if (accept('+')) {
                node = make(Op::Add, node, term());
            } else if (accept('-')) {
                node = make(Op::Sub, node, term());
            } else {
                return node;
            }
        }
    }

    NodePtr term() {
        auto node = unary();
        for (;;) {
            if (accept('*')) {
                node = make(Op::Mul, node, unary());
            } else if (accept('/')) {
                node = make(Op::Div, node, unary());
            } else {
                return node;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (accept('^')) {
            return make(Op::Pow, base, unary());
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ExpressionError("unexpected end of expression", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto node = expr();
            expect(')');
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const auto name = text_.substr(start, pos_ - start);
            if (name == "x") return make(Op::Var);
            Op fn;
            if (name == "sin") fn = Op::Sin;
            else if (name == "cos") fn = Op::Cos;
            else if (name == "exp") fn = Op::Exp;
            else if (name == "log") fn = Op::Log;
            else throw ExpressionError("unknown identifier '" + std::string(name) + "'", start);
            expect('(');
            auto arg = expr();
            expect(')');
            return make(fn, arg);
        }
        throw ExpressionError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            const std::size_t exp_start = pos_;
            digits();
            if (pos_ == exp_start) pos_ = save;  // 'e' not followed by an exponent
        }
        const std::string token(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (token == "." || end != token.c_str() + token.size()) {
            throw ExpressionError("malformed number '" + token + "'", start);
        }
        return konst(v);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double value) { return Expression(konst(value)); }

double Expression::operator()(double x) const { return eval(*root_, x); }

Expression Expression::derivative() const { return Expression(differentiate(root_)); }

std::string Expression::to_string() const { return render(root_); }

bool Expression::is_constant() const { return !depends_on_x(root_); }

}  // namespace beamcontact
