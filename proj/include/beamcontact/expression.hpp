#pragma once

// Tiny arithmetic language for contact surfaces g(x):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'x' | ('sin' | 'cos' | 'exp' | 'log') '(' expr ')' | '(' expr ')'

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beamcontact {

class ExpressionError : public std::runtime_error {
public:
    ExpressionError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class Expression {
public:
    struct Node;

    static Expression parse(std::string_view text);
    static Expression constant(double value);

    [[nodiscard]] double operator()(double x) const;

    /// d/dx by symbolic differentiation of the tree.
    [[nodiscard]] Expression derivative() const;

    /// Fully parenthesized rendering, re-parseable.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] bool is_constant() const;

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace beamcontact
