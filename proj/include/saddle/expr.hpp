#pragma once

// Expression trees for user-supplied phase and amplitude functions.
//
// Grammar (whitespace is insignificant):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ('-' | '+') factor | base ('^' integer)?
//   base   := number | name | '(' expr ')' | func '(' expr ')'
//   integer:= ['-'] digits | '(' ['-'] digits ')'
//   number := digits ['.' digits] [('e'|'E') ['+'|'-'] digits] ['i']
//   func   := exp | log | sqrt | sin | cos
//
// `i` is the imaginary unit and `pi` is π. A number immediately followed by
// `i` is an imaginary literal (`3i`, `0.5i`); otherwise multiplication must be
// written with an explicit `*`.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saddle/multiseries.hpp"

namespace saddle {

enum class Op { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt, Sin, Cos };

class Expr {
public:
    struct Node;

    Expr() = default;

    static Expr constant(Complex value);
    static Expr variable(int index);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr unary(Op op, Expr arg);
    static Expr pow(Expr base, int exponent);

    bool valid() const noexcept { return node_ != nullptr; }
    Op op() const;
    Complex value() const;
    int var() const;
    int exponent() const;
    const Expr& lhs() const;  // also the argument of unary nodes and pow
    const Expr& rhs() const;

    const Node* id() const noexcept { return node_.get(); }

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b);

    friend Expr operator+(Expr a, Expr b) { return binary(Op::Add, std::move(a), std::move(b)); }
    friend Expr operator-(Expr a, Expr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
    friend Expr operator*(Expr a, Expr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
    friend Expr operator/(Expr a, Expr b) { return binary(Op::Div, std::move(a), std::move(b)); }
    friend Expr operator-(Expr a) { return unary(Op::Neg, std::move(a)); }

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    Op op = Op::Constant;
    Complex value{};
    int index = 0;  // variable index or integer exponent
    Expr lhs;
    Expr rhs;
};

using Bindings = std::map<std::string, Expr, std::less<>>;

/// Parses `text` over the declared variable names. Names in `bindings` are
/// replaced by their bound sub-expressions (which must use the same
/// variables).
Expr parse(std::string_view text, std::span<const std::string> variables, const Bindings& bindings = {});

/// Fully parenthesised infix form that parses back to the same tree.
std::string print(const Expr& e, std::span<const std::string> variables = {});

/// Largest variable index used, or -1 for a constant expression.
int max_variable_index(const Expr& e);

/// Replaces variable `var` by `replacement`.
Expr substitute(const Expr& e, int var, const Expr& replacement);

/// Direct evaluation; throws SingularPoint on log(0), division by zero and
/// negative powers of zero.
Complex evaluate(const Expr& e, std::span<const Complex> point);

/// Symbolic partial derivative with light constant folding.
Expr derivative(const Expr& e, int var);

struct ExpansionPoint {
    std::vector<Complex> coordinates;
    int order = 2;
};

/// Taylor series of e in the re-centred coordinates u = x - at.coordinates.
/// log and sqrt use the principal branch of their argument's value at the
/// point.
TruncatedSeries taylor(const Expr& e, const ExpansionPoint& at, std::span<const std::string> variables = {});

std::vector<Complex> gradient_at(const Expr& e, std::span<const Complex> point,
                                 std::span<const std::string> variables = {});

/// Flat postfix form of an expression for repeated evaluation in hot loops.
/// Immutable after construction; eval is safe to call concurrently.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    Complex eval(std::span<const Complex> point) const;

private:
    struct Instr {
        Op op;
        int index;
        Complex value;
    };
    std::vector<Instr> code_;
    int max_stack_ = 0;
};

}  // namespace saddle
