#include "saddle/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "saddle/error.hpp"

namespace saddle {

// --------------------------------------------------------------------- Expr

Expr Expr::constant(Complex value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(int index) {
    if (index < 0) throw DimensionMismatch("negative variable index");
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    n->index = index;
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div) {
        throw Error("Expr::binary called with a non-binary operator");
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
    if (op != Op::Neg && op != Op::Exp && op != Op::Log && op != Op::Sqrt && op != Op::Sin && op != Op::Cos) {
        throw Error("Expr::unary called with a non-unary operator");
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(arg);
    return Expr(std::move(n));
}

Expr Expr::pow(Expr base, int exponent) {
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->index = exponent;
    n->lhs = std::move(base);
    return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
Complex Expr::value() const { return node_->value; }
int Expr::var() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op) return false;
    switch (x.op) {
        case Op::Constant:
            return x.value == y.value;
        case Op::Variable:
            return x.index == y.index;
        case Op::Pow:
            return x.index == y.index && x.lhs == y.lhs;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            return x.lhs == y.lhs && x.rhs == y.rhs;
        default:
            return x.lhs == y.lhs;
    }
}

// ------------------------------------------------------------------- parser

namespace {

bool is_function_name(std::string_view name, Op& op) {
    static const std::pair<std::string_view, Op> table[] = {
        {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos}};
    for (const auto& [n, o] : table) {
        if (n == name) {
            op = o;
            return true;
        }
    }
    return false;
}

bool is_reserved(std::string_view name) {
    Op unused;
    return name == "i" || name == "pi" || is_function_name(name, unused);
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> variables, const Bindings& bindings)
        : text_(text), variables_(variables), bindings_(bindings) {}

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "', found end of input");
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+')) {
                e = e + term();
            } else if (accept('-')) {
                e = e - term();
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (accept('*')) {
                e = e * factor();
            } else if (accept('/')) {
                e = e / factor();
            } else {
                return e;
            }
        }
    }

    Expr factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        Expr b = base();
        if (accept('^')) return Expr::pow(std::move(b), integer());
        return b;
    }

    int integer() {
        skip_ws();
        const bool paren = accept('(');
        skip_ws();
        const std::size_t start = pos_;
        bool negative = false;
        if (pos_ < text_.size() && text_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        const std::size_t digits_start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits_start) {
            pos_ = start;
            fail("exponent must be an integer literal");
        }
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                                    std::isalpha(static_cast<unsigned char>(text_[pos_])))) {
            pos_ = start;
            fail("non-integer exponent");
        }
        int value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + digits_start, text_.data() + pos_, value);
        if (ec != std::errc{}) {
            pos_ = start;
            fail("exponent out of range");
        }
        if (paren) expect(')');
        return negative ? -value : value;
    }

    Expr base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        const auto* first = text_.data() + pos_;
        const auto* last = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
        if (ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        // Imaginary literal: digits immediately followed by a lone `i`.
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            (pos_ + 1 >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) ||
                                           text_[pos_ + 1] == '_'))) {
            ++pos_;
            return Expr::constant({0.0, value});
        }
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            pos_ = start;
            fail("implicit multiplication is not allowed; use '*'");
        }
        return Expr::constant(value);
    }

    Expr name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view id = text_.substr(start, pos_ - start);
        Op fn;
        if (is_function_name(id, fn)) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                ++pos_;
                Expr arg = expr();
                expect(')');
                return Expr::unary(fn, std::move(arg));
            }
            pos_ = start;
            fail("function '" + std::string(id) + "' requires an argument in parentheses");
        }
        if (id == "i") return Expr::constant({0.0, 1.0});
        if (id == "pi") return Expr::constant(std::numbers::pi);
        for (std::size_t k = 0; k < variables_.size(); ++k) {
            if (variables_[k] == id) return Expr::variable(static_cast<int>(k));
        }
        if (auto it = bindings_.find(id); it != bindings_.end()) return it->second;
        pos_ = start;
        throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view text_;
    std::span<const std::string> variables_;
    const Bindings& bindings_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> variables, const Bindings& bindings) {
    for (const auto& v : variables) {
        if (is_reserved(v)) throw ParseError("variable name '" + v + "' is reserved", 0);
    }
    return Parser(text, variables, bindings).run();
}

// ------------------------------------------------------------------ printer

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_constant(Complex c) {
    if (c.imag() == 0.0 && !std::signbit(c.real())) return format_double(c.real());
    if (c.real() == 0.0 && !std::signbit(c.real()) && !std::signbit(c.imag())) {
        return format_double(c.imag()) + "i";
    }
    if (c.imag() == 0.0) return "(-" + format_double(-c.real()) + ")";
    std::string re = format_double(std::abs(c.real()));
    std::string im = format_double(std::abs(c.imag())) + "i";
    return std::string("(") + (c.real() < 0 ? "-" : "") + re + (c.imag() < 0 ? " - " : " + ") + im + ")";
}

std::string variable_name(int index, std::span<const std::string> variables) {
    if (index < static_cast<int>(variables.size())) return variables[index];
    return "x" + std::to_string(index);
}

const char* function_name(Op op) {
    switch (op) {
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        default: return "?";
    }
}

}  // namespace

std::string print(const Expr& e, std::span<const std::string> variables) {
    switch (e.op()) {
        case Op::Constant:
            return format_constant(e.value());
        case Op::Variable:
            return variable_name(e.var(), variables);
        case Op::Add:
            return "(" + print(e.lhs(), variables) + " + " + print(e.rhs(), variables) + ")";
        case Op::Sub:
            return "(" + print(e.lhs(), variables) + " - " + print(e.rhs(), variables) + ")";
        case Op::Mul:
            return "(" + print(e.lhs(), variables) + " * " + print(e.rhs(), variables) + ")";
        case Op::Div:
            return "(" + print(e.lhs(), variables) + " / " + print(e.rhs(), variables) + ")";
        case Op::Neg:
            return "(-" + print(e.lhs(), variables) + ")";
        case Op::Pow: {
            std::string b = print(e.lhs(), variables);
            const Op bop = e.lhs().op();
            const bool atomic = bop == Op::Variable || bop == Op::Add || bop == Op::Sub || bop == Op::Mul ||
                                bop == Op::Div || bop == Op::Neg || bop == Op::Exp || bop == Op::Log ||
                                bop == Op::Sqrt || bop == Op::Sin || bop == Op::Cos;
            if (!atomic) b = "(" + b + ")";
            return b + "^" + (e.exponent() < 0 ? "(" + std::to_string(e.exponent()) + ")" : std::to_string(e.exponent()));
        }
        default:
            return std::string(function_name(e.op())) + "(" + print(e.lhs(), variables) + ")";
    }
}

// ---------------------------------------------------------------- utilities

int max_variable_index(const Expr& e) {
    switch (e.op()) {
        case Op::Constant: return -1;
        case Op::Variable: return e.var();
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            return std::max(max_variable_index(e.lhs()), max_variable_index(e.rhs()));
        default:
            return max_variable_index(e.lhs());
    }
}

Expr substitute(const Expr& e, int var, const Expr& replacement) {
    switch (e.op()) {
        case Op::Constant: return e;
        case Op::Variable: return e.var() == var ? replacement : e;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            return Expr::binary(e.op(), substitute(e.lhs(), var, replacement), substitute(e.rhs(), var, replacement));
        case Op::Pow: return Expr::pow(substitute(e.lhs(), var, replacement), e.exponent());
        default: return Expr::unary(e.op(), substitute(e.lhs(), var, replacement));
    }
}

namespace {

Complex ipow(Complex base, int n) {
    Complex result = 1.0;
    int k = n < 0 ? -n : n;
    while (k) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return n < 0 ? 1.0 / result : result;
}

}  // namespace

Complex evaluate(const Expr& e, std::span<const Complex> point) {
    switch (e.op()) {
        case Op::Constant:
            return e.value();
        case Op::Variable:
            if (e.var() >= static_cast<int>(point.size())) throw DimensionMismatch("evaluate: point too short");
            return point[e.var()];
        case Op::Add: return evaluate(e.lhs(), point) + evaluate(e.rhs(), point);
        case Op::Sub: return evaluate(e.lhs(), point) - evaluate(e.rhs(), point);
        case Op::Mul: return evaluate(e.lhs(), point) * evaluate(e.rhs(), point);
        case Op::Div: {
            const Complex den = evaluate(e.rhs(), point);
            if (den == Complex{}) throw SingularPoint("division by zero", print(e));
            return evaluate(e.lhs(), point) / den;
        }
        case Op::Neg: return -evaluate(e.lhs(), point);
        case Op::Pow: {
            const Complex b = evaluate(e.lhs(), point);
            if (e.exponent() < 0 && b == Complex{}) throw SingularPoint("negative power of zero", print(e));
            return ipow(b, e.exponent());
        }
        case Op::Exp: return std::exp(evaluate(e.lhs(), point));
        case Op::Log: {
            const Complex a = evaluate(e.lhs(), point);
            if (a == Complex{}) throw SingularPoint("log of zero", print(e));
            return std::log(a);
        }
        case Op::Sqrt: return std::sqrt(evaluate(e.lhs(), point));
        case Op::Sin: return std::sin(evaluate(e.lhs(), point));
        case Op::Cos: return std::cos(evaluate(e.lhs(), point));
    }
    throw Error("evaluate: unknown operator");
}

// --------------------------------------------------------------- derivative

namespace {

bool is_const(const Expr& e, Complex v) { return e.op() == Op::Constant && e.value() == v; }

Expr add_s(const Expr& a, const Expr& b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return a + b;
}

Expr sub_s(const Expr& a, const Expr& b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return -b;
    return a - b;
}

Expr mul_s(const Expr& a, const Expr& b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return a * b;
}

}  // namespace

Expr derivative(const Expr& e, int var) {
    const Expr zero = Expr::constant(0.0);
    switch (e.op()) {
        case Op::Constant: return zero;
        case Op::Variable: return Expr::constant(e.var() == var ? 1.0 : 0.0);
        case Op::Add: return add_s(derivative(e.lhs(), var), derivative(e.rhs(), var));
        case Op::Sub: return sub_s(derivative(e.lhs(), var), derivative(e.rhs(), var));
        case Op::Mul:
            return add_s(mul_s(derivative(e.lhs(), var), e.rhs()), mul_s(e.lhs(), derivative(e.rhs(), var)));
        case Op::Div: {
            // (u/v)' = u'/v - u v' / v^2
            const Expr du = derivative(e.lhs(), var);
            const Expr dv = derivative(e.rhs(), var);
            Expr first = is_const(du, 0.0) ? zero : du / e.rhs();
            Expr second = is_const(dv, 0.0) ? zero : mul_s(e.lhs(), dv) / Expr::pow(e.rhs(), 2);
            return sub_s(first, second);
        }
        case Op::Neg: {
            const Expr d = derivative(e.lhs(), var);
            return is_const(d, 0.0) ? zero : -d;
        }
        case Op::Pow: {
            const int n = e.exponent();
            if (n == 0) return zero;
            const Expr d = derivative(e.lhs(), var);
            if (is_const(d, 0.0)) return zero;
            Expr p = n - 1 == 1 ? e.lhs() : Expr::pow(e.lhs(), n - 1);
            if (n - 1 == 0) p = Expr::constant(1.0);
            return mul_s(mul_s(Expr::constant(static_cast<double>(n)), p), d);
        }
        case Op::Exp: return mul_s(e, derivative(e.lhs(), var));
        case Op::Log: {
            const Expr d = derivative(e.lhs(), var);
            return is_const(d, 0.0) ? zero : d / e.lhs();
        }
        case Op::Sqrt: {
            const Expr d = derivative(e.lhs(), var);
            return is_const(d, 0.0) ? zero : d / (Expr::constant(2.0) * e);
        }
        case Op::Sin: return mul_s(Expr::unary(Op::Cos, e.lhs()), derivative(e.lhs(), var));
        case Op::Cos: return mul_s(-Expr::unary(Op::Sin, e.lhs()), derivative(e.lhs(), var));
    }
    throw Error("derivative: unknown operator");
}

// ------------------------------------------------------------------- taylor

namespace {

class TaylorBuilder {
public:
    TaylorBuilder(const ExpansionPoint& at, std::span<const std::string> variables)
        : at_(at), variables_(variables), dim_(static_cast<int>(at.coordinates.size())) {}

    TruncatedSeries build(const Expr& e) {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        TruncatedSeries s = compute(e);
        memo_.emplace(e.id(), s);
        return s;
    }

private:
    [[noreturn]] void singular(const std::string& what, const Expr& sub) const {
        throw SingularPoint(what, print(sub, variables_));
    }

    TruncatedSeries compute(const Expr& e) {
        const int n = at_.order;
        switch (e.op()) {
            case Op::Constant:
                return TruncatedSeries::constant(dim_, n, e.value());
            case Op::Variable: {
                if (e.var() >= dim_) throw DimensionMismatch("taylor: variable index outside expansion point");
                TruncatedSeries s = TruncatedSeries::variable(dim_, n, e.var());
                s.accumulate(MultiIndex(dim_), at_.coordinates[e.var()]);
                return s;
            }
            case Op::Add: return build(e.lhs()) + build(e.rhs());
            case Op::Sub: return build(e.lhs()) - build(e.rhs());
            case Op::Mul: return build(e.lhs()) * build(e.rhs());
            case Op::Div: {
                const TruncatedSeries den = build(e.rhs());
                if (den.constant_term() == Complex{}) singular("division by a series vanishing at the point", e);
                return divide(build(e.lhs()), den);
            }
            case Op::Neg: return -build(e.lhs());
            case Op::Pow: return power(e);
            case Op::Exp: return exp_series(build(e.lhs()));
            case Op::Log: {
                const TruncatedSeries a = build(e.lhs());
                if (a.constant_term() == Complex{}) singular("log of a series vanishing at the point", e);
                return log_series(a);
            }
            case Op::Sqrt: {
                const TruncatedSeries a = build(e.lhs());
                if (a.constant_term() == Complex{}) singular("sqrt branch point at the expansion point", e);
                return sqrt_series(a, std::sqrt(a.constant_term()));
            }
            case Op::Sin:
            case Op::Cos: {
                const TruncatedSeries a = build(e.lhs());
                const TruncatedSeries plus = exp_series(scale(a, Complex(0, 1)));
                const TruncatedSeries minus = exp_series(scale(a, Complex(0, -1)));
                if (e.op() == Op::Sin) return scale(plus - minus, 1.0 / Complex(0, 2));
                return scale(plus + minus, 0.5);
            }
        }
        throw Error("taylor: unknown operator");
    }

    TruncatedSeries power(const Expr& e) {
        TruncatedSeries b = build(e.lhs());
        int k = e.exponent();
        if (k < 0) {
            if (b.constant_term() == Complex{}) singular("negative power of a series vanishing at the point", e);
            b = reciprocal(b);
            k = -k;
        }
        TruncatedSeries result = TruncatedSeries::constant(dim_, at_.order, 1.0);
        while (k) {
            if (k & 1) result = result * b;
            k >>= 1;
            if (k) b = b * b;
        }
        return result;
    }

    const ExpansionPoint& at_;
    std::span<const std::string> variables_;
    int dim_;
    std::unordered_map<const Expr::Node*, TruncatedSeries> memo_;
};

}  // namespace

TruncatedSeries taylor(const Expr& e, const ExpansionPoint& at, std::span<const std::string> variables) {
    if (at.coordinates.empty()) throw DimensionMismatch("taylor: empty expansion point");
    if (max_variable_index(e) >= static_cast<int>(at.coordinates.size())) {
        throw DimensionMismatch("taylor: expression uses more variables than the expansion point has");
    }
    return TaylorBuilder(at, variables).build(e);
}

std::vector<Complex> gradient_at(const Expr& e, std::span<const Complex> point,
                                 std::span<const std::string> variables) {
    // Singularities of the function itself are reported even when the
    // derivative expression happens to avoid them.
    try {
        (void)evaluate(e, point);
    } catch (const SingularPoint& err) {
        throw SingularPoint("gradient_at: function not analytic at the point", err.subexpression());
    }
    std::vector<Complex> g;
    for (int j = 0; j < static_cast<int>(point.size()); ++j) {
        const Expr d = derivative(e, j);
        try {
            g.push_back(evaluate(d, point));
        } catch (const SingularPoint& err) {
            throw SingularPoint("gradient_at: derivative singular", print(d, variables));
        }
    }
    return g;
}

// ------------------------------------------------------------- CompiledExpr

namespace {

void emit(const Expr& e, std::vector<std::tuple<Op, int, Complex>>& out) {
    switch (e.op()) {
        case Op::Constant: out.emplace_back(Op::Constant, 0, e.value()); return;
        case Op::Variable: out.emplace_back(Op::Variable, e.var(), Complex{}); return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
            emit(e.lhs(), out);
            emit(e.rhs(), out);
            out.emplace_back(e.op(), 0, Complex{});
            return;
        case Op::Pow:
            emit(e.lhs(), out);
            out.emplace_back(Op::Pow, e.exponent(), Complex{});
            return;
        default:
            emit(e.lhs(), out);
            out.emplace_back(e.op(), 0, Complex{});
            return;
    }
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
    std::vector<std::tuple<Op, int, Complex>> raw;
    emit(e, raw);
    int depth = 0;
    for (const auto& [op, index, value] : raw) {
        code_.push_back({op, index, value});
        if (op == Op::Constant || op == Op::Variable) {
            ++depth;
        } else if (op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div) {
            --depth;
        }
        max_stack_ = std::max(max_stack_, depth);
    }
}

Complex CompiledExpr::eval(std::span<const Complex> point) const {
    constexpr int kInline = 64;
    Complex inline_stack[kInline];
    std::vector<Complex> heap;
    Complex* stack = inline_stack;
    if (max_stack_ > kInline) {
        heap.resize(max_stack_);
        stack = heap.data();
    }
    int top = -1;
    for (const auto& ins : code_) {
        switch (ins.op) {
            case Op::Constant: stack[++top] = ins.value; break;
            case Op::Variable: stack[++top] = point[ins.index]; break;
            case Op::Add: stack[top - 1] += stack[top]; --top; break;
            case Op::Sub: stack[top - 1] -= stack[top]; --top; break;
            case Op::Mul: stack[top - 1] *= stack[top]; --top; break;
            case Op::Div: stack[top - 1] /= stack[top]; --top; break;
            case Op::Neg: stack[top] = -stack[top]; break;
            case Op::Pow: stack[top] = ipow(stack[top], ins.index); break;
            case Op::Exp: stack[top] = std::exp(stack[top]); break;
            case Op::Log: stack[top] = std::log(stack[top]); break;
            case Op::Sqrt: stack[top] = std::sqrt(stack[top]); break;
            case Op::Sin: stack[top] = std::sin(stack[top]); break;
            case Op::Cos: stack[top] = std::cos(stack[top]); break;
        }
    }
    return stack[0];
}

}  // namespace saddle
