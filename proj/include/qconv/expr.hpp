// Expression trees for defining test functions, plus a small infix parser.
//
// Grammar (text form): infix + - * with unary minus, parentheses, calls
// min(,) max(,) abs() exp() pow(,), numeric literals, and the variables
// supplied by the caller ("x" for n=1, "x1","x2" for n=2; saddle parsing
// adds "y"). Division is accepted only between constant subexpressions and
// is folded at parse time, which keeps evaluation total on the box while
// admitting rational exponents such as pow(abs(x),3/2).
//
// pow applies the exponent to |base|, so -pow(abs(x),3/2) is exactly
// -|x|^(3/2). Evaluation is deterministic: same tree, same point, same bits.

#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qconv/core.hpp"

namespace qconv {

struct ParseError : std::runtime_error {
    int column;  // 1-based
    ParseError(int col, const std::string& msg)
        : std::runtime_error("parse error at column " + std::to_string(col) + ": " + msg),
          column(col) {}
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    enum class Kind {
        Constant,
        Variable,
        Add,
        Sub,
        Mul,
        Min,
        Max,
        Neg,
        Abs,
        Exp,
        Pow,      // |lhs| ^ exponent
        SqNorm,   // |x|^2 over all variables; not reachable from the text grammar
    };

    Kind kind;
    double constant = 0.0;   // Constant, Pow exponent
    int var_index = 0;       // Variable
    ExprPtr lhs, rhs;

    static ExprPtr make_const(double v) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Constant;
        e->constant = v;
        return e;
    }
    static ExprPtr make_var(int idx) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Variable;
        e->var_index = idx;
        return e;
    }
    static ExprPtr make_unary(Kind k, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        return e;
    }
    static ExprPtr make_binary(Kind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
    static ExprPtr make_pow(ExprPtr base, double exponent) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Pow;
        e->lhs = std::move(base);
        e->constant = exponent;
        return e;
    }

    double eval(const Vec& x) const {
        switch (kind) {
            case Kind::Constant: return constant;
            case Kind::Variable: return x[var_index];
            case Kind::Add: return lhs->eval(x) + rhs->eval(x);
            case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
            case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
            case Kind::Min: return std::min(lhs->eval(x), rhs->eval(x));
            case Kind::Max: return std::max(lhs->eval(x), rhs->eval(x));
            case Kind::Neg: return -lhs->eval(x);
            case Kind::Abs: return std::abs(lhs->eval(x));
            case Kind::Exp: return std::exp(lhs->eval(x));
            case Kind::Pow: return std::pow(std::abs(lhs->eval(x)), constant);
            case Kind::SqNorm: {
                double s = 0.0;
                for (int i = 0; i < x.dim; ++i) s += x[i] * x[i];
                return s;
            }
        }
        return 0.0;
    }

    bool is_constant() const {
        switch (kind) {
            case Kind::Constant: return true;
            case Kind::Variable:
            case Kind::SqNorm: return false;
            case Kind::Neg:
            case Kind::Abs:
            case Kind::Exp: return lhs->is_constant();
            case Kind::Pow: return lhs->is_constant();
            default: return lhs->is_constant() && rhs->is_constant();
        }
    }
};

namespace detail {

class ExprParser {
public:
    ExprParser(const std::string& text, std::vector<std::string> vars)
        : text_(text), vars_(std::move(vars)) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError(col(pos_), "unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    const std::string& text_;
    std::vector<std::string> vars_;
    size_t pos_ = 0;
    size_t last_token_pos_ = 0;

    static int col_of(size_t p) { return static_cast<int>(p) + 1; }
    int col(size_t p) const { return col_of(p); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char ch) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            last_token_pos_ = pos_;
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail_here(const std::string& msg) {
        skip_ws();
        // At end of input, report the last consumed token's column so that
        // e.g. "exp(" points at the dangling '('.
        size_t p = pos_ < text_.size() ? pos_ : last_token_pos_;
        throw ParseError(col(p), msg);
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_product();
        for (;;) {
            if (eat('+')) e = Expr::make_binary(Expr::Kind::Add, e, parse_product());
            else if (eat('-')) e = Expr::make_binary(Expr::Kind::Sub, e, parse_product());
            else return e;
        }
    }

    ExprPtr parse_product() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (eat('*')) {
                e = Expr::make_binary(Expr::Kind::Mul, e, parse_unary());
            } else if (peek_is('/')) {
                size_t op_pos = pos_;
                eat('/');
                ExprPtr rhs = parse_unary();
                if (!e->is_constant() || !rhs->is_constant())
                    throw ParseError(col(op_pos), "division is only allowed between constants");
                double d = rhs->eval(Vec{});
                if (d == 0.0) throw ParseError(col(op_pos), "division by zero");
                e = Expr::make_const(e->eval(Vec{}) / d);
            } else {
                return e;
            }
        }
    }

    bool peek_is(char ch) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == ch;
    }

    ExprPtr parse_unary() {
        if (eat('-')) return Expr::make_unary(Expr::Kind::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_atom();
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail_here("expected expression");
        char ch = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') return parse_ident();
        if (ch == '(') {
            last_token_pos_ = pos_;
            ++pos_;
            ExprPtr e = parse_sum();
            if (!eat(')')) fail_here("expected ')'");
            return e;
        }
        throw ParseError(col(pos_), "unexpected character '" + std::string(1, ch) + "'");
    }

    ExprPtr parse_number() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // "2e" is the number 2 followed by an identifier
            }
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
            throw ParseError(col(start), "malformed number");
        last_token_pos_ = start;
        try {
            return Expr::make_const(std::stod(text_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            throw ParseError(col(start), "malformed number");
        }
    }

    ExprPtr parse_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        last_token_pos_ = start;

        for (size_t i = 0; i < vars_.size(); ++i)
            if (name == vars_[i]) return Expr::make_var(static_cast<int>(i));

        if (name == "min" || name == "max" || name == "pow") {
            if (!eat('(')) fail_here("expected '(' after '" + name + "'");
            ExprPtr a = parse_sum();
            if (!eat(',')) fail_here("expected ',' in '" + name + "'");
            ExprPtr b = parse_sum();
            if (!eat(')')) fail_here("expected ')'");
            if (name == "min") return Expr::make_binary(Expr::Kind::Min, a, b);
            if (name == "max") return Expr::make_binary(Expr::Kind::Max, a, b);
            if (!b->is_constant())
                throw ParseError(col(start), "pow exponent must be a constant");
            return Expr::make_pow(a, b->eval(Vec{}));
        }
        if (name == "abs" || name == "exp") {
            if (!eat('(')) fail_here("expected '(' after '" + name + "'");
            ExprPtr a = parse_sum();
            if (!eat(')')) fail_here("expected ')'");
            return Expr::make_unary(name == "abs" ? Expr::Kind::Abs : Expr::Kind::Exp, a);
        }
        throw ParseError(col(start), "unknown identifier '" + name + "'");
    }
};

}  // namespace detail

inline std::vector<std::string> default_variables(int dim) {
    if (dim == 1) return {"x"};
    return {"x1", "x2"};
}

inline ExprPtr parse_expression(const std::string& text,
                                const std::vector<std::string>& variables) {
    return detail::ExprParser(text, variables).parse();
}

inline ExprPtr parse_expression(const std::string& text, int dim) {
    return parse_expression(text, default_variables(dim));
}

inline GridFunction sample(const ExprPtr& expr, const Grid& grid) {
    return GridFunction::sample(grid, [&](const Vec& p) { return expr->eval(p); });
}

// Replaces one variable by a constant (used to freeze the y-coordinate of a
// saddle expression before sampling over the x grid).
inline ExprPtr substitute(const ExprPtr& e, int var_index, double value) {
    switch (e->kind) {
        case Expr::Kind::Constant:
        case Expr::Kind::SqNorm: return e;
        case Expr::Kind::Variable:
            return e->var_index == var_index ? Expr::make_const(value) : e;
        case Expr::Kind::Neg:
        case Expr::Kind::Abs:
        case Expr::Kind::Exp:
            return Expr::make_unary(e->kind, substitute(e->lhs, var_index, value));
        case Expr::Kind::Pow:
            return Expr::make_pow(substitute(e->lhs, var_index, value), e->constant);
        default:
            return Expr::make_binary(e->kind, substitute(e->lhs, var_index, value),
                                     substitute(e->rhs, var_index, value));
    }
}

// Named expressions used throughout the test corpus and the CLI; values are
// expression texts in the 1-d grammar.
inline const std::map<std::string, std::string>& expression_catalog() {
    static const std::map<std::string, std::string> cat = {
        {"paper.example1.f", "exp(x)"},
        {"paper.example1.g", "-x*x+4"},
        {"paper.kink", "abs(abs(x)-1)"},
        {"paper.pow32", "-pow(abs(x),3/2)"},
    };
    return cat;
}

}  // namespace qconv
