#include "fbp/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace fbp {
namespace detail {

enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Call, Piecewise };

enum class Fn { Sin, Cos, Exp, Cosh, Sinh, Tanh, Sqrt, Abs };

struct ExprNode {
    Kind kind;
    double value = 0.0;  // Const payload, or Piecewise threshold
    Fn fn = Fn::Sin;
    std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_const(double c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Const;
    n->value = c;
    return n;
}

NodePtr make_call(Fn f, NodePtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Call;
    n->fn = f;
    n->a = std::move(a);
    return n;
}

NodePtr make_piecewise(double threshold, NodePtr left, NodePtr right) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Piecewise;
    n->value = threshold;
    n->a = std::move(left);
    n->b = std::move(right);
    return n;
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Exp: return "exp";
        case Fn::Cosh: return "cosh";
        case Fn::Sinh: return "sinh";
        case Fn::Tanh: return "tanh";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
    }
    return "?";
}

bool lookup_fn(std::string_view name, Fn& out) {
    static constexpr std::pair<std::string_view, Fn> table[] = {
        {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"exp", Fn::Exp},
        {"cosh", Fn::Cosh}, {"sinh", Fn::Sinh}, {"tanh", Fn::Tanh},
        {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs},
    };
    for (auto [n, f] : table)
        if (n == name) {
            out = f;
            return true;
        }
    return false;
}

double eval_node(const ExprNode& n, double x) {
    switch (n.kind) {
        case Kind::Const: return n.value;
        case Kind::Var: return x;
        case Kind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Kind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Kind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Kind::Div: {
            const double den = eval_node(*n.b, x);
            if (den == 0.0) throw DomainError("division by zero");
            return eval_node(*n.a, x) / den;
        }
        case Kind::Pow: {
            const double base = eval_node(*n.a, x);
            const double expo = eval_node(*n.b, x);
            const double r = std::pow(base, expo);
            if (std::isnan(r)) throw DomainError("pow produced NaN");
            return r;
        }
        case Kind::Neg: return -eval_node(*n.a, x);
        case Kind::Call: {
            const double a = eval_node(*n.a, x);
            switch (n.fn) {
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Exp: return std::exp(a);
                case Fn::Cosh: return std::cosh(a);
                case Fn::Sinh: return std::sinh(a);
                case Fn::Tanh: return std::tanh(a);
                case Fn::Sqrt:
                    if (a < 0.0) throw DomainError("sqrt of negative value");
                    return std::sqrt(a);
                case Fn::Abs: return std::fabs(a);
            }
            throw DomainError("bad function node");
        }
        case Kind::Piecewise:
            // left-closed: left branch applies at the threshold itself
            return x <= n.value ? eval_node(*n.a, x) : eval_node(*n.b, x);
    }
    throw DomainError("bad expression node");
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void render_node(const ExprNode& n, const std::string& var, std::string& out) {
    switch (n.kind) {
        case Kind::Const:
            if (n.value < 0) {
                out += '(';
                out += fmt_num(n.value);
                out += ')';
            } else {
                out += fmt_num(n.value);
            }
            return;
        case Kind::Var: out += var; return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div:
        case Kind::Pow: {
            const char op = n.kind == Kind::Add   ? '+'
                            : n.kind == Kind::Sub ? '-'
                            : n.kind == Kind::Mul ? '*'
                            : n.kind == Kind::Div ? '/'
                                                  : '^';
            out += '(';
            render_node(*n.a, var, out);
            out += ' ';
            out += op;
            out += ' ';
            render_node(*n.b, var, out);
            out += ')';
            return;
        }
        case Kind::Neg:
            out += "(-";
            render_node(*n.a, var, out);
            out += ')';
            return;
        case Kind::Call:
            out += fn_name(n.fn);
            out += '(';
            render_node(*n.a, var, out);
            out += ')';
            return;
        case Kind::Piecewise:
            out += "piecewise(";
            out += fmt_num(n.value);
            out += ", ";
            render_node(*n.a, var, out);
            out += ", ";
            render_node(*n.b, var, out);
            out += ')';
            return;
    }
}

bool node_has_var(const ExprNode& n) {
    if (n.kind == Kind::Var) return true;
    if (n.a && node_has_var(*n.a)) return true;
    if (n.b && node_has_var(*n.b)) return true;
    return false;
}

NodePtr substitute(const NodePtr& n, const NodePtr& replacement) {
    if (!n) return nullptr;
    if (n->kind == Kind::Var) return replacement;
    if (!n->a && !n->b) return n;
    auto copy = std::make_shared<ExprNode>(*n);
    copy->a = substitute(n->a, replacement);
    copy->b = substitute(n->b, replacement);
    return copy;
}

// Recursive-descent parser. Keeps byte positions for error messages.
class Parser {
  public:
    Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty expression");
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            throw SyntaxError(pos_, "unexpected trailing input");
        return e;
    }

  private:
    std::string_view text_;
    std::string_view var_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool eat(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!eat(c)) throw SyntaxError(pos_, std::string("expected '") + c + "' " + what);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = make(Kind::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = make(Kind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = make(Kind::Mul, lhs, parse_unary());
            else if (eat('/'))
                lhs = make(Kind::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make(Kind::Neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) return make(Kind::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        double v = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [next, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) throw SyntaxError(pos_, "malformed number");
        pos_ += static_cast<std::size_t>(next - begin);
        return make_const(v);
    }

    NodePtr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name == var_) return make(Kind::Var);
        if (name == "pi") return make_const(3.14159265358979323846);

        if (name == "pow") {
            expect('(', "after pow");
            NodePtr a = parse_expr();
            expect(',', "between pow arguments");
            NodePtr b = parse_expr();
            expect(')', "to close pow");
            return make(Kind::Pow, a, b);
        }
        if (name == "piecewise") {
            expect('(', "after piecewise");
            const std::size_t thr_pos = pos_;
            NodePtr thr = parse_expr();
            if (node_has_var(*thr))
                throw SyntaxError(thr_pos, "piecewise threshold must be a constant expression");
            expect(',', "between piecewise arguments");
            NodePtr left = parse_expr();
            expect(',', "between piecewise arguments");
            NodePtr right = parse_expr();
            expect(')', "to close piecewise");
            return make_piecewise(eval_node(*thr, 0.0), left, right);
        }

        Fn f;
        if (lookup_fn(name, f)) {
            expect('(', "after function name");
            NodePtr a = parse_expr();
            expect(')', "to close function call");
            return make_call(f, a);
        }
        throw UnknownIdentifier(start, std::string(name));
    }
};

}  // namespace
}  // namespace detail

using detail::Kind;
using detail::NodePtr;

Expr Expr::parse(std::string_view text, std::string_view variable) {
    detail::Parser p(text, variable);
    return Expr(p.run(), std::string(variable));
}

Expr Expr::constant(double c) { return Expr(detail::make_const(c), "t"); }

Expr Expr::variable(std::string name) {
    return Expr(detail::make(Kind::Var), std::move(name));
}

static const NodePtr& need(const NodePtr& p) {
    if (!p) throw InvalidInput("empty expression operand");
    return p;
}

#define FBP_EXPR_BINOP(fname, kind)                                         \
    Expr Expr::fname(Expr a, Expr b) {                                      \
        std::string v = a.depends_on_variable() ? a.var_name_ : b.var_name_; \
        return Expr(detail::make(kind, need(a.root_), need(b.root_)),       \
                    std::move(v));                                          \
    }

FBP_EXPR_BINOP(add, Kind::Add)
FBP_EXPR_BINOP(sub, Kind::Sub)
FBP_EXPR_BINOP(mul, Kind::Mul)
FBP_EXPR_BINOP(div, Kind::Div)
FBP_EXPR_BINOP(pow, Kind::Pow)
#undef FBP_EXPR_BINOP

Expr Expr::neg(Expr a) {
    std::string v = a.var_name_;
    return Expr(detail::make(Kind::Neg, need(a.root_)), std::move(v));
}

Expr Expr::call(const std::string& fn, Expr arg) {
    detail::Fn f;
    if (!detail::lookup_fn(fn, f)) throw InvalidInput("unknown function '" + fn + "'");
    return Expr(detail::make_call(f, need(arg.root_)), arg.var_name_);
}

Expr Expr::piecewise(double threshold, Expr left, Expr right) {
    std::string v = left.depends_on_variable() ? left.var_name_ : right.var_name_;
    return Expr(detail::make_piecewise(threshold, need(left.root_), need(right.root_)),
                std::move(v));
}

double Expr::eval(double x) const {
    if (!root_) throw InvalidInput("evaluating empty expression");
    return detail::eval_node(*root_, x);
}

std::string Expr::render() const {
    if (!root_) throw InvalidInput("rendering empty expression");
    std::string out;
    detail::render_node(*root_, var_name_, out);
    return out;
}

Expr Expr::compose(const Expr& inner) const {
    if (!root_ || !inner.root_) throw InvalidInput("compose on empty expression");
    return Expr(detail::substitute(root_, inner.root_), inner.var_name_);
}

bool Expr::depends_on_variable() const {
    return root_ && detail::node_has_var(*root_);
}

double numeric_derivative(const Expr& e, double x, int order, double h, DiffSide side) {
    if (!(h > 0.0)) throw InvalidInput("numeric_derivative needs h > 0");
    auto f = [&e](double v) { return e.eval(v); };
    if (order == 1) {
        switch (side) {
            case DiffSide::central: return (f(x + h) - f(x - h)) / (2.0 * h);
            case DiffSide::right: return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2.0 * h);
            case DiffSide::left: return (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (2.0 * h);
        }
    }
    if (order == 2) {
        switch (side) {
            case DiffSide::central: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            case DiffSide::right:
                return (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2 * h) - f(x + 3 * h)) / (h * h);
            case DiffSide::left:
                return (2.0 * f(x) - 5.0 * f(x - h) + 4.0 * f(x - 2 * h) - f(x - 3 * h)) / (h * h);
        }
    }
    throw InvalidInput("numeric_derivative supports orders 1 and 2");
}

}  // namespace fbp
