#include "partlin/time_function.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace partlin {

namespace {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Log, PowInt };

} // namespace

struct TimeFunction::Node {
    Op op = Op::Const;
    double value = 0.0;   // Op::Const
    long exponent = 0;    // Op::PowInt
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const TimeFunction::Node>;
using Node = TimeFunction::Node;

NodePtr make_node(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression");
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected input at position " + std::to_string(pos_) +
                             " in '" + text_ + "'");
        return e;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr e;
        // Optional leading sign of the first term.
        if (consume('-')) {
            e = make_node(Op::Neg, parse_term());
        } else {
            consume('+');
            e = parse_term();
        }
        for (;;) {
            if (consume('+')) {
                e = make_node(Op::Add, e, parse_term());
            } else if (consume('-')) {
                e = make_node(Op::Sub, e, parse_term());
            } else {
                return e;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_factor();
        for (;;) {
            if (consume('*')) {
                e = make_node(Op::Mul, e, parse_factor());
            } else if (consume('/')) {
                e = make_node(Op::Div, e, parse_factor());
            } else {
                return e;
            }
        }
    }

    NodePtr parse_factor() {
        if (consume('-')) return make_node(Op::Neg, parse_factor());
        if (consume('+')) return parse_factor();
        NodePtr e = parse_primary();
        while (consume('^')) {
            long k = parse_integer();
            auto n = std::make_shared<Node>();
            n->op = Op::PowInt;
            n->exponent = k;
            n->a = e;
            e = n;
        }
        return e;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!consume(')')) throw ParseError("missing ')' in '" + text_ + "'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "t") return make_node(Op::Var);
            Op op;
            if (name == "sin") op = Op::Sin;
            else if (name == "cos") op = Op::Cos;
            else if (name == "exp") op = Op::Exp;
            else if (name == "log") op = Op::Log;
            else throw ParseError("unknown identifier '" + name + "'");
            if (!consume('(')) throw ParseError("expected '(' after '" + name + "'");
            NodePtr arg = parse_expr();
            if (!consume(')')) throw ParseError("missing ')' after argument of '" + name + "'");
            return make_node(op, arg);
        }
        throw ParseError(std::string("unexpected character '") + c + "' in '" + text_ + "'");
    }

    NodePtr parse_number() {
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
                pos_ = mark; // not an exponent after all
            }
        }
        std::string tok = text_.substr(start, pos_ - start);
        if (tok.empty() || tok == ".") throw ParseError("malformed number in '" + text_ + "'");
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) throw ParseError("malformed number '" + tok + "'");
        return make_const(v);
    }

    long parse_integer() {
        skip_ws();
        bool neg = false;
        if (consume('-')) neg = true;
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer exponent after '^'");
        long v = std::strtol(text_.substr(start, pos_ - start).c_str(), nullptr, 10);
        return neg ? -v : v;
    }
};

double eval_node(const Node& n, double t) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return t;
        case Op::Add: return eval_node(*n.a, t) + eval_node(*n.b, t);
        case Op::Sub: return eval_node(*n.a, t) - eval_node(*n.b, t);
        case Op::Mul: return eval_node(*n.a, t) * eval_node(*n.b, t);
        case Op::Div: {
            double num = eval_node(*n.a, t);
            double den = eval_node(*n.b, t);
            if (den == 0.0) throw DomainError("division by zero at t=" + std::to_string(t));
            return num / den;
        }
        case Op::Neg: return -eval_node(*n.a, t);
        case Op::Sin: return std::sin(eval_node(*n.a, t));
        case Op::Cos: return std::cos(eval_node(*n.a, t));
        case Op::Exp: return std::exp(eval_node(*n.a, t));
        case Op::Log: {
            double arg = eval_node(*n.a, t);
            if (arg <= 0.0)
                throw DomainError("log of nonpositive argument at t=" + std::to_string(t));
            return std::log(arg);
        }
        case Op::PowInt: {
            double base = eval_node(*n.a, t);
            long k = n.exponent;
            if (k < 0) {
                if (base == 0.0) throw DomainError("zero raised to negative power");
                return 1.0 / std::pow(base, static_cast<double>(-k));
            }
            // Integer powers by repeated multiplication keep 0^0 = 1 and stay exact
            // for small exponents.
            double r = 1.0;
            for (long i = 0; i < k; ++i) r *= base;
            return r;
        }
    }
    throw Error("corrupt expression node");
}

} // namespace

TimeFunction::TimeFunction()
    : root_(make_const(0.0)),
      expr_text_("0"),
      domain_lo_(-std::numeric_limits<double>::infinity()),
      domain_hi_(std::numeric_limits<double>::infinity()) {}

TimeFunction::TimeFunction(const std::string& expression, double domain_lo, double domain_hi)
    : expr_text_(expression), domain_lo_(domain_lo), domain_hi_(domain_hi) {
    Parser p(expression);
    root_ = p.parse();
}

TimeFunction TimeFunction::constant(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    TimeFunction f;
    f.root_ = make_const(value);
    f.expr_text_ = buf;
    return f;
}

double TimeFunction::eval(double t) const {
    if (t < domain_lo_ || t > domain_hi_)
        throw DomainError("t=" + std::to_string(t) + " outside declared domain of '" +
                          expr_text_ + "'");
    return eval_node(*root_, t);
}

bool TimeFunction::is_constant(double* value) const {
    if (root_->op != Op::Const) return false;
    if (value) *value = root_->value;
    return true;
}

} // namespace partlin
