#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "partlin/errors.hpp"

namespace partlin {

// A scalar function of t defined by an expression over the grammar
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := number | 't' | func '(' expr ')' | '(' expr ')' | factor '^' integer
//   func   := sin | cos | exp | log
//
// Numbers are decimal with optional exponent. A leading '+'/'-' on a factor
// is accepted as unary sign. Evaluation is deterministic; log of a
// nonpositive argument and division by zero raise DomainError.
class TimeFunction {
public:
    TimeFunction(); // the zero function
    explicit TimeFunction(const std::string& expression,
                          double domain_lo = -std::numeric_limits<double>::infinity(),
                          double domain_hi = std::numeric_limits<double>::infinity());

    static TimeFunction constant(double value);

    double eval(double t) const;
    double operator()(double t) const { return eval(t); }

    const std::string& expression() const { return expr_text_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }

    // True when the expression tree is the literal constant `value`.
    bool is_constant(double* value = nullptr) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string expr_text_;
    double domain_lo_;
    double domain_hi_;
};

// Free-function form used throughout the tests.
inline double eval_time_function(const TimeFunction& f, double t) { return f.eval(t); }

} // namespace partlin
