#pragma once

#include <functional>
#include <vector>

#include "partlin/errors.hpp"
#include "partlin/time_function.hpp"

namespace partlin {

// Cumulative integral table F(t) = int_{t0}^{t} a(u) du on a uniform grid,
// built with composite Simpson increments. Queries between nodes blend the
// stored values with a local Simpson correction so window averages stay
// accurate for windows much shorter than the table span.
class CumulativeIntegral {
public:
    CumulativeIntegral(const TimeFunction& a, double t0, double t1, double step_hint = 0.0);

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    double step() const { return dt_; }

    // F(t) for t in [t0, t1].
    double value(double t) const;

    // int_s^t a(u) du.
    double integral(double s, double t) const { return value(t) - value(s); }

    size_t nodes() const { return table_.size(); }

private:
    double t0_, t1_, dt_;
    std::vector<double> table_;      // F at nodes
    std::vector<double> samples_;    // a at nodes (for sub-cell correction)
    const TimeFunction* fn_;
};

// Adaptive Simpson quadrature of a callable on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

} // namespace partlin
