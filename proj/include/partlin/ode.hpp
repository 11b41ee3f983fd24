#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "partlin/errors.hpp"

namespace partlin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A nonautonomous vector field f(t, x). Implementations must be pure:
// eval depends only on (t, x), so all solver entry points are safe to
// call concurrently.
class VectorField {
public:
    virtual ~VectorField() = default;
    virtual int dim() const = 0;
    virtual void eval(double t, const Vec& x, Vec& out) const = 0;

    Vec eval(double t, const Vec& x) const {
        Vec out(dim());
        eval(t, x, out);
        return out;
    }

    // Spatial Jacobian. The default is a central finite difference with
    // step 1e-6 * max(1, |x_j|) per coordinate.
    virtual Mat jacobian(double t, const Vec& x) const;
};

// Vector field backed by a callable; convenient in tests.
class FunctionField : public VectorField {
public:
    using Fn = std::function<void(double, const Vec&, Vec&)>;
    FunctionField(int n, Fn fn) : n_(n), fn_(std::move(fn)) {}
    int dim() const override { return n_; }
    void eval(double t, const Vec& x, Vec& out) const override { fn_(t, x, out); }

private:
    int n_;
    Fn fn_;
};

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1.0;
    int method_order = 5;     // 4 or 5: which member of the embedded pair advances
    double blowup_cap = 1e8;  // sup-norm cap before BlowUp is raised
    long max_steps = 2000000;
};

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    double max_error_estimate = 0.0; // largest accepted scaled local error
};

// Samples of one solution, in strictly increasing time order regardless of
// the direction of integration.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    IntegratorStats meta;
    double start_time = 0.0; // s as requested
    double end_time = 0.0;   // t as requested

    const Vec& final_state() const;
    // Piecewise-linear sample lookup (for reporting only).
    Vec state_at(double t) const;
};

// Adaptive Dormand-Prince 5(4) from s to t; t < s integrates the
// time-reversed field so one code path serves both directions.
Trajectory integrate_ivp(const VectorField& field, double s, double t, const Vec& x0,
                         const IntegratorConfig& cfg = {});

// Final state only.
Vec flow(const VectorField& field, double s, double t, const Vec& x0,
         const IntegratorConfig& cfg = {});

// D_x phi(t, s, x0) via the variational equation along the trajectory,
// integrated together with the base solution. For linear fields this is the
// transition matrix, independent of x0.
Mat variational_solution(const VectorField& field, double s, double t, const Vec& x0,
                         const IntegratorConfig& cfg = {});

// Flow and variational matrix in one solve.
void flow_with_variational(const VectorField& field, double s, double t, const Vec& x0,
                           Vec& x_out, Mat& dphi_out, const IntegratorConfig& cfg = {});

} // namespace partlin
