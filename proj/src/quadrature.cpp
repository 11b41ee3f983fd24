#include "partlin/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace partlin {

CumulativeIntegral::CumulativeIntegral(const TimeFunction& a, double t0, double t1,
                                       double step_hint)
    : t0_(t0), t1_(t1), fn_(&a) {
    if (!(t1 > t0)) throw ParamError("cumulative table requires t1 > t0");
    double span = t1 - t0;
    double dt = step_hint > 0 ? step_hint : std::min(0.05, span / 64.0);
    size_t cells = static_cast<size_t>(std::ceil(span / dt));
    cells = std::clamp<size_t>(cells, 8, 4000000);
    dt_ = span / static_cast<double>(cells);
    table_.resize(cells + 1);
    samples_.resize(cells + 1);
    table_[0] = 0.0;
    samples_[0] = a.eval(t0);
    for (size_t i = 0; i < cells; ++i) {
        double lo = t0 + dt_ * static_cast<double>(i);
        double mid = lo + 0.5 * dt_;
        double hi = lo + dt_;
        double fhi = a.eval(hi);
        table_[i + 1] = table_[i] + dt_ / 6.0 * (samples_[i] + 4.0 * a.eval(mid) + fhi);
        samples_[i + 1] = fhi;
    }
}

double CumulativeIntegral::value(double t) const {
    if (t < t0_ - 1e-12 || t > t1_ + 1e-12)
        throw DomainError("cumulative table queried outside [t0, t1]");
    t = std::clamp(t, t0_, t1_);
    double u = (t - t0_) / dt_;
    size_t i = std::min(static_cast<size_t>(u), table_.size() - 2);
    double lo = t0_ + dt_ * static_cast<double>(i);
    double frac = t - lo;
    if (frac <= 0.0) return table_[i];
    // Simpson on the partial cell [lo, t].
    double mid = lo + 0.5 * frac;
    return table_[i] + frac / 6.0 * (samples_[i] + 4.0 * fn_->eval(mid) + fn_->eval(t));
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0) throw QuadratureFailure("adaptive quadrature depth exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace partlin
