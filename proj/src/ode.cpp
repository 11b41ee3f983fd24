#include "partlin/ode.hpp"

#include <algorithm>
#include <cmath>

namespace partlin {

Mat VectorField::jacobian(double t, const Vec& x) const {
    const int n = dim();
    Mat J(n, n);
    Vec xp = x, xm = x, fp(n), fm(n);
    for (int j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        eval(t, xp, fp);
        eval(t, xm, fm);
        J.col(j) = (fp - fm) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return J;
}

const Vec& Trajectory::final_state() const {
    if (states.empty()) throw Error("empty trajectory");
    return end_time >= start_time ? states.back() : states.front();
}

Vec Trajectory::state_at(double t) const {
    if (states.empty()) throw Error("empty trajectory");
    if (t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t i = static_cast<size_t>(it - times.begin());
    double t0 = times[i - 1], t1 = times[i];
    double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * states[i - 1] + w * states[i];
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct ReversedField : VectorField {
    const VectorField& base;
    explicit ReversedField(const VectorField& f) : base(f) {}
    int dim() const override { return base.dim(); }
    void eval(double t, const Vec& x, Vec& out) const override {
        base.eval(-t, x, out);
        out = -out;
    }
};

double initial_step(const VectorField& f, double t0, const Vec& x0, const Vec& f0,
                    double rel, double abs, double max_step) {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < x0.size(); ++i) {
        double sc = abs + rel * std::abs(x0[i]);
        d0 = std::max(d0, std::abs(x0[i]) / sc);
        d1 = std::max(d1, std::abs(f0[i]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, max_step);
    Vec x1 = x0 + h0 * f0;
    Vec f1(x0.size());
    f.eval(t0 + h0, x1, f1);
    double d2 = 0.0;
    for (int i = 0; i < x0.size(); ++i) {
        double sc = abs + rel * std::abs(x0[i]);
        d2 = std::max(d2, std::abs(f1[i] - f0[i]) / sc);
    }
    d2 /= h0;
    double dm = std::max(d1, d2);
    double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h0 * 1e-3);
    return std::min({100.0 * h0, h1, max_step});
}

Trajectory run_forward(const VectorField& f, double s, double t, const Vec& x0,
                       const IntegratorConfig& cfg) {
    if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0) || !(cfg.max_step > 0))
        throw ParamError("integrator tolerances and max_step must be positive");
    const int n = f.dim();
    if (x0.size() != n) throw ParamError("state dimension mismatch");

    Trajectory traj;
    traj.start_time = s;
    traj.end_time = t;
    traj.times.push_back(s);
    traj.states.push_back(x0);
    if (t == s) return traj;

    Vec y = x0;
    double tc = s;
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), y4(n), tmp(n);
    f.eval(tc, y, k1);
    double h = initial_step(f, tc, y, k1, cfg.rel_tol, cfg.abs_tol, cfg.max_step);
    const bool fsal_ok = (cfg.method_order != 4);
    double err_prev = 1.0;
    bool have_k1 = true;

    while (tc < t) {
        if (traj.meta.steps + traj.meta.rejected >= cfg.max_steps)
            throw StepFailure("step budget exhausted before reaching t");
        h = std::min(h, t - tc);
        if (h < 1e-14 * std::max(1.0, std::abs(tc)))
            throw StepFailure("step size underflow (tolerance unreachable)");

        if (!have_k1) {
            f.eval(tc, y, k1);
            have_k1 = true;
        }
        tmp = y + h * (a21 * k1);
        f.eval(tc + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        f.eval(tc + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f.eval(tc + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f.eval(tc + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f.eval(tc + h, tmp, k6);
        y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f.eval(tc + h, y5, k7);
        y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            double sc = cfg.abs_tol +
                        cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            double e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = std::sqrt(err / n);

        if (!std::isfinite(err)) {
            traj.meta.rejected++;
            h *= 0.2;
            have_k1 = fsal_ok ? have_k1 : false;
            continue;
        }

        if (err <= 1.0) {
            tc += h;
            y = (cfg.method_order == 4) ? y4 : y5;
            if (y.lpNorm<Eigen::Infinity>() > cfg.blowup_cap)
                throw BlowUp("solution norm exceeded blow-up cap");
            traj.times.push_back(tc);
            traj.states.push_back(y);
            traj.meta.steps++;
            traj.meta.max_error_estimate = std::max(traj.meta.max_error_estimate, err);
            if (fsal_ok) {
                k1 = k7;
                have_k1 = true;
            } else {
                have_k1 = false;
            }
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                         std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 5.0);
            h = std::min(h * fac, cfg.max_step);
            err_prev = std::max(err, 1e-10);
        } else {
            traj.meta.rejected++;
            double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            h *= fac;
        }
    }
    return traj;
}

} // namespace

Trajectory integrate_ivp(const VectorField& field, double s, double t, const Vec& x0,
                         const IntegratorConfig& cfg) {
    if (t >= s) return run_forward(field, s, t, x0, cfg);
    // Backward: integrate the time-reversed field forward, then restore the
    // physical time axis (samples re-sorted so times increase).
    ReversedField rev(field);
    Trajectory internal = run_forward(rev, -s, -t, x0, cfg);
    Trajectory traj;
    traj.meta = internal.meta;
    traj.start_time = s;
    traj.end_time = t;
    const size_t m = internal.times.size();
    traj.times.resize(m);
    traj.states.resize(m);
    for (size_t i = 0; i < m; ++i) {
        traj.times[i] = -internal.times[m - 1 - i];
        traj.states[i] = internal.states[m - 1 - i];
    }
    return traj;
}

Vec flow(const VectorField& field, double s, double t, const Vec& x0,
         const IntegratorConfig& cfg) {
    return integrate_ivp(field, s, t, x0, cfg).final_state();
}

namespace {

// Base system plus its variational matrix, flattened column-major.
struct AugmentedVariational : VectorField {
    const VectorField& base;
    explicit AugmentedVariational(const VectorField& f) : base(f) {}
    int dim() const override {
        int n = base.dim();
        return n + n * n;
    }
    void eval(double t, const Vec& z, Vec& out) const override {
        const int n = base.dim();
        Vec x = z.head(n);
        Vec fx(n);
        base.eval(t, x, fx);
        Mat J = base.jacobian(t, x);
        Eigen::Map<const Mat> Y(z.data() + n, n, n);
        Mat dY = J * Y;
        out.head(n) = fx;
        Eigen::Map<Mat>(out.data() + n, n, n) = dY;
    }
};

} // namespace

void flow_with_variational(const VectorField& field, double s, double t, const Vec& x0,
                           Vec& x_out, Mat& dphi_out, const IntegratorConfig& cfg) {
    const int n = field.dim();
    AugmentedVariational aug(field);
    Vec z0(n + n * n);
    z0.head(n) = x0;
    Eigen::Map<Mat>(z0.data() + n, n, n) = Mat::Identity(n, n);
    if (t == s) {
        x_out = x0;
        dphi_out = Mat::Identity(n, n);
        return;
    }
    IntegratorConfig c = cfg;
    c.blowup_cap = std::max(cfg.blowup_cap, 1e12); // variational entries may be large
    Vec zf = flow(aug, s, t, z0, c);
    x_out = zf.head(n);
    dphi_out = Eigen::Map<const Mat>(zf.data() + n, n, n);
}

Mat variational_solution(const VectorField& field, double s, double t, const Vec& x0,
                         const IntegratorConfig& cfg) {
    Vec xf;
    Mat D;
    flow_with_variational(field, s, t, x0, xf, D, cfg);
    return D;
}

} // namespace partlin
