#pragma once

#include <optional>
#include <vector>

#include "partlin/linear_system.hpp"
#include "partlin/quadrature.hpp"

namespace partlin {

struct SpectralInterval {
    double lo = 0.0;
    double hi = 0.0;
    // Dimension of the sum of spectral manifolds decaying faster than this
    // interval (0 for the lowest interval).
    int projector_rank_below = 0;
};

struct ScanMeta {
    double grid_step = 0.0; // 0 on the exact (Bohl) path
    double window_T = 0.0;
    int anchor_count = 0;
    bool approximate = false;
};

struct DichotomySpectrum {
    // Descending: intervals[0] is the topmost interval.
    std::vector<SpectralInterval> intervals;
    ScanMeta scan_meta;

    int count() const { return static_cast<int>(intervals.size()); }
    double top_hi() const { return intervals.front().hi; }
    double bottom_lo() const { return intervals.back().lo; }
};

struct EDWitness {
    double anchor = 0.0;
    double window = 0.0;
};

struct EDReport {
    double gamma = 0.0;
    bool admits = false;
    double K_est = 1.0;
    double alpha_est = 0.0; // > 0 when admits
    int projector_rank = 0; // dimension of the decaying subspace
    EDWitness witness;      // anchor/window where the margin was tightest
};

struct EDScanConfig {
    double window_T = 40.0;
    double alpha0 = 0.03;   // rate dead-band of the finite-horizon ED test
    IntegratorConfig ode;
};

struct BohlConfig {
    double horizon = 200.0;
    double min_window = 20.0;
    double table_step = 0.0;   // 0: auto
    double start_stride = 0.0; // 0: auto (min_window / 50)
};

// Interval of window-averaged growth rates of a scalar coefficient over
// [0, horizon], windows of length >= min_window.
SpectralInterval bohl_interval(const TimeFunction& a, double horizon, double min_window,
                               const BohlConfig& cfg = {});

// Finite-horizon exponential-dichotomy test for the gamma-shifted system,
// via singular values of windowed transition matrices at the given anchors.
EDReport admits_ed(const LinearSystem& A, double gamma, double T,
                   const std::vector<double>& anchors, const EDScanConfig& cfg = {});

struct SpectrumConfig {
    double gamma_lo = -3.0;
    double gamma_hi = 3.0;
    double gamma_step = 0.05;
    double window_T = 40.0;
    double scan_horizon = 60.0;  // anchors stride 5 over [0, horizon - T]
    double anchor_stride = 5.0;
    double alpha0 = 0.03;
    BohlConfig bohl;             // used on the exact diagonal path
    IntegratorConfig ode;
};

// Dichotomy spectrum estimate. Diagonal systems take the exact per-entry
// Bohl path; otherwise the gamma-grid ED scan is used and the result is
// flagged approximate.
DichotomySpectrum dichotomy_spectrum(const LinearSystem& A, const SpectrumConfig& cfg = {});

// Smallest K such that ||Phi(t,s)|| <= K e^{(top_hi+eps)(t-s)} for t >= s and
// ||Phi(t,s)|| <= K e^{(bottom_lo-eps)(t-s)} for t <= s over sampled pairs.
double estimate_k_eps(const LinearSystem& A, double lambda_top_hi, double lambda_bot_lo,
                      double eps, double horizon, const IntegratorConfig& cfg = {});

} // namespace partlin
