#include "partlin/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace partlin {

SpectralInterval bohl_interval(const TimeFunction& a, double horizon, double min_window,
                               const BohlConfig& cfg) {
    if (!(min_window > 0)) throw ParamError("min_window must be positive");
    if (horizon < 2.0 * min_window)
        throw HorizonTooShort("horizon must be at least 2 * min_window");

    double table_step = cfg.table_step > 0 ? cfg.table_step : std::min(0.05, min_window / 64.0);
    CumulativeIntegral F(a, 0.0, horizon, table_step);

    double stride = cfg.start_stride > 0 ? cfg.start_stride : min_window / 50.0;
    double inf = std::numeric_limits<double>::infinity();
    double sup = -inf;

    // Window lengths: min_window, then x1.5 up to the horizon. Short windows
    // dominate the envelope; longer ones catch slow drifts.
    std::vector<double> lengths;
    for (double w = min_window; w <= horizon; w *= 1.5) lengths.push_back(w);
    if (lengths.empty() || lengths.back() < horizon) lengths.push_back(horizon);

    for (double w : lengths) {
        for (double s = 0.0; s + w <= horizon + 1e-9; s += stride) {
            double hi_t = std::min(s + w, horizon);
            double mean = F.integral(s, hi_t) / (hi_t - s);
            inf = std::min(inf, mean);
            sup = std::max(sup, mean);
        }
    }
    SpectralInterval out;
    out.lo = inf;
    out.hi = sup;
    out.projector_rank_below = 0;
    return out;
}

namespace {

struct AnchorData {
    double s = 0.0;
    std::vector<double> taus;                    // partial window lengths
    std::vector<Eigen::VectorXd> sigmas;         // singular values per tau (descending)
};

// Windowed transition data at an anchor, with partial windows for transient
// (K) estimation. One integration sweep per anchor; gamma only rescales.
AnchorData anchor_transition_data(const LinearSystem& A, double s, double T,
                                  const IntegratorConfig& cfg) {
    AnchorData d;
    d.s = s;
    const int n = A.dim();
    Mat acc = Mat::Identity(n, n);
    double prev = s;
    for (int q = 1; q <= 4; ++q) {
        double tq = s + T * (static_cast<double>(q) / 4.0);
        Mat seg = transition_matrix(A, tq, prev, cfg);
        acc = seg * acc;
        Eigen::JacobiSVD<Mat> svd(acc);
        d.taus.push_back(tq - s);
        d.sigmas.push_back(svd.singularValues());
        prev = tq;
    }
    return d;
}

double safe_log(double x) { return std::log(std::max(x, 1e-300)); }

// Growth rates at the full window for one anchor, shifted by gamma.
Eigen::VectorXd full_window_rates(const AnchorData& d, double gamma) {
    const Eigen::VectorXd& sig = d.sigmas.back();
    double T = d.taus.back();
    Eigen::VectorXd r(sig.size());
    for (int i = 0; i < sig.size(); ++i) r[i] = safe_log(sig[i]) / T - gamma;
    return r;
}

struct SplitResult {
    bool admits = false;
    int split = 0;       // number of growing directions
    double margin = 0.0; // min distance of rates to the dead band edges
    int tight_anchor = 0;
};

// A split j is valid when rates 1..j stay >= alpha0 and rates j+1..n stay
// <= -alpha0 at every anchor. Returns the valid split with the best margin.
SplitResult find_uniform_split(const std::vector<AnchorData>& anchors, double gamma,
                               double alpha0) {
    SplitResult best;
    if (anchors.empty()) return best;
    const int n = static_cast<int>(anchors.front().sigmas.back().size());
    for (int j = 0; j <= n; ++j) {
        double margin = std::numeric_limits<double>::infinity();
        int tight = 0;
        bool ok = true;
        for (size_t a = 0; a < anchors.size() && ok; ++a) {
            Eigen::VectorXd r = full_window_rates(anchors[a], gamma);
            for (int i = 0; i < n; ++i) {
                double m = (i < j) ? (r[i] - alpha0) : (-alpha0 - r[i]);
                if (m < 0) {
                    ok = false;
                    break;
                }
                if (m < margin) {
                    margin = m;
                    tight = static_cast<int>(a);
                }
            }
        }
        if (ok && (!best.admits || margin > best.margin)) {
            best.admits = true;
            best.split = j;
            best.margin = margin;
            best.tight_anchor = tight;
        }
    }
    return best;
}

double transient_ratio(const std::vector<AnchorData>& anchors, double gamma) {
    double K = 1.0;
    for (const auto& d : anchors) {
        Eigen::VectorXd rfull = full_window_rates(d, gamma);
        const int n = static_cast<int>(rfull.size());
        for (size_t q = 0; q < d.taus.size(); ++q) {
            double tau = d.taus[q];
            double top = safe_log(d.sigmas[q][0]) / tau - gamma;
            double bot = safe_log(d.sigmas[q][n - 1]) / tau - gamma;
            K = std::max(K, std::exp((top - rfull[0]) * tau));
            K = std::max(K, std::exp((rfull[n - 1] - bot) * tau));
        }
    }
    return K;
}

} // namespace

EDReport admits_ed(const LinearSystem& A, double gamma, double T,
                   const std::vector<double>& anchors, const EDScanConfig& cfg) {
    if (!(T > 0)) throw ParamError("ED window T must be positive");
    if (anchors.empty()) throw ParamError("ED test needs at least one anchor");
    std::vector<AnchorData> data;
    data.reserve(anchors.size());
    for (double s : anchors) data.push_back(anchor_transition_data(A, s, T, cfg.ode));

    EDReport rep;
    rep.gamma = gamma;
    SplitResult sr = find_uniform_split(data, gamma, cfg.alpha0);
    rep.admits = sr.admits;
    if (sr.admits) {
        rep.alpha_est = sr.margin + cfg.alpha0;
        rep.projector_rank = A.dim() - sr.split;
        rep.witness.anchor = data[static_cast<size_t>(sr.tight_anchor)].s;
        rep.witness.window = T;
        rep.K_est = std::max(1.0, transient_ratio(data, gamma));
    } else {
        rep.alpha_est = 0.0;
        rep.projector_rank = 0;
        rep.witness.anchor = data.front().s;
        rep.witness.window = T;
        rep.K_est = std::max(1.0, transient_ratio(data, gamma));
    }
    return rep;
}

namespace {

struct Merged {
    double lo, hi;
    int mult;
};

DichotomySpectrum diagonal_spectrum(const LinearSystem& A, const SpectrumConfig& cfg) {
    const int n = A.dim();
    std::vector<SpectralInterval> raw(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        raw[static_cast<size_t>(i)] =
            bohl_interval(A.entry(i, i), cfg.bohl.horizon, cfg.bohl.min_window, cfg.bohl);

    std::vector<Merged> merged;
    std::vector<size_t> order(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return raw[a].lo < raw[b].lo; });
    for (size_t k : order) {
        if (!merged.empty() && raw[k].lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, raw[k].hi);
            merged.back().mult += 1;
        } else {
            merged.push_back({raw[k].lo, raw[k].hi, 1});
        }
    }

    DichotomySpectrum out;
    int below = 0;
    for (const auto& m : merged) {
        SpectralInterval si;
        si.lo = m.lo;
        si.hi = m.hi;
        si.projector_rank_below = below;
        below += m.mult;
        out.intervals.push_back(si);
    }
    std::reverse(out.intervals.begin(), out.intervals.end()); // descending
    out.scan_meta.grid_step = 0.0;
    out.scan_meta.window_T = cfg.bohl.min_window;
    out.scan_meta.anchor_count = 0;
    out.scan_meta.approximate = false;
    return out;
}

} // namespace

DichotomySpectrum dichotomy_spectrum(const LinearSystem& A, const SpectrumConfig& cfg) {
    if (A.structure() == StructureTag::Diagonal) return diagonal_spectrum(A, cfg);

    if (!(cfg.gamma_step > 0) || !(cfg.gamma_hi > cfg.gamma_lo))
        throw ParamError("bad gamma grid");
    if (cfg.scan_horizon < cfg.window_T)
        throw ParamError("scan horizon shorter than the ED window");

    std::vector<double> anchors;
    for (double s = 0.0; s <= cfg.scan_horizon - cfg.window_T + 1e-9; s += cfg.anchor_stride)
        anchors.push_back(s);
    if (anchors.empty()) anchors.push_back(0.0);

    std::vector<AnchorData> data;
    data.reserve(anchors.size());
    for (double s : anchors)
        data.push_back(anchor_transition_data(A, s, cfg.window_T, cfg.ode));

    const long m = static_cast<long>(std::floor((cfg.gamma_hi - cfg.gamma_lo) / cfg.gamma_step + 1e-9)) + 1;
    std::vector<char> denied(static_cast<size_t>(m), 0);
    std::vector<int> rank_at(static_cast<size_t>(m), 0);
    for (long k = 0; k < m; ++k) {
        double gamma = cfg.gamma_lo + cfg.gamma_step * static_cast<double>(k);
        SplitResult sr = find_uniform_split(data, gamma, cfg.alpha0);
        denied[static_cast<size_t>(k)] = sr.admits ? 0 : 1;
        rank_at[static_cast<size_t>(k)] = sr.admits ? A.dim() - sr.split : -1;
    }

    // Merge denied runs into intervals; boundaries sit at grid midpoints.
    struct Run {
        long first, last;
    };
    std::vector<Run> runs;
    for (long k = 0; k < m; ++k) {
        if (denied[static_cast<size_t>(k)]) {
            if (!runs.empty() && runs.back().last == k - 1)
                runs.back().last = k;
            else
                runs.push_back({k, k});
        }
    }
    if (runs.empty())
        throw GridTooCoarse("no gamma grid point was denied an ED; grid misses the spectrum");
    if (static_cast<int>(runs.size()) > A.dim())
        throw GridTooCoarse("more denied runs than the dimension allows");
    for (size_t i = 0; i + 1 < runs.size(); ++i)
        if (runs[i + 1].first - runs[i].last == 2)
            throw GridTooCoarse("single admitted grid point between denied runs");

    DichotomySpectrum out;
    for (auto it = runs.rbegin(); it != runs.rend(); ++it) { // descending order
        SpectralInterval si;
        si.lo = cfg.gamma_lo + cfg.gamma_step * static_cast<double>(it->first) - 0.5 * cfg.gamma_step;
        si.hi = cfg.gamma_lo + cfg.gamma_step * static_cast<double>(it->last) + 0.5 * cfg.gamma_step;
        // Projector rank in the admitted gap just below the interval.
        si.projector_rank_below = 0;
        for (long k = it->first - 1; k >= 0; --k) {
            if (!denied[static_cast<size_t>(k)]) {
                si.projector_rank_below = rank_at[static_cast<size_t>(k)];
                break;
            }
        }
        out.intervals.push_back(si);
    }
    out.scan_meta.grid_step = cfg.gamma_step;
    out.scan_meta.window_T = cfg.window_T;
    out.scan_meta.anchor_count = static_cast<int>(anchors.size());
    out.scan_meta.approximate = true;
    return out;
}

double estimate_k_eps(const LinearSystem& A, double lambda_top_hi, double lambda_bot_lo,
                      double eps, double horizon, const IntegratorConfig& cfg) {
    if (!(eps > 0) || !(horizon > 0)) throw ParamError("eps and horizon must be positive");
    const int n = A.dim();
    const int N = 24;
    const double dt = horizon / N;

    std::vector<Mat> step(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j)
        step[static_cast<size_t>(j)] =
            transition_matrix(A, dt * (j + 1), dt * j, cfg);

    double K = 1.0;
    for (int i = 0; i < N; ++i) {
        Mat acc = Mat::Identity(n, n);
        for (int j = i; j < N; ++j) {
            acc = step[static_cast<size_t>(j)] * acc; // Phi(t_{j+1}, t_i)
            double span = dt * (j + 1 - i);
            Eigen::JacobiSVD<Mat> svd(acc);
            double smax = svd.singularValues()[0];
            double smin = svd.singularValues()[n - 1];
            // Forward envelope at rate top_hi + eps.
            K = std::max(K, smax * std::exp(-(lambda_top_hi + eps) * span));
            // Backward: ||Phi(t_i, t_{j+1})|| = 1/smin against rate bot_lo - eps
            // over the negative elapsed time -span.
            K = std::max(K, (1.0 / std::max(smin, 1e-300)) *
                                std::exp(-(lambda_bot_lo - eps) * (-span)));
            if (K > 1e6)
                throw EnvelopeViolation(
                    "no envelope constant below 1e6; check the spectrum inputs");
        }
    }
    return K;
}

} // namespace partlin
