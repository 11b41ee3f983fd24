#pragma once

#include <string>
#include <vector>

#include "partlin/spectrum.hpp"

namespace partlin {

struct GapParams {
    double eps = 0.001;  // epsilon of the envelope estimates
    double delta = 0.05; // declared sup bound on the perturbation rows
    int l = 1;           // stage order, 1 <= l <= n-1
    int m = 0;           // order budget, m >= n (0: use n)
    int k = 1;           // smoothness order
    int n = 0;           // dimension / number of spectral intervals

    int budget_m() const { return m > 0 ? m : n; }
};

struct GapClause {
    std::string name;
    double lhs = 0.0;         // worst-case endpoint substitution
    std::string relation;     // "< 0" or similar, human readable
    bool satisfied = false;
    double lhs_lenient = 0.0; // most favorable endpoint substitution
    bool has_lenient = false;
};

struct GapReport {
    int condition_id = 0;
    std::vector<GapClause> clauses;   // gate overall
    std::vector<GapClause> advisory;  // informational probes, not gating
    bool overall = false;
};

// Evaluate Condition 1, 2, 3 or 4 against a spectrum. Ambiguous interval
// endpoints are substituted worst-case (upper where the coefficient is
// positive, lower where subtracted); the lenient reading is reported
// alongside for diagnosis. Condition 2's two textual readings are both
// evaluated and both gate. Condition 4 carries advisory probes checking
// that Conditions 1-3 hold at eps = delta = 0 for every stage order.
GapReport check_condition(int id, const DichotomySpectrum& spectrum, const GapParams& params);

struct EnvelopeCheckResult {
    bool ok = true;
    double worst_s = 0.0;
    double worst_t = 0.0;
    double worst_excess = 0.0; // log-scale violation magnitude
    explicit operator bool() const { return ok; }
};

// Two-sided envelope check for a scalar coefficient:
//   (1/K) e^{(lo-eps)(t-s)} <= exp(int_s^t a) <= K e^{(hi+eps)(t-s)}
// over sampled t >= s in [0, horizon].
EnvelopeCheckResult scalar_envelope_check(const TimeFunction& a, const SpectralInterval& interval,
                                          double eps, double K, double horizon);

} // namespace partlin
