#include "otto/breakdown.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otto {

namespace {

// coth(b1 w1 hbar/2) - coth(b2 w2 hbar/2); positive exactly when a cooling
// regime exists at some driving speed.
double coth_gap(const CycleConfig& cfg, const ReservoirPair& res) {
    return coth(0.5 * res.beta_cold * cfg.hbar * cfg.omega_1) -
           coth(0.5 * res.beta_hot * cfg.hbar * cfg.omega_2);
}

// The heat-reversal threshold is a statement about the expansion stroke
// alone, so the usual cold-is-colder ordering is not required here; only
// positivity of both inverse temperatures.
void check_baths(const ReservoirPair& res) {
    if (!(res.beta_cold > 0.0) || !(res.beta_hot > 0.0))
        throw std::domain_error("breakdown: inverse temperatures must be positive");
}

}  // namespace

double critical_qstar(const CycleConfig& cfg, const ReservoirPair& res) {
    cfg.validate();
    check_baths(res);
    return coth(0.5 * res.beta_cold * cfg.hbar * cfg.omega_1) /
           coth(0.5 * res.beta_hot * cfg.hbar * cfg.omega_2);
}

BreakdownPoint critical_time_linear(const CycleConfig& cfg, const ReservoirPair& res) {
    cfg.validate();
    check_baths(res);
    BreakdownPoint bp;
    bp.method = BreakdownMethod::AnalyticLinear;
    bp.q_star_critical = critical_qstar(cfg, res);
    const double gap = coth_gap(cfg, res);
    if (gap <= 0.0) {
        bp.diverged = true;
        bp.t0_critical = std::numeric_limits<double>::infinity();
        return bp;
    }
    const double dw = cfg.omega_2 - cfg.omega_1;
    const double c2 = coth(0.5 * res.beta_hot * cfg.hbar * cfg.omega_2);
    bp.t0_critical = std::sqrt(dw * dw * c2 / (8.0 * std::pow(cfg.omega_2, 4) * gap));
    return bp;
}

BreakdownPoint critical_time_linear_squared(const CycleConfig& cfg,
                                            const ReservoirPair& res) {
    cfg.validate();
    check_baths(res);
    BreakdownPoint bp;
    bp.method = BreakdownMethod::AnalyticLinearSquared;
    bp.q_star_critical = critical_qstar(cfg, res);
    const double gap = coth_gap(cfg, res);
    if (gap <= 0.0) {
        bp.diverged = true;
        bp.t0_critical = std::numeric_limits<double>::infinity();
        return bp;
    }
    const double dw2 = cfg.omega_2 * cfg.omega_2 - cfg.omega_1 * cfg.omega_1;
    const double c2 = coth(0.5 * res.beta_hot * cfg.hbar * cfg.omega_2);
    bp.t0_critical = std::sqrt(dw2 * dw2 * c2 / (32.0 * std::pow(cfg.omega_2, 6) * gap));
    return bp;
}

BreakdownPoint critical_time_numeric(const ProtocolFamily& family,
                                     const CycleConfig& cfg, const ReservoirPair& res,
                                     double tolerance,
                                     std::vector<ScanSample>* trace) {
    cfg.validate();
    check_baths(res);
    if (!(tolerance > 0.0))
        throw std::invalid_argument("critical_time_numeric: tolerance must be positive");

    BreakdownPoint bp;
    bp.method = BreakdownMethod::NumericRootFind;
    bp.q_star_critical = critical_qstar(cfg, res);
    if (coth_gap(cfg, res) <= 0.0) {
        bp.diverged = true;
        bp.t0_critical = std::numeric_limits<double>::infinity();
        return bp;
    }

    const auto q2_of = [&](double t0) {
        const FrequencyProtocol p = family(t0);
        return qstar(p, QstarMode::Auto).q_star;
    };
    const double threshold = bp.q_star_critical;

    // Cooling survives arbitrarily fast driving when even the sudden value
    // stays below the threshold.
    const double w1 = cfg.omega_1;
    const double w2 = cfg.omega_2;
    const double q_sudden = (w1 * w1 + w2 * w2) / (2.0 * w1 * w2);
    if (q_sudden <= threshold) {
        bp.t0_critical = 0.0;
        return bp;
    }

    // Geometric scan for the smallest sign-change bracket.  Q*(t0)
    // oscillates around its envelope, so bisection on the first bracket
    // (rather than Newton) keeps the smallest root.
    double lo = 0.0, hi = 0.0;
    double prev_t = std::ldexp(1.0, -20) / w1;
    double prev_q = q2_of(prev_t);
    if (trace) trace->push_back({prev_t, prev_q});
    for (int k = -19; k <= 20; ++k) {
        const double t0 = std::ldexp(1.0, k) / w1;
        const double q = q2_of(t0);
        if (trace) trace->push_back({t0, q});
        if (prev_q > threshold && q <= threshold) {
            lo = prev_t;
            hi = t0;
            break;
        }
        prev_t = t0;
        prev_q = q;
    }
    if (hi == 0.0) {
        if (prev_q > threshold)
            throw std::runtime_error(
                "critical_time_numeric: Q*_2 stays above the threshold up to 2^20/omega_1");
        // Already below at the smallest probe: the root is effectively 0.
        bp.t0_critical = 0.0;
        return bp;
    }

    while ((hi - lo) > tolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        if (q2_of(mid) > threshold)
            lo = mid;
        else
            hi = mid;
    }
    bp.t0_critical = 0.5 * (lo + hi);
    return bp;
}

}  // namespace otto
