#ifndef OTTO_BREAKDOWN_HPP
#define OTTO_BREAKDOWN_HPP

#include <functional>
#include <vector>

#include "otto/adiabaticity.hpp"
#include "otto/thermo.hpp"

// Breakdown of cooling under nonadiabatic driving: the critical
// adiabaticity threshold, analytic estimates of the minimal driving time
// for the two linear protocol families, and exact numeric root-finding of
// the critical time for arbitrary families.

namespace otto {

enum class BreakdownMethod { AnalyticLinear, AnalyticLinearSquared, NumericRootFind };

struct BreakdownPoint {
    double q_star_critical = 1.0;
    double t0_critical = 0.0;
    BreakdownMethod method = BreakdownMethod::NumericRootFind;
    /// True at and past the Carnot point omega_1/omega_2 <= T_1/T_2, where
    /// the critical time diverges; t0_critical is then +infinity.
    bool diverged = false;
};

/// Largest expansion-stroke Q*_2 before heat reversal:
/// coth(beta_1 hbar omega_1 / 2) / coth(beta_2 hbar omega_2 / 2).
double critical_qstar(const CycleConfig& cfg, const ReservoirPair& res);

/// Analytic minimal driving time for the ramp linear in omega.
BreakdownPoint critical_time_linear(const CycleConfig& cfg, const ReservoirPair& res);

/// Analytic minimal driving time for the ramp linear in omega^2.
BreakdownPoint critical_time_linear_squared(const CycleConfig& cfg,
                                            const ReservoirPair& res);

/// Expansion-stroke protocol (omega_2 -> omega_1) for a candidate duration.
using ProtocolFamily = std::function<FrequencyProtocol(double t0)>;

/// One probe of the geometric scan, exposed for inspection since Q*(t0)
/// oscillates and cooling can revive in windows above the smallest root.
struct ScanSample {
    double t0 = 0.0;
    double q_star = 0.0;
};

/// Smallest t0 with Q*_2(t0) equal to the critical threshold, located by a
/// geometric scan over t0 in {2^-20, ..., 2^20}/omega_1 and refined by
/// bisection to the requested relative width.  Throws std::runtime_error
/// when no bracket exists within the scan range.
BreakdownPoint critical_time_numeric(const ProtocolFamily& family,
                                     const CycleConfig& cfg, const ReservoirPair& res,
                                     double tolerance = 1e-6,
                                     std::vector<ScanSample>* trace = nullptr);

}  // namespace otto

#endif
