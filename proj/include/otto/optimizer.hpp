#ifndef OTTO_OPTIMIZER_HPP
#define OTTO_OPTIMIZER_HPP

#include <functional>
#include <optional>
#include <utility>

#include "otto/thermo.hpp"

// Maximization of the figure of merit over the hot-side frequency and the
// coefficient of performance at the maximum: adiabatic closed form, cubic
// optimality equation for weakly nonadiabatic driving, and direct numeric
// maximization for the general case.

namespace otto {

enum class TauRegime { Classical, Quantum, Exact };

/// Energy ratio of the oscillator coupled to the cold vs the hot bath;
/// the optimization is defined for tau in (0, 1).
struct EnergyRatioTau {
    double tau = 0.0;
    TauRegime regime = TauRegime::Exact;
};

enum class OptimizerMethod { AdiabaticClosedForm, CubicRoot, FirstOrder, NumericScan };

struct Optimum {
    double omega_2_opt = 0.0;
    double cop_opt = 0.0;
    double chi_opt = 0.0;
    OptimizerMethod method = OptimizerMethod::AdiabaticClosedForm;
    std::optional<double> y_used;
    /// Set when beta_hot * hbar * omega_2_opt > 0.1, where the
    /// high-temperature forms behind the closed-form routes degrade.
    bool high_frequency_warning = false;
};

/// tau = beta_hot * hbar * omega_1 * coth(beta_cold * hbar * omega_1 / 2) / 2.
/// Throws std::domain_error when tau >= 1.
EnergyRatioTau tau_exact(const CycleConfig& cfg, const ReservoirPair& res);
/// High-temperature limit beta_hot / beta_cold.
EnergyRatioTau tau_classical(const ReservoirPair& res);
/// Low-cold-temperature expansion b2*hbar*w1/2 + b2*hbar*w1*exp(-b1*hbar*w1).
EnergyRatioTau tau_quantum(const CycleConfig& cfg, const ReservoirPair& res);

// tau-level closed forms (shared by the cfg/res entry points and the CLI
// sweeps, where tau is the natural sweep variable).

/// Optimal frequency ratio omega_1/omega_2 = 1 - sqrt(1 - tau).
double adiabatic_optimal_ratio(double tau);
/// COP at maximum figure of merit, adiabatic limit: 1/sqrt(1-tau) - 1.
double adiabatic_cop(double tau);
/// Real root in (0, 1) of the weakly nonadiabatic optimality cubic
///   r^3 - (2+tau)/(1+y) r^2 + 3 tau r - tau^2/(1+y) = 0.
double cubic_optimal_ratio(double tau, double y);
/// High-temperature COP at frequency ratio r with both strokes at Q* = 1+y.
double cop_at_ratio_high_t(double r, double tau, double y);
/// First-order law: adiabatic_cop(tau) - y (2 tau + sqrt(1-tau)) / (tau-1)^2.
double cop_first_order(const EnergyRatioTau& tau, double y);

/// Closed-form optimum in the adiabatic, high-hot-temperature regime.
Optimum optimize_adiabatic(const CycleConfig& cfg, const ReservoirPair& res);

/// Evaluator of the weakly nonadiabatic figure of merit as a function of
/// omega_2 at fixed everything else; y is treated as omega_2-independent.
/// Includes the 1/t_cycle factor.
std::function<double(double)> chi_nonadiabatic(const CycleConfig& cfg,
                                               const ReservoirPair& res, double y);

/// Adiabatic specialization of the figure of merit (y = 0 form), again as
/// a function of omega_2 and including 1/t_cycle.
std::function<double(double)> chi_adiabatic(const CycleConfig& cfg,
                                            const ReservoirPair& res);

/// Optimum from the cubic optimality equation; y in [0, 0.2].
Optimum optimize_cubic(const CycleConfig& cfg, const ReservoirPair& res, double y);

/// Adiabaticity factors (Q*_1, Q*_2) for a candidate hot-side frequency.
using QProvider = std::function<std::pair<double, double>(double omega_2)>;

/// General maximization of the exact figure of merit over omega_2:
/// 256-point log-spaced scan of the bracket followed by golden-section
/// refinement to 1e-8 relative.  Throws std::runtime_error when chi <= 0
/// over the whole bracket (no cooling optimum).
Optimum optimize_numeric(const CycleConfig& cfg, const ReservoirPair& res,
                         const QProvider& q_provider,
                         std::pair<double, double> omega_2_bracket);

/// Default bracket [omega_1 (1+1e-6), omega_1 max(1e3, 10/(1-tau))].
std::pair<double, double> default_omega2_bracket(const CycleConfig& cfg,
                                                 const ReservoirPair& res);

}  // namespace otto

#endif
