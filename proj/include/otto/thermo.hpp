#ifndef OTTO_THERMO_HPP
#define OTTO_THERMO_HPP

#include <utility>

// Exact thermodynamic bookkeeping of the four-stroke refrigeration cycle of
// a frequency-modulated harmonic oscillator: corner energies, works, heats,
// coefficient of performance and figure of merit.

namespace otto {

/// Inverse temperatures of the two baths; the cold bath is colder,
/// beta_cold > beta_hot > 0.
struct ReservoirPair {
    double beta_cold = 0.0;
    double beta_hot = 0.0;

    /// Throws std::domain_error if the ordering invariant is violated.
    void validate() const;

    double t_cold(double k_b = 1.0) const { return 1.0 / (k_b * beta_cold); }
    double t_hot(double k_b = 1.0) const { return 1.0 / (k_b * beta_hot); }
};

/// Oscillator frequencies and unit constants of one cycle.
/// omega_2 >= omega_1 > 0; hbar = k_b = 1 by default.
struct CycleConfig {
    double omega_1 = 1.0;
    double omega_2 = 1.0;
    double hbar = 1.0;
    double k_b = 1.0;
    double t_cycle = 1.0;

    void validate() const;
};

/// Mean oscillator energies at the four cycle corners.
struct CornerEnergies {
    double e_a = 0.0;  // thermal at (omega_1, beta_cold)
    double e_b = 0.0;  // after compression, factor q1
    double e_c = 0.0;  // thermal at (omega_2, beta_hot)
    double e_d = 0.0;  // after expansion, factor q2
};

/// Works, heats and performance numbers for one parameter point.
struct PerformanceReport {
    double work_in_1 = 0.0;  // compression stroke
    double work_in_3 = 0.0;  // expansion stroke
    double heat_cold = 0.0;  // extracted from the cold bath
    double heat_hot = 0.0;   // exchanged with the hot bath (<= 0 when cooling)
    double cop = 0.0;
    double chi = 0.0;
    bool is_cooling = false;
};

/// coth(x) for x > 0, stable from 1e-12 to ~7e2.
/// Relative error <= 1e-13 over that range.
double coth(double x);

/// Mean energies at the four corners.  q1, q2 are the adiabaticity factors
/// of the compression and expansion strokes (>= 1).
CornerEnergies corner_energies(const CycleConfig& cfg, const ReservoirPair& res,
                               double q1, double q2);

/// Work done on the system during the compression and expansion strokes.
std::pair<double, double> stroke_works(const CornerEnergies& e);

/// Heat extracted from the cold reservoir during the fourth stroke;
/// negative when the cycle has stopped cooling.
double heat_cold(const CornerEnergies& e);

/// Heat exchanged with the hot reservoir, e_c - e_b.
double heat_hot(const CornerEnergies& e);

/// Exact coefficient of performance, valid for any frequency modulation.
/// Throws std::domain_error when the net work input is degenerate.
double cop(const CycleConfig& cfg, const ReservoirPair& res, double q1, double q2);

/// Figure of merit chi = cop * heat_cold / t_cycle.  Non-cooling points
/// (heat_cold < 0) report chi <= 0 so maximizers cannot select them.
double figure_of_merit(const CycleConfig& cfg, const ReservoirPair& res,
                       double q1, double q2);

/// Carnot coefficient of performance beta_hot / (beta_cold - beta_hot).
/// Returns +infinity when the temperatures are equal to within 1e-15 relative.
double carnot_cop(const ReservoirPair& res);

/// Full bookkeeping for one parameter point.
PerformanceReport evaluate_cycle(const CycleConfig& cfg, const ReservoirPair& res,
                                 double q1, double q2);

}  // namespace otto

#endif
