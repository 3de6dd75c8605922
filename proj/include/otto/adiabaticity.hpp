#ifndef OTTO_ADIABATICITY_HPP
#define OTTO_ADIABATICITY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

// Adiabaticity parameter Q* of a frequency ramp: closed forms for the
// quasistatic and sudden limits, lowest-order analytic estimates for linear
// ramps, and numerical integration of the classical oscillator equation for
// arbitrary protocols.

namespace otto {

enum class ProtocolKind {
    Quasistatic,
    Sudden,
    LinearOmega,         // omega(t) linear in t
    LinearOmegaSquared,  // omega(t)^2 linear in t
    Tabulated,
};

enum class TableInterp { MonotoneCubic, Linear };

/// Description of omega(t) on one stroke.  Frequencies are strictly
/// positive over the whole path; duration > 0 for every kind except the
/// two limiting ones.
struct FrequencyProtocol {
    ProtocolKind kind = ProtocolKind::Quasistatic;
    double omega_start = 0.0;
    double omega_end = 0.0;
    double duration = 0.0;
    std::vector<std::pair<double, double>> samples;  // (time, frequency)
    TableInterp interp = TableInterp::MonotoneCubic;

    static FrequencyProtocol quasistatic(double w0, double w1);
    static FrequencyProtocol sudden(double w0, double w1);
    static FrequencyProtocol linear(double w0, double w1, double t0);
    static FrequencyProtocol linear_squared(double w0, double w1, double t0);
    static FrequencyProtocol tabulated(std::vector<std::pair<double, double>> pts,
                                       TableInterp interp = TableInterp::MonotoneCubic);
    /// Two-column CSV (time, frequency), header optional, strictly
    /// increasing time starting at 0.
    static FrequencyProtocol from_csv(const std::string& path,
                                      TableInterp interp = TableInterp::MonotoneCubic);

    void validate() const;

    /// omega(t)^2 for t in [0, duration]; used by the integrator.
    double omega_squared(double t) const;

  private:
    mutable std::vector<double> slopes_;  // lazy Hermite slopes for Tabulated
};

enum class QstarMethod { ClosedForm, Perturbative, Numeric };
enum class QstarMode { Auto, ClosedForm, Perturbative, Numeric };

struct AdiabaticityResult {
    double q_star = 1.0;
    QstarMethod method = QstarMethod::ClosedForm;
    /// max |W(t) + 1| over the integration, W the Wronskian of the two
    /// fundamental solutions; 0 for non-numeric methods.
    double wronskian_drift = 0.0;
    /// Lowest-order nonadiabatic parameter (y or y-bar) when the
    /// perturbative route was used; callers should gate on y << 1.
    std::optional<double> y_value;
};

/// Quasistatic -> 1; Sudden -> (w0^2 + w1^2) / (2 w0 w1).
/// Throws std::invalid_argument for other kinds.
AdiabaticityResult qstar_closed_form(const FrequencyProtocol& p);

/// Lowest-order estimates for the linear ramps:
///   LinearOmega:        Q* = 1 + alpha^2 / (8 omega_end^4)
///   LinearOmegaSquared: Q* = 1 + alphabar^2 / (32 omega_end^6)
AdiabaticityResult qstar_perturbative(const FrequencyProtocol& p);

/// Exact Q* from two fundamental solutions of x'' + omega(t)^2 x = 0,
/// integrated with an adaptive embedded Runge-Kutta 5(4) pair.
AdiabaticityResult qstar_numeric(const FrequencyProtocol& p, double tolerance = 1e-11);

/// Dispatch: Auto sends the limiting kinds to the closed forms and
/// everything else to the integrator.
AdiabaticityResult qstar(const FrequencyProtocol& p, QstarMode mode = QstarMode::Auto,
                         double tolerance = 1e-11);

}  // namespace otto

#endif
