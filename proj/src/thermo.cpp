#include "otto/thermo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace otto {

void ReservoirPair::validate() const {
    if (!(beta_hot > 0.0))
        throw std::domain_error("ReservoirPair: beta_hot must be positive");
    if (!(beta_cold > beta_hot))
        throw std::domain_error(
            "ReservoirPair: beta_cold must exceed beta_hot (cold bath colder)");
}

void CycleConfig::validate() const {
    if (!(omega_1 > 0.0) || !(omega_2 > 0.0))
        throw std::domain_error("CycleConfig: frequencies must be positive");
    if (omega_2 < omega_1)
        throw std::domain_error("CycleConfig: omega_2 must not be below omega_1");
    if (!(hbar > 0.0) || !(k_b > 0.0))
        throw std::domain_error("CycleConfig: hbar and k_B must be positive");
    if (!(t_cycle > 0.0))
        throw std::domain_error("CycleConfig: t_cycle must be positive");
}

double coth(double x) {
    if (!(x > 0.0)) throw std::domain_error("coth: argument must be positive");
    // Small arguments: Laurent series avoids cancellation in expm1(2x).
    if (x < 1e-4) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    if (x > 360.0) return 1.0;  // 2/(e^{2x}-1) underflows the last bit
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

CornerEnergies corner_energies(const CycleConfig& cfg, const ReservoirPair& res,
                               double q1, double q2) {
    cfg.validate();
    res.validate();
    if (q1 < 1.0 || q2 < 1.0)
        throw std::domain_error("corner_energies: adiabaticity factors must be >= 1");

    const double c1 = coth(0.5 * res.beta_cold * cfg.hbar * cfg.omega_1);
    const double c2 = coth(0.5 * res.beta_hot * cfg.hbar * cfg.omega_2);

    CornerEnergies e;
    e.e_a = 0.5 * cfg.hbar * cfg.omega_1 * c1;
    e.e_b = 0.5 * cfg.hbar * cfg.omega_2 * q1 * c1;
    e.e_c = 0.5 * cfg.hbar * cfg.omega_2 * c2;
    e.e_d = 0.5 * cfg.hbar * cfg.omega_1 * q2 * c2;
    return e;
}

std::pair<double, double> stroke_works(const CornerEnergies& e) {
    return {e.e_b - e.e_a, e.e_d - e.e_c};
}

double heat_cold(const CornerEnergies& e) { return e.e_a - e.e_d; }

double heat_hot(const CornerEnergies& e) { return e.e_c - e.e_b; }

double cop(const CycleConfig& cfg, const ReservoirPair& res, double q1, double q2) {
    cfg.validate();
    res.validate();
    const double w1 = cfg.omega_1;
    const double w2 = cfg.omega_2;
    const double c1 = coth(0.5 * res.beta_cold * cfg.hbar * w1);
    const double c2 = coth(0.5 * res.beta_hot * cfg.hbar * w2);

    const double num = w1 * (c1 - q2 * c2);
    const double den = (w2 * q1 - w1) * c1 - (w2 - w1 * q2) * c2;
    if (std::abs(den) < 1e-300)
        throw std::domain_error("cop: degenerate cycle, net work input vanishes");
    return num / den;
}

double figure_of_merit(const CycleConfig& cfg, const ReservoirPair& res,
                       double q1, double q2) {
    const CornerEnergies e = corner_energies(cfg, res, q1, q2);
    const double q4 = heat_cold(e);
    if (q4 == 0.0) return 0.0;
    const double v = cop(cfg, res, q1, q2) * q4 / cfg.t_cycle;
    // cop * q4 is a square over the net work, so it would come out positive
    // even past the heat-reversal point; flip the sign there so a maximizer
    // can never prefer a non-cooling cycle.
    return q4 > 0.0 ? v : -std::abs(v);
}

double carnot_cop(const ReservoirPair& res) {
    res.validate();
    const double diff = res.beta_cold - res.beta_hot;
    if (diff / res.beta_cold < 1e-15)
        return std::numeric_limits<double>::infinity();
    return res.beta_hot / diff;
}

PerformanceReport evaluate_cycle(const CycleConfig& cfg, const ReservoirPair& res,
                                 double q1, double q2) {
    const CornerEnergies e = corner_energies(cfg, res, q1, q2);
    PerformanceReport r;
    std::tie(r.work_in_1, r.work_in_3) = stroke_works(e);
    r.heat_cold = heat_cold(e);
    r.heat_hot = heat_hot(e);
    r.is_cooling = r.heat_cold > 0.0;
    const double w = r.work_in_1 + r.work_in_3;
    r.cop = std::abs(w) < 1e-300 ? 0.0 : cop(cfg, res, q1, q2);
    const double raw = r.cop * r.heat_cold / cfg.t_cycle;
    r.chi = r.heat_cold > 0.0 ? raw : -std::abs(raw);
    return r;
}

}  // namespace otto
