#include "otto/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace otto {

namespace {

void check_tau(double tau) {
    if (!(tau > 0.0) || !(tau < 1.0))
        throw std::domain_error("tau must lie in (0, 1) for the optimization");
}

bool high_frequency(const CycleConfig& cfg, const ReservoirPair& res, double omega2) {
    return res.beta_hot * cfg.hbar * omega2 > 0.1;
}

}  // namespace

EnergyRatioTau tau_exact(const CycleConfig& cfg, const ReservoirPair& res) {
    cfg.validate();
    if (!(res.beta_hot >= 0.0) || !(res.beta_cold > res.beta_hot))
        throw std::domain_error("tau_exact: need beta_cold > beta_hot >= 0");
    double tau = 0.0;
    if (res.beta_hot > 0.0) {
        const double x = 0.5 * res.beta_cold * cfg.hbar * cfg.omega_1;
        tau = 0.5 * res.beta_hot * cfg.hbar * cfg.omega_1 * coth(x);
    }
    if (tau >= 1.0)
        throw std::domain_error(
            "tau_exact: tau >= 1, cold bath too close to hot bath at this omega_1");
    return {tau, TauRegime::Exact};
}

EnergyRatioTau tau_classical(const ReservoirPair& res) {
    res.validate();
    return {res.beta_hot / res.beta_cold, TauRegime::Classical};
}

EnergyRatioTau tau_quantum(const CycleConfig& cfg, const ReservoirPair& res) {
    cfg.validate();
    res.validate();
    const double bw1 = res.beta_cold * cfg.hbar * cfg.omega_1;
    const double b2w1 = res.beta_hot * cfg.hbar * cfg.omega_1;
    const double tau = 0.5 * b2w1 + b2w1 * std::exp(-bw1);
    if (tau >= 1.0) throw std::domain_error("tau_quantum: tau >= 1");
    return {tau, TauRegime::Quantum};
}

double adiabatic_optimal_ratio(double tau) {
    check_tau(tau);
    return 1.0 - std::sqrt(1.0 - tau);
}

double adiabatic_cop(double tau) {
    check_tau(tau);
    return 1.0 / std::sqrt(1.0 - tau) - 1.0;
}

double cubic_optimal_ratio(double tau, double y) {
    check_tau(tau);
    if (!(y >= 0.0) || !(y <= 0.2))
        throw std::invalid_argument("cubic_optimal_ratio: y must lie in [0, 0.2]");

    // r^3 + a r^2 + b r + c, r = omega_1/omega_2
    const double a = -(2.0 + tau) / (1.0 + y);
    const double b = 3.0 * tau;
    const double c = -tau * tau / (1.0 + y);

    // Depressed cubic u^3 + p u + q, r = u - a/3.
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = 0.25 * q * q + p * p * p / 27.0;

    std::vector<double> roots;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        roots.push_back(std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s) - a / 3.0);
    } else {
        // Three real roots: trigonometric form.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) -
                            a / 3.0);
    }

    // Keep the root in (0,1); with several candidates take the one closest
    // to the adiabatic optimum.
    const double r_ad = 1.0 - std::sqrt(1.0 - tau);
    double best = -1.0;
    for (double r : roots) {
        if (r > 0.0 && r < 1.0 &&
            (best < 0.0 || std::abs(r - r_ad) < std::abs(best - r_ad)))
            best = r;
    }
    if (best < 0.0)
        throw std::runtime_error(
            "cubic_optimal_ratio: no real root in (0,1); tau or y outside validity");

    for (int it = 0; it < 4; ++it) {  // Newton polish
        const double f = ((best + a) * best + b) * best + c;
        const double df = (3.0 * best + 2.0 * a) * best + b;
        if (df == 0.0) break;
        best -= f / df;
    }
    return best;
}

double cop_at_ratio_high_t(double r, double tau, double y) {
    check_tau(tau);
    if (!(r > 0.0) || !(r < 1.0))
        throw std::domain_error("cop_at_ratio_high_t: ratio must lie in (0,1)");
    const double num = r * (tau - (1.0 + y) * r);
    const double den = (1.0 + y) * tau - r * (1.0 + tau) + (1.0 + y) * r * r;
    return num / den;
}

double cop_first_order(const EnergyRatioTau& tau, double y) {
    check_tau(tau.tau);
    if (!(y >= 0.0)) throw std::invalid_argument("cop_first_order: y must be >= 0");
    const double t = tau.tau;
    const double d = (t - 1.0) * (t - 1.0);
    return adiabatic_cop(t) - y * (2.0 * t + std::sqrt(1.0 - t)) / d;
}

std::function<double(double)> chi_adiabatic(const CycleConfig& cfg,
                                            const ReservoirPair& res) {
    cfg.validate();
    res.validate();
    const double w1 = cfg.omega_1;
    const double hb = cfg.hbar;
    const double b1 = res.beta_cold;
    const double b2 = res.beta_hot;
    const double tc = cfg.t_cycle;
    const double c1 = coth(0.5 * b1 * hb * w1);
    return [=](double w2) {
        if (!(w2 > 0.0)) throw std::domain_error("chi_adiabatic: omega_2 must be positive");
        return (w1 / (w2 - w1)) * (0.5 * hb * w1 * c1 - w1 / (b2 * w2)) / tc;
    };
}

std::function<double(double)> chi_nonadiabatic(const CycleConfig& cfg,
                                               const ReservoirPair& res, double y) {
    cfg.validate();
    res.validate();
    if (!(y >= 0.0)) throw std::invalid_argument("chi_nonadiabatic: y must be >= 0");
    const double w1 = cfg.omega_1;
    const double hb = cfg.hbar;
    const double b1 = res.beta_cold;
    const double b2 = res.beta_hot;
    const double tc = cfg.t_cycle;
    const double c1 = coth(0.5 * b1 * hb * w1);
    return [=](double w2) {
        if (!(w2 > 0.0))
            throw std::domain_error("chi_nonadiabatic: omega_2 must be positive");
        const double top = 0.5 * hb * w1 * c1 - w1 * (1.0 + y) / (b2 * w2);
        const double bot = 0.5 * hb * w1 * ((w2 / w1) * (1.0 + y) - 1.0) * c1 +
                           ((w1 / w2) * (1.0 + y) - 1.0) / b2;
        const double v = top * top / bot / tc;
        // past heat reversal (top < 0) the squared numerator hides the sign
        // and bot can cross zero for y > 0; report <= 0 there instead of the
        // spurious pole so maximization stays inside the cooling window
        return top > 0.0 ? v : -std::abs(v);
    };
}

Optimum optimize_adiabatic(const CycleConfig& cfg, const ReservoirPair& res) {
    const EnergyRatioTau tau = tau_exact(cfg, res);
    check_tau(tau.tau);
    Optimum opt;
    opt.method = OptimizerMethod::AdiabaticClosedForm;
    opt.omega_2_opt = cfg.omega_1 / adiabatic_optimal_ratio(tau.tau);
    opt.cop_opt = adiabatic_cop(tau.tau);
    opt.chi_opt = chi_adiabatic(cfg, res)(opt.omega_2_opt);
    opt.high_frequency_warning = high_frequency(cfg, res, opt.omega_2_opt);
    return opt;
}

Optimum optimize_cubic(const CycleConfig& cfg, const ReservoirPair& res, double y) {
    const EnergyRatioTau tau = tau_exact(cfg, res);
    const double r = cubic_optimal_ratio(tau.tau, y);
    Optimum opt;
    opt.method = OptimizerMethod::CubicRoot;
    opt.y_used = y;
    opt.omega_2_opt = cfg.omega_1 / r;
    opt.cop_opt = cop_at_ratio_high_t(r, tau.tau, y);
    opt.chi_opt = chi_nonadiabatic(cfg, res, y)(opt.omega_2_opt);
    opt.high_frequency_warning = high_frequency(cfg, res, opt.omega_2_opt);
    return opt;
}

std::pair<double, double> default_omega2_bracket(const CycleConfig& cfg,
                                                 const ReservoirPair& res) {
    const double tau = tau_exact(cfg, res).tau;
    return {cfg.omega_1 * (1.0 + 1e-6),
            cfg.omega_1 * std::max(1e3, 10.0 / (1.0 - tau))};
}

Optimum optimize_numeric(const CycleConfig& cfg, const ReservoirPair& res,
                         const QProvider& q_provider,
                         std::pair<double, double> omega_2_bracket) {
    cfg.validate();
    res.validate();
    const auto [lo, hi] = omega_2_bracket;
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("optimize_numeric: bad omega_2 bracket");

    const auto chi_at = [&](double w2) {
        CycleConfig c = cfg;
        c.omega_2 = w2;
        const auto [q1, q2] = q_provider(w2);
        return figure_of_merit(c, res, q1, q2);
    };

    // Coarse log-spaced scan guards against a wrong local maximum.
    constexpr int kScan = 256;
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    int best = -1;
    double best_chi = 0.0;
    std::vector<double> grid(kScan);
    for (int i = 0; i < kScan; ++i) {
        grid[i] = std::exp(llo + (lhi - llo) * i / (kScan - 1));
        const double chi = chi_at(grid[i]);
        if (chi > best_chi) {
            best_chi = chi;
            best = i;
        }
    }
    if (best < 0)
        throw std::runtime_error(
            "optimize_numeric: chi <= 0 over the whole bracket, no cooling optimum");

    double a = grid[std::max(best - 1, 0)];
    double b = grid[std::min(best + 1, kScan - 1)];
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = chi_at(x1);
    double f2 = chi_at(x2);
    while ((b - a) > 1e-8 * b) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = chi_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = chi_at(x1);
        }
    }

    Optimum opt;
    opt.method = OptimizerMethod::NumericScan;
    opt.omega_2_opt = 0.5 * (a + b);
    opt.chi_opt = chi_at(opt.omega_2_opt);
    {
        CycleConfig c = cfg;
        c.omega_2 = opt.omega_2_opt;
        const auto [q1, q2] = q_provider(opt.omega_2_opt);
        opt.cop_opt = cop(c, res, q1, q2);
    }
    opt.high_frequency_warning = high_frequency(cfg, res, opt.omega_2_opt);
    return opt;
}

}  // namespace otto
