#include "otto/adiabaticity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otto {

namespace {
std::vector<double> monotone_slopes(const std::vector<std::pair<double, double>>& pts);
}

FrequencyProtocol FrequencyProtocol::quasistatic(double w0, double w1) {
    FrequencyProtocol p;
    p.kind = ProtocolKind::Quasistatic;
    p.omega_start = w0;
    p.omega_end = w1;
    p.validate();
    return p;
}

FrequencyProtocol FrequencyProtocol::sudden(double w0, double w1) {
    FrequencyProtocol p;
    p.kind = ProtocolKind::Sudden;
    p.omega_start = w0;
    p.omega_end = w1;
    p.validate();
    return p;
}

FrequencyProtocol FrequencyProtocol::linear(double w0, double w1, double t0) {
    FrequencyProtocol p;
    p.kind = ProtocolKind::LinearOmega;
    p.omega_start = w0;
    p.omega_end = w1;
    p.duration = t0;
    p.validate();
    return p;
}

FrequencyProtocol FrequencyProtocol::linear_squared(double w0, double w1, double t0) {
    FrequencyProtocol p;
    p.kind = ProtocolKind::LinearOmegaSquared;
    p.omega_start = w0;
    p.omega_end = w1;
    p.duration = t0;
    p.validate();
    return p;
}

FrequencyProtocol FrequencyProtocol::tabulated(std::vector<std::pair<double, double>> pts,
                                               TableInterp interp) {
    FrequencyProtocol p;
    p.kind = ProtocolKind::Tabulated;
    p.samples = std::move(pts);
    p.interp = interp;
    if (p.samples.size() < 2)
        throw std::invalid_argument("tabulated protocol needs at least two samples");
    p.omega_start = p.samples.front().second;
    p.omega_end = p.samples.back().second;
    p.duration = p.samples.back().first;
    p.validate();
    if (interp == TableInterp::MonotoneCubic)
        p.slopes_ = monotone_slopes(p.samples);  // eager: keeps shared reads race-free
    return p;
}

FrequencyProtocol FrequencyProtocol::from_csv(const std::string& path, TableInterp interp) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open protocol file: " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t, w;
        if (!(ls >> t >> w)) {
            if (first) { first = false; continue; }  // optional header
            throw std::invalid_argument("malformed protocol row: " + line);
        }
        first = false;
        pts.emplace_back(t, w);
    }
    return tabulated(std::move(pts), interp);
}

void FrequencyProtocol::validate() const {
    switch (kind) {
        case ProtocolKind::Quasistatic:
        case ProtocolKind::Sudden:
            if (!(omega_start > 0.0) || !(omega_end > 0.0))
                throw std::domain_error("protocol frequencies must be positive");
            return;
        case ProtocolKind::LinearOmega:
        case ProtocolKind::LinearOmegaSquared:
            if (!(omega_start > 0.0) || !(omega_end > 0.0))
                throw std::domain_error("protocol frequencies must be positive");
            if (!(duration > 0.0))
                throw std::domain_error("ramp protocols need a positive duration");
            return;
        case ProtocolKind::Tabulated: {
            if (samples.size() < 2)
                throw std::invalid_argument("tabulated protocol needs at least two samples");
            if (samples.front().first != 0.0)
                throw std::domain_error("tabulated protocol must start at t = 0");
            double prev = -1.0;
            for (const auto& [t, w] : samples) {
                if (!(t > prev))
                    throw std::domain_error("tabulated times must be strictly increasing");
                if (!(w > 0.0))
                    throw std::domain_error("tabulated frequencies must be positive");
                prev = t;
            }
            if (!(duration > 0.0))
                throw std::domain_error("tabulated protocol needs a positive duration");
            return;
        }
    }
    throw std::invalid_argument("unknown protocol kind");
}

namespace {

// Fritsch-Carlson slopes for a monotonicity-preserving C1 interpolant.
std::vector<double> monotone_slopes(const std::vector<std::pair<double, double>>& pts) {
    const std::size_t n = pts.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        m[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m[i] = m[i + 1] = 0.0;
            continue;
        }
        const double a = m[i] / d[i];
        const double b = m[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double f = 3.0 / std::sqrt(s);
            m[i] = f * a * d[i];
            m[i + 1] = f * b * d[i];
        }
    }
    return m;
}

double hermite(double t, double t0, double t1, double y0, double y1, double m0, double m1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

}  // namespace

double FrequencyProtocol::omega_squared(double t) const {
    switch (kind) {
        case ProtocolKind::LinearOmega: {
            const double w = omega_start + (omega_end - omega_start) * t / duration;
            return w * w;
        }
        case ProtocolKind::LinearOmegaSquared:
            return omega_start * omega_start +
                   (omega_end * omega_end - omega_start * omega_start) * t / duration;
        case ProtocolKind::Tabulated: {
            const double tc = std::clamp(t, 0.0, duration);
            auto it = std::upper_bound(samples.begin(), samples.end(), tc,
                                       [](double v, const auto& s) { return v < s.first; });
            std::size_t i = (it == samples.begin()) ? 0 : (it - samples.begin() - 1);
            if (i + 1 >= samples.size()) i = samples.size() - 2;
            double w;
            if (interp == TableInterp::Linear) {
                const double f = (tc - samples[i].first) /
                                 (samples[i + 1].first - samples[i].first);
                w = samples[i].second + f * (samples[i + 1].second - samples[i].second);
            } else {
                if (slopes_.size() != samples.size()) slopes_ = monotone_slopes(samples);
                w = hermite(tc, samples[i].first, samples[i + 1].first, samples[i].second,
                            samples[i + 1].second, slopes_[i], slopes_[i + 1]);
            }
            return w * w;
        }
        default:
            throw std::invalid_argument("omega_squared: protocol has no time path");
    }
}

AdiabaticityResult qstar_closed_form(const FrequencyProtocol& p) {
    p.validate();
    AdiabaticityResult r;
    r.method = QstarMethod::ClosedForm;
    if (p.kind == ProtocolKind::Quasistatic) {
        r.q_star = 1.0;
        return r;
    }
    if (p.kind == ProtocolKind::Sudden) {
        r.q_star = (p.omega_start * p.omega_start + p.omega_end * p.omega_end) /
                   (2.0 * p.omega_start * p.omega_end);
        return r;
    }
    throw std::invalid_argument("qstar_closed_form: protocol kind has no closed form");
}

AdiabaticityResult qstar_perturbative(const FrequencyProtocol& p) {
    p.validate();
    AdiabaticityResult r;
    r.method = QstarMethod::Perturbative;
    if (p.kind == ProtocolKind::LinearOmega) {
        const double alpha = (p.omega_end - p.omega_start) / p.duration;
        const double w4 = std::pow(p.omega_end, 4);
        r.y_value = alpha * alpha / (8.0 * w4);
    } else if (p.kind == ProtocolKind::LinearOmegaSquared) {
        const double abar =
            (p.omega_end * p.omega_end - p.omega_start * p.omega_start) / p.duration;
        const double w6 = std::pow(p.omega_end, 6);
        r.y_value = abar * abar / (32.0 * w6);
    } else {
        throw std::invalid_argument("qstar_perturbative: needs a linear ramp protocol");
    }
    r.q_star = 1.0 + *r.y_value;
    return r;
}

namespace {

// Dormand-Prince 5(4) embedded pair.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 4th-order weights for the error estimate.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

using State = std::array<double, 4>;  // X, X', Y, Y'

State rhs(const FrequencyProtocol& p, double t, const State& s) {
    const double w2 = p.omega_squared(t);
    if (!(w2 > 0.0))
        throw std::domain_error("qstar_numeric: frequency path crosses zero");
    return {s[1], -w2 * s[0], s[3], -w2 * s[2]};
}

}  // namespace

AdiabaticityResult qstar_numeric(const FrequencyProtocol& p, double tolerance) {
    p.validate();
    if (p.kind == ProtocolKind::Quasistatic || p.kind == ProtocolKind::Sudden)
        throw std::invalid_argument("qstar_numeric: protocol has no finite time path");
    if (!(tolerance >= 1e-13) || !(tolerance <= 1e-4))
        throw std::invalid_argument("qstar_numeric: tolerance out of [1e-13, 1e-4]");

    const double rtol = tolerance;
    const double atol = tolerance * 1e-2;
    const double t_end = p.duration;
    const double w_max = std::max(p.omega_start, p.omega_end);

    State y{0.0, 1.0, 1.0, 0.0};
    double t = 0.0;
    double h = std::min(t_end, 0.05 / w_max);
    double drift = 0.0;
    State k1 = rhs(p, t, y);
    std::size_t rejected_in_a_row = 0;

    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        State k2, k3, k4, k5, k6, k7, ynew, tmp;
        using D = Dopri5;
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * D::a21 * k1[i];
        k2 = rhs(p, t + D::c2 * h, tmp);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
        k3 = rhs(p, t + D::c3 * h, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
        k4 = rhs(p, t + D::c4 * h, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] +
                     h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] + D::a54 * k4[i]);
        k5 = rhs(p, t + D::c5 * h, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] +
                                 D::a64 * k4[i] + D::a65 * k5[i]);
        k6 = rhs(p, t + h, tmp);
        for (int i = 0; i < 4; ++i)
            ynew[i] = y[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] +
                                  D::b5 * k5[i] + D::b6 * k6[i]);
        k7 = rhs(p, t + h, ynew);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                                  D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            drift = std::max(drift, std::abs(y[0] * y[3] - y[1] * y[2] + 1.0));
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 50) {
            throw std::runtime_error("qstar_numeric: step control cannot meet tolerance");
        }
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
        if (h < 1e-14 * t_end)
            throw std::runtime_error("qstar_numeric: step size underflow");
    }

    const double w0 = p.omega_start;
    const double wf = p.omega_end;
    const double qx = wf * wf * y[0] * y[0] + y[1] * y[1];
    const double qy = wf * wf * y[2] * y[2] + y[3] * y[3];

    AdiabaticityResult r;
    r.method = QstarMethod::Numeric;
    r.q_star = (w0 * w0 * qx + qy) / (2.0 * w0 * wf);
    r.wronskian_drift = drift;
    return r;
}

AdiabaticityResult qstar(const FrequencyProtocol& p, QstarMode mode, double tolerance) {
    switch (mode) {
        case QstarMode::ClosedForm:
            return qstar_closed_form(p);
        case QstarMode::Perturbative:
            return qstar_perturbative(p);
        case QstarMode::Numeric:
            return qstar_numeric(p, tolerance);
        case QstarMode::Auto:
            if (p.kind == ProtocolKind::Quasistatic || p.kind == ProtocolKind::Sudden)
                return qstar_closed_form(p);
            return qstar_numeric(p, tolerance);
    }
    throw std::invalid_argument("qstar: unknown mode");
}

}  // namespace otto
