// Command-line front end: parameter sweeps and single-point reports for the
// harmonic Otto refrigerator library, emitting plot-ready CSV.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "otto/adiabaticity.hpp"
#include "otto/breakdown.hpp"
#include "otto/optimizer.hpp"
#include "otto/thermo.hpp"

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalFailure = 3;

// 17 significant digits, fixed layout; infinities and NaNs come out as the
// literal strings "inf" / "nan".
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

struct Range {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    bool log = false;

    std::vector<double> grid() const {
        std::vector<double> g(count);
        for (int i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / (count - 1);
            g[i] = log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                       : start + f * (stop - start);
        }
        return g;
    }
};

Range parse_range(const std::string& s) {
    Range r;
    std::string spacing;
    std::istringstream in(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError("--range", "expected START:STOP:COUNT[:log]");
    try {
        r.start = std::stod(parts[0]);
        r.stop = std::stod(parts[1]);
        r.count = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--range", "non-numeric field in " + s);
    }
    if (parts.size() == 4) {
        if (parts[3] != "log" && parts[3] != "linear")
            throw CLI::ValidationError("--range", "spacing must be 'linear' or 'log'");
        r.log = parts[3] == "log";
    }
    if (r.count < 2) throw CLI::ValidationError("--range", "count must be >= 2");
    if (!(r.start < r.stop)) throw CLI::ValidationError("--range", "start must be < stop");
    if (r.log && !(r.start > 0.0))
        throw CLI::ValidationError("--range", "log spacing requires start > 0");
    return r;
}

// Shared parameter record; command-line flags beat config-file values beat
// these built-in figure defaults (hbar = omega_1 = beta_2 = 1, omega_2 = 5).
struct Params {
    double omega1 = 1.0;
    double omega2 = 5.0;
    double beta1 = 2.0;
    double beta2 = 1.0;
    double hbar = 1.0;
    double tcycle = 1.0;
    double y = 0.01;
    std::string protocol = "linear";
    double t0 = 1.0;
    std::string range;
    std::string out;
    int jobs = 1;
    // temperature aliases; when given they override the betas
    std::optional<double> T1, T2;

    void resolve_temperatures(double k_b = 1.0) {
        if (T2) beta2 = 1.0 / (k_b * *T2);
        if (T1) beta1 = 1.0 / (k_b * *T1);
    }

    otto::CycleConfig cycle() const { return {omega1, omega2, hbar, 1.0, tcycle}; }
    otto::ReservoirPair reservoirs() const { return {beta1, beta2}; }
};

void add_common_flags(CLI::App* cmd, Params& p) {
    cmd->add_option("--omega1", p.omega1, "Cold-side angular frequency");
    cmd->add_option("--omega2", p.omega2, "Hot-side angular frequency");
    cmd->add_option("--beta1", p.beta1, "Cold-bath inverse temperature");
    cmd->add_option("--beta2", p.beta2, "Hot-bath inverse temperature");
    cmd->add_option("--T1", p.T1, "Cold-bath temperature (overrides --beta1)");
    cmd->add_option("--T2", p.T2, "Hot-bath temperature (overrides --beta2)");
    cmd->add_option("--hbar", p.hbar, "Reduced Planck constant");
    cmd->add_option("--tcycle", p.tcycle, "Total cycle duration");
    cmd->add_option("--y", p.y, "Nonadiabatic correction parameter");
    cmd->add_option("--protocol", p.protocol,
                    "Frequency protocol: linear, linear-squared, sudden, quasistatic, "
                    "file:PATH");
    cmd->add_option("--t0", p.t0, "Stroke driving time");
    cmd->add_option("--range", p.range, "Sweep grid START:STOP:COUNT[:log]");
    cmd->add_option("--out", p.out, "Output CSV path (default: stdout)");
    cmd->add_option("--jobs", p.jobs, "Worker threads for sweep rows")
        ->check(CLI::PositiveNumber);
    cmd->set_config("--config")->configurable(false);
}

// All-or-nothing CSV emission: rows are either printed to stdout or written
// to a temp file that is renamed onto the target only on success.
void emit_csv(const std::string& out, const std::string& header,
              const std::vector<std::string>& rows) {
    std::string body = header;
    body.push_back('\n');
    for (const auto& r : rows) {
        body += r;
        body.push_back('\n');
    }
    if (out.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
        return;
    }
    const std::filesystem::path target(out);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + tmp.string());
        f.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

// Evaluate rows 0..n-1 concurrently, preserving input order in the result.
std::vector<std::string> compute_rows(int n, int jobs,
                                      const std::function<std::string(int)>& row_fn) {
    std::vector<std::string> rows(n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) rows[i] = row_fn(i);
        return rows;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < std::min(jobs, n); ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    rows[i] = row_fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

int run_cop_sweep(Params& p, const std::string& variable) {
    p.resolve_temperatures();
    const bool classical = variable == "tau-cl";
    const Range range = p.range.empty() ? Range{0.05, 0.95, 19, false} : parse_range(p.range);
    const std::vector<double> taus = range.grid();
    const double y = p.y;

    auto row_fn = [&](int i) {
        const double tau = taus[i];
        const double cop_ad = otto::adiabatic_cop(tau);
        const double r = otto::cubic_optimal_ratio(tau, y);
        const double cop_cubic = otto::cop_at_ratio_high_t(r, tau, y);
        const double cop_fo = otto::cop_first_order(
            {tau, classical ? otto::TauRegime::Classical : otto::TauRegime::Quantum}, y);
        std::string row = fmt(tau) + "," + fmt(cop_ad) + "," + fmt(cop_cubic) + "," +
                          fmt(cop_fo);
        if (classical) row += "," + fmt(tau / (1.0 - tau));  // Carnot (tau^-1 - 1)^-1
        return row;
    };

    std::string header = "tau,cop_adiabatic,cop_cubic_exact,cop_first_order";
    if (classical) header += ",carnot";
    emit_csv(p.out, header, compute_rows(static_cast<int>(taus.size()), p.jobs, row_fn));
    return 0;
}

int run_critical_time(Params& p) {
    p.resolve_temperatures();
    if (p.protocol != "linear" && p.protocol != "linear-squared")
        throw CLI::ValidationError("--protocol",
                                   "critical-time supports linear or linear-squared");
    const bool linear = p.protocol == "linear";
    const Range range = p.range.empty() ? Range{0.25, 2.0, 30, false} : parse_range(p.range);
    const std::vector<double> t1s = range.grid();

    auto row_fn = [&](int i) {
        const double t1 = t1s[i];
        otto::CycleConfig cfg = p.cycle();
        otto::ReservoirPair res{1.0 / t1, p.beta2};
        const otto::BreakdownPoint analytic =
            linear ? otto::critical_time_linear(cfg, res)
                   : otto::critical_time_linear_squared(cfg, res);
        double t0c_numeric = std::numeric_limits<double>::infinity();
        if (!analytic.diverged) {
            otto::ProtocolFamily family = [&cfg, linear](double t0) {
                return linear
                           ? otto::FrequencyProtocol::linear(cfg.omega_2, cfg.omega_1, t0)
                           : otto::FrequencyProtocol::linear_squared(cfg.omega_2,
                                                                     cfg.omega_1, t0);
            };
            t0c_numeric = otto::critical_time_numeric(family, cfg, res).t0_critical;
        }
        return fmt(t1) + "," + fmt(t0c_numeric) + "," + fmt(analytic.t0_critical) + "," +
               (analytic.diverged ? "1" : "0");
    };

    emit_csv(p.out, "T1,t0c_numeric,t0c_analytic,diverged",
             compute_rows(static_cast<int>(t1s.size()), p.jobs, row_fn));
    return 0;
}

int run_qstar(Params& p, double omega_start, double omega_end) {
    p.resolve_temperatures();
    const double sudden_limit =
        (omega_start * omega_start + omega_end * omega_end) / (2.0 * omega_start * omega_end);
    const std::string header =
        "t0,qstar_numeric,qstar_perturbative,sudden_limit,wronskian_drift,error";
    const double qnan = std::numeric_limits<double>::quiet_NaN();

    if (p.protocol == "quasistatic" || p.protocol == "sudden") {
        const auto proto = p.protocol == "quasistatic"
                               ? otto::FrequencyProtocol::quasistatic(omega_start, omega_end)
                               : otto::FrequencyProtocol::sudden(omega_start, omega_end);
        const auto r = otto::qstar_closed_form(proto);
        emit_csv(p.out, header,
                 {fmt(0.0) + "," + fmt(r.q_star) + "," + fmt(qnan) + "," +
                  fmt(sudden_limit) + "," + fmt(0.0) + ","});
        return 0;
    }

    std::vector<double> t0s;
    std::optional<otto::FrequencyProtocol> table;
    if (p.protocol.rfind("file:", 0) == 0) {
        table = otto::FrequencyProtocol::from_csv(p.protocol.substr(5));
        t0s.push_back(table->duration);
    } else if (p.protocol == "linear" || p.protocol == "linear-squared") {
        t0s = p.range.empty() ? std::vector<double>{p.t0} : parse_range(p.range).grid();
    } else {
        throw CLI::ValidationError("--protocol", "unknown protocol kind: " + p.protocol);
    }

    auto row_fn = [&](int i) {
        const double t0 = t0s[i];
        std::string row = fmt(t0) + ",";
        try {
            otto::FrequencyProtocol proto =
                table ? *table
                : p.protocol == "linear"
                    ? otto::FrequencyProtocol::linear(omega_start, omega_end, t0)
                    : otto::FrequencyProtocol::linear_squared(omega_start, omega_end, t0);
            const auto num = otto::qstar_numeric(proto);
            double pert = qnan;
            if (!table) pert = otto::qstar_perturbative(proto).q_star;
            row += fmt(num.q_star) + "," + fmt(pert) + "," + fmt(sudden_limit) + "," +
                   fmt(num.wronskian_drift) + ",";
        } catch (const std::exception& e) {
            row += fmt(qnan) + "," + fmt(qnan) + "," + fmt(sudden_limit) + "," +
                   fmt(qnan) + ",\"" + e.what() + "\"";
        }
        return row;
    };

    emit_csv(p.out, header, compute_rows(static_cast<int>(t0s.size()), p.jobs, row_fn));
    return 0;
}

int run_report(Params& p, double q1, double q2) {
    p.resolve_temperatures();
    const otto::CycleConfig cfg = p.cycle();
    const otto::ReservoirPair res = p.reservoirs();
    const otto::CornerEnergies e = otto::corner_energies(cfg, res, q1, q2);
    const otto::PerformanceReport rep = otto::evaluate_cycle(cfg, res, q1, q2);
    const double eps_c = otto::carnot_cop(res);
    const double qc = otto::critical_qstar(cfg, res);

    std::ostringstream text;
    text << "cycle point: omega1=" << p.omega1 << " omega2=" << p.omega2
         << " beta1=" << p.beta1 << " beta2=" << p.beta2 << " hbar=" << p.hbar
         << " tcycle=" << p.tcycle << " q1=" << q1 << " q2=" << q2 << "\n"
         << "corner energies: A=" << fmt(e.e_a) << " B=" << fmt(e.e_b)
         << " C=" << fmt(e.e_c) << " D=" << fmt(e.e_d) << "\n"
         << "work in (compression) = " << fmt(rep.work_in_1) << "\n"
         << "work in (expansion)   = " << fmt(rep.work_in_3) << "\n"
         << "heat from cold bath   = " << fmt(rep.heat_cold) << "\n"
         << "heat to hot bath      = " << fmt(rep.heat_hot) << "\n"
         << "cop                   = " << fmt(rep.cop) << "\n"
         << "chi                   = " << fmt(rep.chi) << "\n"
         << "cooling               = " << (rep.is_cooling ? "yes" : "no") << "\n"
         << "carnot cop            = " << fmt(eps_c) << "\n"
         << "critical qstar2       = " << fmt(qc) << "\n";
    std::fputs(text.str().c_str(), stdout);

    if (!p.out.empty()) {
        emit_csv(p.out,
                 "omega1,omega2,beta1,beta2,q1,q2,e_a,e_b,e_c,e_d,work_in_1,work_in_3,"
                 "heat_cold,heat_hot,cop,chi,is_cooling,carnot,critical_qstar",
                 {fmt(p.omega1) + "," + fmt(p.omega2) + "," + fmt(p.beta1) + "," +
                  fmt(p.beta2) + "," + fmt(q1) + "," + fmt(q2) + "," + fmt(e.e_a) + "," +
                  fmt(e.e_b) + "," + fmt(e.e_c) + "," + fmt(e.e_d) + "," +
                  fmt(rep.work_in_1) + "," + fmt(rep.work_in_3) + "," +
                  fmt(rep.heat_cold) + "," + fmt(rep.heat_hot) + "," + fmt(rep.cop) + "," +
                  fmt(rep.chi) + "," + (rep.is_cooling ? "1" : "0") + "," + fmt(eps_c) +
                  "," + fmt(qc)});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-time performance of a harmonic quantum Otto refrigerator"};
    app.require_subcommand(1);

    Params p_cop, p_crit, p_qstar, p_report;
    std::string cop_variable = "tau-cl";
    double omega_start = 1.0, omega_end = 2.0;
    double q1 = 1.0, q2 = 1.0;

    CLI::App* cop = app.add_subcommand(
        "cop-sweep", "COP at maximum figure of merit over an energy-ratio grid");
    add_common_flags(cop, p_cop);
    cop->add_option("--variable", cop_variable, "Sweep variable: tau-cl or tau-q")
        ->check(CLI::IsMember({"tau-cl", "tau-q"}));

    CLI::App* crit = app.add_subcommand(
        "critical-time", "Minimal driving time for cooling over a T1 grid");
    add_common_flags(crit, p_crit);

    CLI::App* qs = app.add_subcommand("qstar", "Adiabaticity parameter diagnostics");
    add_common_flags(qs, p_qstar);
    qs->add_option("--omega-start", omega_start, "Stroke start frequency");
    qs->add_option("--omega-end", omega_end, "Stroke end frequency");

    CLI::App* rep = app.add_subcommand("report", "Full bookkeeping for one parameter point");
    add_common_flags(rep, p_report);
    rep->add_option("--q1", q1, "Compression-stroke adiabaticity factor");
    rep->add_option("--q2", q2, "Expansion-stroke adiabaticity factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (cop->parsed()) return run_cop_sweep(p_cop, cop_variable);
        if (crit->parsed()) return run_critical_time(p_crit);
        if (qs->parsed()) return run_qstar(p_qstar, omega_start, omega_end);
        if (rep->parsed()) return run_report(p_report, q1, q2);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
    return 0;
}
