// tvdiel — evaluate the modulated-dielectric response, the diagonalization
// certificates, and emitter decay/shift traces from a JSON config or preset.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvdiel/config.hpp"
#include "tvdiel/fano.hpp"
#include "tvdiel/kramers_kronig.hpp"
#include "tvdiel/polariton.hpp"
#include "tvdiel/trace.hpp"

namespace fs = std::filesystem;
using tvdiel::Json;

namespace {

struct CliArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    double tol = 0.0;
    std::string mode;
    int threads = 0;
    bool gnuplot = false;
};

tvdiel::RunConfig load_config(const CliArgs& args) {
    tvdiel::RunConfig cfg;
    if (!args.preset.empty()) {
        cfg = tvdiel::preset_config(args.preset);
    } else if (!args.config_path.empty()) {
        std::ifstream is(args.config_path);
        if (!is) throw tvdiel::config_error("cannot read config: " + args.config_path);
        Json j = Json::parse(is);
        cfg = tvdiel::config_from_json(j);
    } else {
        throw tvdiel::config_error("provide --config <path> or --preset <name>");
    }
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.tol > 0.0) {
        cfg.tolerances.pv = args.tol;
        cfg.tolerances.frequency = args.tol;
        cfg.tolerances.oscillatory = args.tol;
    }
    if (!args.mode.empty()) cfg.mode = tvdiel::trace_mode_from_string(args.mode);
    if (args.threads > 0) cfg.threads = args.threads;
    cfg.validate();
    return cfg;
}

void ensure_out_dir(const tvdiel::RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
}

std::string out_path(const tvdiel::RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / (cfg.prefix + "_" + name)).string();
}

void write_provenance(const tvdiel::RunConfig& cfg, const std::string& path,
                      Json extra = Json::object()) {
    Json j;
    j["config"] = tvdiel::to_json(cfg);
    for (auto& [k, v] : extra.items()) j[k] = v;
    tvdiel::write_file(path, j.dump(2) + "\n");
}

int cmd_epsilon(const tvdiel::RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto& scan = cfg.epsilon_scan;
    std::ostringstream os;
    os << "omega, t, re_eps, im_eps, eta, kappa\n";
    for (int j = 0; j < scan.t_points; ++j) {
        const double t = (scan.t_points == 1)
                             ? scan.t_min
                             : scan.t_min + (scan.t_max - scan.t_min) * j / (scan.t_points - 1);
        for (int i = 0; i < scan.omega_points; ++i) {
            const double w = (scan.omega_points == 1)
                                 ? scan.omega_min
                                 : scan.omega_min + (scan.omega_max - scan.omega_min) * i /
                                                        (scan.omega_points - 1);
            const auto eps = tvdiel::permittivity(cfg.dielectric, w, t);
            const auto n = tvdiel::upper_half_sqrt(eps.value);
            os << tvdiel::format_double(w) << ',' << tvdiel::format_double(t) << ','
               << tvdiel::format_double(eps.value.real()) << ','
               << tvdiel::format_double(eps.value.imag()) << ','
               << tvdiel::format_double(n.real()) << ',' << tvdiel::format_double(n.imag())
               << '\n';
        }
    }
    tvdiel::write_file(out_path(cfg, "epsilon.csv"), os.str());
    write_provenance(cfg, out_path(cfg, "epsilon.json"),
                     Json{{"rows", scan.omega_points * scan.t_points}});
    std::cout << "wrote " << out_path(cfg, "epsilon.csv") << "\n";
    return 0;
}

Json report_to_json(const tvdiel::CheckReport& r) {
    return Json{{"check", r.check},
                {"value", r.value},
                {"tolerance", r.tolerance},
                {"pass", r.pass}};
}

int cmd_verify(const tvdiel::RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto& d = cfg.dielectric;
    std::vector<tvdiel::CheckReport> reports;
    const auto coupling = tvdiel::CouplingSpec::drude_lorentz(d);

    std::vector<double> phases{0.0};
    if (d.modulation.is_sinusoidal()) {
        const double period = d.modulation.period();
        phases = {0.0, 0.25 * period, 0.5 * period, 0.75 * period};
    } else if (const auto* tab = std::get_if<tvdiel::TabulatedModulation>(
                   &d.modulation.variant())) {
        const double lo = tab->times.front();
        const double hi = tab->times.back();
        phases = {lo, lo + 0.25 * (hi - lo), lo + 0.5 * (hi - lo), hi};
    }
    for (double t : phases) {
        auto r = tvdiel::sum_rule_check(coupling, t, cfg.tolerances.sum_rule);
        r.check += "@t=" + tvdiel::format_double(t);
        reports.push_back(r);
        auto ci = tvdiel::coupling_inequality_check(coupling, t);
        ci.check += "@t=" + tvdiel::format_double(t);
        reports.push_back(ci);
    }

    for (double w : {0.7 * d.omega0, d.omega0, 2.0 * d.omega0}) {
        const auto rc = tvdiel::reality_constraint_check(d, w, 0.0);
        tvdiel::CheckReport r;
        r.check = "reality@omega=" + tvdiel::format_double(w);
        r.value = rc.residual;
        r.tolerance = 1e-13;
        r.pass = rc.pass;
        reports.push_back(r);
    }

    {
        const auto table = tvdiel::make_drude_lorentz_im_table(d, 0.0);
        for (double w : {0.5 * d.omega0, 2.0 * d.omega0, 10.0 * d.omega0}) {
            if (w >= 0.9 * d.cutoff_lambda) continue;
            const double re_kk = 1.0 + tvdiel::kramers_kronig_re(table, w);
            const double re_exact = tvdiel::permittivity(d, w, 0.0).value.real();
            tvdiel::CheckReport r;
            r.check = "kramers_kronig@omega=" + tvdiel::format_double(w);
            r.value = std::abs(re_kk - re_exact) / std::max(std::abs(re_exact), 1.0);
            r.tolerance = 1e-3;
            r.pass = r.value <= r.tolerance;
            reports.push_back(r);
        }
    }

    for (double k : {d.omega0, 3.0 * d.omega0}) {
        auto r = tvdiel::polariton_inequality_check(d, k, 0.0);
        r.check += "@k=" + tvdiel::format_double(k);
        reports.push_back(r);
    }

    // user-supplied Im eps samples: reality (odd Im across sign pairs) and
    // passivity on the positive axis
    if (!cfg.response_table.empty()) {
        double scale = 0.0;
        for (const auto& row : cfg.response_table) scale = std::max(scale, std::abs(row[1]));
        double worst_reality = 0.0;
        bool passive = true;
        for (const auto& row : cfg.response_table) {
            if (row[0] > 0.0 && row[0] < d.cutoff_lambda && !(row[1] > 0.0)) passive = false;
            if (row[0] >= 0.0) continue;
            for (const auto& other : cfg.response_table) {
                if (other[0] == -row[0]) {
                    worst_reality = std::max(worst_reality, std::abs(row[1] + other[1]));
                }
            }
        }
        tvdiel::CheckReport reality;
        reality.check = "reality@response_table";
        reality.value = (scale > 0.0) ? worst_reality / scale : 0.0;
        reality.tolerance = 1e-12;
        reality.pass = reality.value <= reality.tolerance;
        reports.push_back(reality);
        tvdiel::CheckReport pas;
        pas.check = "passivity@response_table";
        pas.value = passive ? 1.0 : 0.0;
        pas.pass = passive;
        reports.push_back(pas);
    }

    Json out = Json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        out.push_back(report_to_json(r));
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.check
                  << " value=" << r.value << "\n";
    }
    tvdiel::write_file(out_path(cfg, "verify.json"), out.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

void maybe_write_gnuplot(const CliArgs& args, const tvdiel::RunConfig& cfg,
                         const std::string& csv_name, const std::string& ycol,
                         const std::string& title) {
    if (!args.gnuplot) return;
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set xlabel 't [1/Gamma_A]'\n"
       << "set ylabel '" << title << "'\n"
       << "plot '" << csv_name << "' using 1:" << ycol << " with lines title '" << title
       << "'\n"
       << "pause -1\n";
    tvdiel::write_file(out_path(cfg, "plot.gp"), os.str());
}

int cmd_decay(const tvdiel::RunConfig& cfg, const CliArgs& args) {
    ensure_out_dir(cfg);
    for (const auto& warn :
         cfg.emitter.rapid_adiabatic_warnings(cfg.dielectric.modulation)) {
        std::cerr << "warning: " << warn << "\n";
    }
    auto opts = cfg.trace_options();
    Json extra;
    auto run_one = [&](tvdiel::TraceMode mode) {
        const auto trace =
            tvdiel::compute_decay_trace(cfg.dielectric, cfg.emitter, mode, opts);
        const std::string csv = out_path(cfg, "decay_" + trace.mode + ".csv");
        tvdiel::write_file(csv, tvdiel::decay_trace_csv(trace));
        extra["outputs"].push_back(csv);
        extra["regime"] =
            trace.regime == tvdiel::Regime::Dissipative ? "dissipative" : "dispersive";
        extra["quadrature_failures_" + trace.mode] = trace.failure_count();
        if (trace.failure_count() > 0) {
            std::cerr << "warning: " << trace.failure_count()
                      << " trace points hit quadrature accuracy limits (flagged)\n";
        }
        std::cout << "wrote " << csv << " (" << trace.t.size() << " points)\n";
        maybe_write_gnuplot(args, cfg, fs::path(csv).filename().string(), "4",
                            "population");
    };
    if (cfg.mode == tvdiel::TraceMode::Both) {
        run_one(tvdiel::TraceMode::Closed);
        run_one(tvdiel::TraceMode::Direct);
    } else {
        run_one(cfg.mode);
    }
    extra["gamma_prime_A"] =
        tvdiel::unmodulated_rate(cfg.dielectric, cfg.emitter) / cfg.emitter.gamma_A;
    write_provenance(cfg, out_path(cfg, "decay.json"), extra);
    return 0;
}

int cmd_shift(const tvdiel::RunConfig& cfg, const CliArgs& args) {
    ensure_out_dir(cfg);
    auto opts = cfg.trace_options();
    std::vector<double> detunings = cfg.shift_detunings;
    if (detunings.empty()) {
        detunings = {(cfg.emitter.omega_A - cfg.dielectric.omega0) / cfg.dielectric.gamma0};
    }
    std::ostringstream os;
    os << "t, detuning, delta_res\n";
    const double ga = cfg.emitter.gamma_A;
    for (double det : detunings) {
        tvdiel::EmitterSpec emitter = cfg.emitter;
        emitter.omega_A = cfg.dielectric.omega0 + det * cfg.dielectric.gamma0;
        tvdiel::TraceOptions topts = opts;
        const auto grid = tvdiel::make_time_grid(cfg.dielectric, emitter, topts);
        for (double t : grid) {
            const double dres = tvdiel::delta_resonant(cfg.dielectric, emitter, t);
            os << tvdiel::format_double(t * ga) << ',' << tvdiel::format_double(det) << ','
               << tvdiel::format_double(dres / ga) << '\n';
        }
    }
    const std::string csv = out_path(cfg, "shift.csv");
    tvdiel::write_file(csv, os.str());
    write_provenance(cfg, out_path(cfg, "shift.json"),
                     Json{{"detunings", detunings}});
    std::cout << "wrote " << csv << "\n";
    maybe_write_gnuplot(args, cfg, fs::path(csv).filename().string(), "3",
                        "delta_res [Gamma_A]");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-varying dielectric response and emitter dynamics"};
    app.require_subcommand(1);

    CliArgs args;
    app.add_option("--config", args.config_path, "JSON config path");
    app.add_option("--preset", args.preset,
                   "preset name (fig3a-slow, fig3a-fast, fig3b-deep, fig3b-weak, "
                   "unmodulated, dispersive-static)");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--tol", args.tol, "override quadrature tolerances");
    app.add_option("--mode", args.mode, "direct|closed|both");
    app.add_option("--threads", args.threads, "worker threads for trace sweeps");
    app.add_flag("--gnuplot", args.gnuplot, "also write a gnuplot script");

    auto* sub_eps = app.add_subcommand("epsilon", "tabulate epsilon(omega, t)");
    auto* sub_verify =
        app.add_subcommand("verify", "run the diagonalization and causality checks");
    auto* sub_decay = app.add_subcommand("decay", "compute beta, Delta, population traces");
    auto* sub_shift = app.add_subcommand("shift", "compute the resonant shift component");
    for (auto* sub : {sub_eps, sub_verify, sub_decay, sub_shift}) {
        sub->fallthrough(); // global flags may follow the subcommand
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    }

    try {
        const auto cfg = load_config(args);
        if (sub_eps->parsed()) return cmd_epsilon(cfg);
        if (sub_verify->parsed()) return cmd_verify(cfg);
        if (sub_decay->parsed()) return cmd_decay(cfg, args);
        if (sub_shift->parsed()) return cmd_shift(cfg, args);
        return 2;
    } catch (const tvdiel::config_error& err) {
        Json j{{"error", {{"exit_code", 2}, {"message", err.what()}}}};
        std::cerr << j.dump() << "\n";
        return 2;
    } catch (const std::exception& err) {
        Json j{{"error", {{"exit_code", 1}, {"message", err.what()}}}};
        std::cerr << j.dump() << "\n";
        return 1;
    }
}
