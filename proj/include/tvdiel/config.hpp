// config.hpp — run configuration: JSON schema, validation, presets.
// Schema (version 1): all frequencies in units of omega0, rates in units of
// omega0; time_grid.t_max is in 1/Gamma_A units to match the CSV output.

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvdiel/dielectric.hpp"
#include "tvdiel/emitter.hpp"
#include "tvdiel/trace.hpp"

namespace tvdiel {

using Json = nlohmann::json;

struct Tolerances {
    double pv = 1e-6;
    double frequency = 1e-6;
    double oscillatory = 1e-5;
    double sum_rule = 1e-3;
};

struct EpsilonScan {
    double omega_min = 0.1;
    double omega_max = 3.0;
    int omega_points = 256;
    double t_min = 0.0;
    double t_max = 0.0;
    int t_points = 1;
};

struct RunConfig {
    int schema_version = 1;
    DielectricSpec dielectric{};
    EmitterSpec emitter{};
    double t_max = 1.0; // 1/Gamma_A units
    int points_per_period = 40;
    int points_per_decay = 200;
    Tolerances tolerances{};
    TraceMode mode = TraceMode::Closed;
    std::string out_dir = "out";
    std::string prefix = "run";
    EpsilonScan epsilon_scan{};
    std::vector<double> shift_detunings{}; // units of gamma0; empty -> use omega_A
    int threads = 1;
    // optional user-supplied Im eps samples [[omega, im_eps], ...]; negative
    // omega rows allowed; `verify` checks reality (odd Im) and passivity
    std::vector<std::array<double, 2>> response_table{};

    void validate() const {
        dielectric.validate();
        emitter.validate();
        if (!(t_max > 0.0)) throw config_error("config: time_grid.t_max must be > 0");
        if (points_per_period < 40) {
            throw config_error("config: points_per_period must be >= 40");
        }
        if (points_per_decay < 200) {
            throw config_error("config: points_per_decay must be >= 200");
        }
        for (double tol : {tolerances.pv, tolerances.frequency, tolerances.oscillatory,
                           tolerances.sum_rule}) {
            if (!(tol > 0.0)) throw config_error("config: tolerances must be > 0");
        }
        if (threads < 1) throw config_error("config: threads must be >= 1");
        if (!(epsilon_scan.omega_min > 0.0) ||
            !(epsilon_scan.omega_max > epsilon_scan.omega_min) ||
            epsilon_scan.omega_points < 1 || epsilon_scan.t_points < 1 ||
            epsilon_scan.t_max < epsilon_scan.t_min) {
            throw config_error("config: invalid epsilon_scan grid");
        }
        for (double det : shift_detunings) {
            if (!(std::abs(det) < 1e6)) throw config_error("config: bad shift detuning");
        }
        if (const auto* tab =
                std::get_if<TabulatedModulation>(&dielectric.modulation.variant())) {
            // traces run over [0, t_max/gamma_A] in internal units and must
            // stay interpolable (extrapolation is forbidden)
            if (tab->times.front() > 0.0 || tab->times.back() < t_max / emitter.gamma_A) {
                throw config_error(
                    "config: tabulated modulation samples must cover [0, t_max/gamma_A]");
            }
        }
    }

    TraceOptions trace_options() const {
        TraceOptions opts;
        opts.t_max = t_max / emitter.gamma_A; // to internal 1/omega0 units
        opts.points_per_period = points_per_period;
        opts.points_per_decay = points_per_decay;
        opts.tol = tolerances.oscillatory;
        opts.threads = threads;
        return opts;
    }
};

inline std::string to_string(TraceMode m) {
    switch (m) {
        case TraceMode::Direct: return "direct";
        case TraceMode::Closed: return "closed";
        case TraceMode::Both: return "both";
    }
    return "closed";
}

inline TraceMode trace_mode_from_string(const std::string& s) {
    if (s == "direct") return TraceMode::Direct;
    if (s == "closed") return TraceMode::Closed;
    if (s == "both") return TraceMode::Both;
    throw config_error("config: mode must be one of direct|closed|both");
}

inline Json modulation_to_json(const ModulationProfile& m) {
    Json j;
    if (m.is_constant()) {
        j["type"] = "constant";
    } else if (const auto* s = std::get_if<SinusoidalModulation>(&m.variant())) {
        j["type"] = "sinusoidal";
        j["A"] = s->amplitude;
        j["Omega"] = s->rate;
    } else {
        const auto& tab = std::get<TabulatedModulation>(m.variant());
        j["type"] = "tabulated";
        Json samples = Json::array();
        for (std::size_t i = 0; i < tab.times.size(); ++i) {
            samples.push_back({tab.times[i], tab.gamma[i]});
        }
        j["samples"] = samples;
    }
    return j;
}

inline ModulationProfile modulation_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return ModulationProfile::constant();
    if (type == "sinusoidal") {
        return ModulationProfile::sinusoidal(j.at("A").get<double>(),
                                             j.at("Omega").get<double>());
    }
    if (type == "tabulated") {
        std::vector<double> times, gamma;
        for (const auto& row : j.at("samples")) {
            times.push_back(row.at(0).get<double>());
            gamma.push_back(row.at(1).get<double>());
        }
        return ModulationProfile::tabulated(std::move(times), std::move(gamma));
    }
    throw config_error("config: modulation.type must be constant|sinusoidal|tabulated");
}

inline Json to_json(const RunConfig& c) {
    Json j;
    j["schema_version"] = c.schema_version;
    j["dielectric"] = {{"omega0", c.dielectric.omega0},
                       {"omega_c", c.dielectric.omega_c},
                       {"gamma0", c.dielectric.gamma0},
                       {"modulation", modulation_to_json(c.dielectric.modulation)},
                       {"cutoff_lambda", c.dielectric.cutoff_lambda}};
    j["emitter"] = {{"omega_A", c.emitter.omega_A}, {"gamma_A", c.emitter.gamma_A}};
    j["time_grid"] = {{"t_max", c.t_max},
                      {"points_per_period", c.points_per_period},
                      {"points_per_decay", c.points_per_decay}};
    j["tolerances"] = {{"pv", c.tolerances.pv},
                       {"frequency", c.tolerances.frequency},
                       {"oscillatory", c.tolerances.oscillatory},
                       {"sum_rule", c.tolerances.sum_rule}};
    j["mode"] = to_string(c.mode);
    j["output"] = {{"dir", c.out_dir}, {"prefix", c.prefix}};
    j["epsilon_scan"] = {{"omega_min", c.epsilon_scan.omega_min},
                         {"omega_max", c.epsilon_scan.omega_max},
                         {"omega_points", c.epsilon_scan.omega_points},
                         {"t_min", c.epsilon_scan.t_min},
                         {"t_max", c.epsilon_scan.t_max},
                         {"t_points", c.epsilon_scan.t_points}};
    j["shift_detunings"] = c.shift_detunings;
    j["threads"] = c.threads;
    if (!c.response_table.empty()) {
        Json rows = Json::array();
        for (const auto& row : c.response_table) rows.push_back({row[0], row[1]});
        j["response_table"] = rows;
    }
    return j;
}

inline RunConfig config_from_json(const Json& j) {
    RunConfig c;
    if (j.at("schema_version").get<int>() != 1) {
        throw config_error("config: unsupported schema_version (expected 1)");
    }
    const auto& d = j.at("dielectric");
    c.dielectric.omega0 = d.at("omega0").get<double>();
    c.dielectric.omega_c = d.at("omega_c").get<double>();
    c.dielectric.gamma0 = d.at("gamma0").get<double>();
    c.dielectric.modulation = modulation_from_json(d.at("modulation"));
    c.dielectric.cutoff_lambda = d.at("cutoff_lambda").get<double>();
    const auto& e = j.at("emitter");
    c.emitter.omega_A = e.at("omega_A").get<double>();
    c.emitter.gamma_A = e.at("gamma_A").get<double>();
    const auto& tg = j.at("time_grid");
    c.t_max = tg.at("t_max").get<double>();
    c.points_per_period = tg.at("points_per_period").get<int>();
    c.points_per_decay = tg.at("points_per_decay").get<int>();
    if (j.contains("tolerances")) {
        const auto& tol = j.at("tolerances");
        c.tolerances.pv = tol.value("pv", c.tolerances.pv);
        c.tolerances.frequency = tol.value("frequency", c.tolerances.frequency);
        c.tolerances.oscillatory = tol.value("oscillatory", c.tolerances.oscillatory);
        c.tolerances.sum_rule = tol.value("sum_rule", c.tolerances.sum_rule);
    }
    c.mode = trace_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("output")) {
        c.out_dir = j.at("output").value("dir", c.out_dir);
        c.prefix = j.at("output").value("prefix", c.prefix);
    }
    if (j.contains("epsilon_scan")) {
        const auto& s = j.at("epsilon_scan");
        c.epsilon_scan.omega_min = s.value("omega_min", c.epsilon_scan.omega_min);
        c.epsilon_scan.omega_max = s.value("omega_max", c.epsilon_scan.omega_max);
        c.epsilon_scan.omega_points = s.value("omega_points", c.epsilon_scan.omega_points);
        c.epsilon_scan.t_min = s.value("t_min", c.epsilon_scan.t_min);
        c.epsilon_scan.t_max = s.value("t_max", c.epsilon_scan.t_max);
        c.epsilon_scan.t_points = s.value("t_points", c.epsilon_scan.t_points);
    }
    if (j.contains("shift_detunings")) {
        c.shift_detunings = j.at("shift_detunings").get<std::vector<double>>();
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("response_table")) {
        for (const auto& row : j.at("response_table")) {
            c.response_table.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        }
    }
    return c;
}

// Shipped presets. The captions' modulation parameters are fixed; the medium
// scale (omega_c, gamma0, Gamma_A) uses the documented defaults
// omega_c = 0.5, gamma0 = 0.05, Gamma_A = 1e-6 (units of omega0).
inline RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.dielectric.omega0 = 1.0;
    c.dielectric.omega_c = 0.5;
    c.dielectric.gamma0 = 0.05;
    c.emitter.gamma_A = 1e-6;

    auto finish = [&](double detuning_gamma0, double big_omega, double t_max,
                      const std::string& prefix) {
        c.emitter.omega_A = c.dielectric.omega0 + detuning_gamma0 * c.dielectric.gamma0;
        c.dielectric.cutoff_lambda =
            50.0 * std::max({c.dielectric.omega0, c.emitter.omega_A, c.dielectric.omega_c});
        c.dielectric.modulation = ModulationProfile::sinusoidal(0.99, big_omega);
        c.t_max = t_max;
        c.prefix = prefix;
    };

    // in-medium unmodulated rate 2*beta(A=0) used by the captions' Omega
    const double gamma_prime = c.emitter.gamma_A * c.dielectric.omega_c /
                               std::sqrt(2.0 * c.dielectric.omega0 * c.dielectric.gamma0);

    if (name == "fig3a-slow") {
        finish(0.03, 10.0 * gamma_prime, 1.0, "fig3a_slow");
    } else if (name == "fig3a-fast") {
        finish(0.03, 1e4 * gamma_prime, 0.6, "fig3a_fast");
    } else if (name == "fig3b-deep") {
        finish(0.03, 10.0 * c.dielectric.gamma0, 8e-5, "fig3b_deep");
        c.shift_detunings = {0.03};
    } else if (name == "fig3b-weak") {
        finish(0.45, 10.0 * c.dielectric.gamma0, 8e-5, "fig3b_weak");
        c.shift_detunings = {0.45};
    } else if (name == "unmodulated") {
        c.emitter.omega_A = c.dielectric.omega0 + 0.03 * c.dielectric.gamma0;
        c.dielectric.cutoff_lambda =
            50.0 * std::max({c.dielectric.omega0, c.emitter.omega_A, c.dielectric.omega_c});
        c.dielectric.modulation = ModulationProfile::constant();
        c.t_max = 1.0;
        c.prefix = "unmodulated";
    } else if (name == "dispersive-static") {
        c.emitter.omega_A = 1.5;
        c.dielectric.cutoff_lambda = 75.0;
        c.dielectric.modulation = ModulationProfile::constant();
        c.t_max = 2e-4; // 10/gamma0 in 1/Gamma_A units at the defaults
        c.mode = TraceMode::Direct;
        c.prefix = "dispersive_static";
    } else {
        throw config_error("unknown preset: " + name +
                           " (known: fig3a-slow, fig3a-fast, fig3b-deep, fig3b-weak, "
                           "unmodulated, dispersive-static)");
    }
    return c;
}

} // namespace tvdiel
