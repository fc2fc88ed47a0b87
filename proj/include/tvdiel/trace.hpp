// trace.hpp — time series of beta(t), Delta(t) and the excited-state
// population, with CSV/JSON emission. Internally time is in 1/omega0 units;
// files use 1/Gamma_A for time and Gamma_A for rates.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tvdiel/emitter.hpp"
#include "tvdiel/interpolation.hpp"

namespace tvdiel {

enum class TraceMode { Direct, Closed, Both };

struct TraceOptions {
    double t_max = 0.0;          // internal units (1/omega0)
    int points_per_period = 40;  // >= 40
    int points_per_decay = 200;  // >= 200
    double tol = 1e-5;
    bool compute_delta = true;
    int threads = 1;
    std::size_t max_points = 4'000'000;
};

struct DecayTrace {
    std::vector<double> t;     // internal units
    std::vector<double> beta;  // internal units (omega0)
    std::vector<double> delta;
    std::vector<double> population;
    std::vector<double> beta_err;
    std::vector<double> delta_err;
    std::vector<std::size_t> node_counts;
    std::vector<char> failed;  // per-point quadrature failure flags
    Regime regime = Regime::Dispersive;
    double gamma_A = 1.0;
    std::string mode;

    std::size_t failure_count() const {
        std::size_t n = 0;
        for (char f : failed) n += (f != 0);
        return n;
    }
};

namespace detail {

// Delta_off depends on t only through gamma(t); profile it over the gamma
// range once and interpolate (verified against direct evaluation in tests).
class DeltaOffProfile {
public:
    DeltaOffProfile(const DielectricSpec& d, const EmitterSpec& e, double tol) {
        const double g_lo = d.gamma0 * d.modulation.min_factor();
        const double g_hi = d.gamma0 * d.modulation.max_factor();
        if (d.modulation.is_tabulated()) {
            // tabulated profiles: bound the range by the samples
            const auto& tab = std::get<TabulatedModulation>(d.modulation.variant());
            double lo = tab.gamma.front(), hi = tab.gamma.front();
            for (double g : tab.gamma) {
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
            build(d, e, lo, hi, tol);
        } else {
            build(d, e, g_lo, g_hi, tol);
        }
    }

    double operator()(double gamma) const {
        if (constant_) return value_;
        return interp_(std::min(std::max(gamma, interp_.min_x()), interp_.max_x()));
    }

    double error_bound() const { return err_; }

private:
    void build(const DielectricSpec& d, const EmitterSpec& e, double g_lo, double g_hi,
               double tol) {
        DielectricSpec frozen = d;
        frozen.modulation = ModulationProfile::constant();
        if (g_hi - g_lo <= 1e-15 * g_hi) {
            frozen.gamma0 = g_lo;
            value_ = delta_offresonant(frozen, e, 0.0, tol);
            constant_ = true;
            return;
        }
        const int n = 49;
        std::vector<double> gs(n), vals(n);
        for (int i = 0; i < n; ++i) {
            // Chebyshev-like clustering toward the range ends
            const double x = std::cos(M_PI * (n - 1 - i) / (n - 1));
            gs[i] = 0.5 * (g_lo + g_hi) + 0.5 * (g_hi - g_lo) * x;
            frozen.gamma0 = gs[i];
            vals[i] = delta_offresonant(frozen, e, 0.0, tol);
        }
        gs.front() = g_lo;
        gs.back() = g_hi;
        interp_ = MonotoneCubic(gs, vals);
        // interpolation error probe at midpoints of the widest cells
        double err = 0.0;
        for (int i : {0, n / 2, n - 2}) {
            const double gm = 0.5 * (gs[i] + gs[i + 1]);
            frozen.gamma0 = gm;
            err = std::max(err, std::abs(interp_(gm) - delta_offresonant(frozen, e, 0.0, tol)));
        }
        err_ = err;
    }

    bool constant_ = false;
    double value_ = 0.0;
    double err_ = 0.0;
    MonotoneCubic interp_{{0.0, 1.0}, {0.0, 0.0}};
};

inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const int n_threads = std::min<int>(threads, static_cast<int>(n));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < n;
                 i += static_cast<std::size_t>(n_threads)) {
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

// uniform time grid resolving both the modulation period and the decay time
inline std::vector<double> make_time_grid(const DielectricSpec& d, const EmitterSpec& e,
                                          const TraceOptions& opts) {
    if (!(opts.t_max > 0.0)) throw config_error("trace: t_max must be > 0");
    if (opts.points_per_period < 40) {
        throw config_error("trace: points_per_period must be >= 40");
    }
    if (opts.points_per_decay < 200) {
        throw config_error("trace: points_per_decay must be >= 200");
    }
    // decay-time estimate from the closed form averaged over one period
    const auto regime = classify_regime(d, e);
    double beta_bar = 0.0;
    const double period = d.modulation.period();
    const int samples = 64;
    for (int i = 0; i < samples; ++i) {
        const double ts = std::isfinite(period) ? period * i / samples : 0.0;
        beta_bar += (regime.tag == Regime::Dissipative) ? beta_dissipative(d, e, ts)
                                                        : beta_dispersive(d, e, ts);
    }
    beta_bar /= samples;
    double dt = opts.t_max / 32.0; // floor so short traces are still sampled
    if (beta_bar > 0.0) dt = std::min(dt, 1.0 / (2.0 * beta_bar) / opts.points_per_decay);
    if (std::isfinite(period)) dt = std::min(dt, period / opts.points_per_period);

    const auto n = static_cast<std::size_t>(std::ceil(opts.t_max / dt)) + 1;
    if (n > opts.max_points) {
        throw config_error("trace: grid would exceed max_points; shorten t_max or relax the grid");
    }
    std::vector<double> grid(n);
    const double step = opts.t_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = step * static_cast<double>(i);
    return grid;
}

inline DecayTrace compute_decay_trace(const DielectricSpec& d, const EmitterSpec& e,
                                      TraceMode mode, const TraceOptions& opts) {
    d.validate();
    e.validate();
    DecayTrace trace;
    trace.t = make_time_grid(d, e, opts);
    trace.gamma_A = e.gamma_A;
    const auto regime = classify_regime(d, e);
    trace.regime = regime.tag;
    const std::size_t n = trace.t.size();
    trace.beta.assign(n, 0.0);
    trace.delta.assign(n, 0.0);
    trace.beta_err.assign(n, 0.0);
    trace.delta_err.assign(n, 0.0);
    trace.node_counts.assign(n, 0);
    trace.failed.assign(n, 0);

    if (mode == TraceMode::Direct) {
        trace.mode = "direct";
        detail::parallel_for(n, opts.threads, [&](std::size_t i) {
            DirectOptions dop;
            dop.tol = opts.tol;
            try {
                const auto rates = beta_delta_direct(d, e, trace.t[i], dop);
                trace.beta[i] = rates.beta;
                trace.delta[i] = rates.delta;
                trace.beta_err[i] = rates.beta_error;
                trace.delta_err[i] = rates.delta_error;
                trace.node_counts[i] = rates.node_count;
            } catch (const accuracy_error&) {
                // flag the point and continue; the emitted trace keeps NaN
                trace.failed[i] = 1;
                trace.beta[i] = std::numeric_limits<double>::quiet_NaN();
                trace.delta[i] = std::numeric_limits<double>::quiet_NaN();
            }
        });
    } else {
        trace.mode = "closed";
        const bool dissipative = regime.tag == Regime::Dissipative;
        std::unique_ptr<detail::DeltaOffProfile> off;
        if (opts.compute_delta) {
            off = std::make_unique<detail::DeltaOffProfile>(d, e, opts.tol);
        }
        detail::parallel_for(n, opts.threads, [&](std::size_t i) {
            const double t = trace.t[i];
            trace.beta[i] = dissipative ? beta_dissipative(d, e, t)
                                        : beta_dispersive(d, e, t);
            if (opts.compute_delta) {
                double delta = (*off)(d.gamma(t));
                if (dissipative) delta += delta_resonant(d, e, t);
                trace.delta[i] = delta;
                trace.delta_err[i] = off->error_bound();
            }
        });
    }
    if (trace.failure_count() == 0) {
        trace.population = population_from_beta(trace.t, trace.beta);
    } else {
        // the accumulated integral is unknown past the first failed point
        std::size_t first_bad = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (trace.failed[i]) {
                first_bad = i;
                break;
            }
        }
        std::vector<double> head_t(trace.t.begin(), trace.t.begin() + first_bad);
        std::vector<double> head_b(trace.beta.begin(), trace.beta.begin() + first_bad);
        trace.population.assign(n, std::numeric_limits<double>::quiet_NaN());
        if (first_bad > 0) {
            const auto head = population_from_beta(head_t, head_b);
            std::copy(head.begin(), head.end(), trace.population.begin());
        }
    }
    return trace;
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// CSV with t in 1/Gamma_A units and rates in Gamma_A units
inline std::string decay_trace_csv(const DecayTrace& tr) {
    std::ostringstream os;
    os << "t, beta, delta, population, beta_err, delta_err\n";
    const double ga = tr.gamma_A;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        os << format_double(tr.t[i] * ga) << ',' << format_double(tr.beta[i] / ga) << ','
           << format_double(tr.delta[i] / ga) << ',' << format_double(tr.population[i])
           << ',' << format_double(tr.beta_err[i] / ga) << ','
           << format_double(tr.delta_err[i] / ga) << '\n';
    }
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

} // namespace tvdiel
