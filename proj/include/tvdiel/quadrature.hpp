// quadrature.hpp — the three integration engines: principal-value integrals,
// frequency integrals with resonance-aware splitting, and oscillatory
// integrals with kernels K(tau) e^{-i a tau}.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "tvdiel/errors.hpp"
#include "tvdiel/gauss.hpp"

namespace tvdiel {

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    double error = 0.0;
};

struct QuadratureReport {
    Complex value{};
    double error_estimate = 0.0;
    std::size_t node_count = 0;
    std::vector<Panel> panel_map;

    QuadratureReport& operator+=(const QuadratureReport& other) {
        value += other.value;
        error_estimate += other.error_estimate;
        node_count += other.node_count;
        panel_map.insert(panel_map.end(), other.panel_map.begin(),
                         other.panel_map.end());
        return *this;
    }
};

struct QuadratureOptions {
    bool record_panels = true;
    int max_depth = 40;
    bool throw_on_accuracy = true;
    std::size_t node_budget = 4'000'000; // per engine call
};

namespace detail {

// Adaptive bisection with a fixed-order rule per panel. The error indicator
// compares one panel against its two halves; accepted panels are accumulated
// in ascending order so the reduction is deterministic. Per-panel tolerance
// shares only steer the subdivision; acceptance is judged on the global
// error budget, so isolated kinks cannot stall convergence.
struct AdaptiveWorker {
    const std::function<Complex(double)>& f;
    QuadratureOptions opts;
    KahanSumComplex sum;
    KahanSum err;
    std::size_t nodes = 0;
    std::vector<Panel>* panels;

    void integrate(double lo, double hi, Complex whole, double tol, int depth) {
        const double mid = 0.5 * (lo + hi);
        const Complex left = gauss_panel(f, lo, mid);
        const Complex right = gauss_panel(f, mid, hi);
        nodes += 2 * kGaussOrder;
        const double delta = std::abs(whole - (left + right));
        if (delta <= tol || depth >= opts.max_depth || nodes >= opts.node_budget) {
            sum.add(left);
            sum.add(right);
            err.add(delta);
            if (panels) panels->push_back({lo, hi, delta});
            return;
        }
        integrate(lo, mid, left, 0.5 * tol, depth + 1);
        integrate(mid, hi, right, 0.5 * tol, depth + 1);
    }
};

} // namespace detail

// Integrate f over [lo, hi] with mandatory breakpoints. abs_tol is an
// absolute tolerance on the whole integral, distributed over segments by
// width.
inline QuadratureReport adaptive_integrate(
    const std::function<Complex(double)>& f, double lo, double hi,
    double abs_tol, std::vector<double> breakpoints = {},
    const QuadratureOptions& opts = {}) {
    if (!(hi > lo)) return {};
    breakpoints.push_back(lo);
    breakpoints.push_back(hi);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());

    detail::AdaptiveWorker worker{f, opts, {}, {}, 0, nullptr};
    std::vector<Panel> panels;
    if (opts.record_panels) worker.panels = &panels;

    const double total_width = hi - lo;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (a < lo || b > hi || !(b > a)) continue;
        const Complex whole = gauss_panel(f, a, b);
        worker.nodes += kGaussOrder;
        worker.integrate(a, b, whole, abs_tol * (b - a) / total_width, 0);
    }

    QuadratureReport report;
    report.value = worker.sum.value();
    report.error_estimate = worker.err.value();
    report.node_count = worker.nodes;
    report.panel_map = std::move(panels);
    if (report.error_estimate > 4.0 * abs_tol && opts.throw_on_accuracy) {
        throw accuracy_error("adaptive_integrate: tolerance not reached");
    }
    return report;
}

// ---------------------------------------------------------------------------
// Principal-value engine
// ---------------------------------------------------------------------------

struct PVIntegrand {
    std::function<double(double)> numerator; // continuous at the pole
    double pole = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    // optional seeds so that narrow features away from the pole are resolved
    std::vector<double> breakpoints{};
};

// PV integral of numerator(x)/(x - pole) over [lo, hi]. A symmetric window of
// half-width h around the pole is excised; h is halved twice and the three
// excised integrals are Richardson-extrapolated (the odd part cancels, so the
// excision error is 2 n'(p) h + c3 h^3 + ..., eliminated order by order). If
// the extrapolation residual exceeds the tolerance, h shrinks and the stack
// is rebuilt.
inline QuadratureReport pv_integrate(const PVIntegrand& in, double tol,
                                     const QuadratureOptions& opts = {},
                                     double h_override = 0.0) {
    const double p = in.pole;
    if (!(p > in.lo && p < in.hi)) {
        throw std::domain_error("pv_integrate: pole must lie strictly inside bounds");
    }
    const double margin = std::min(p - in.lo, in.hi - p);
    double h = (h_override > 0.0) ? h_override : 0.25 * margin;
    h = std::min(h, 0.5 * margin);

    const auto f = [&](double x) -> Complex {
        return Complex(in.numerator(x) / (x - p), 0.0);
    };

    // magnitude scale for the absolute tolerance; several probes so a
    // numerator zero at any single point cannot collapse the tolerance
    double scale = 1e-300;
    for (double x : {p, in.lo, in.hi, p - 0.5 * margin, p + 0.5 * margin,
                     p - 0.125 * margin, p + 0.125 * margin,
                     0.5 * (in.lo + p), 0.5 * (p + in.hi)}) {
        if (x >= in.lo && x <= in.hi) {
            scale = std::max(scale, std::abs(in.numerator(x)));
        }
    }

    QuadratureOptions sub_opts = opts;
    sub_opts.record_panels = false;
    sub_opts.throw_on_accuracy = false; // acceptance is judged on the stack below

    QuadratureReport report;
    const int max_shrink = 8;
    for (int attempt = 0; attempt < max_shrink; ++attempt) {
        const double abs_tol =
            tol * scale * std::max(1.0, std::log(1.0 + (in.hi - in.lo) / h));

        // region outside the +-h window, breakpoints graded toward the pole
        std::vector<double> brk = in.breakpoints;
        for (double d = h; d < margin; d *= 2.0) {
            if (p - d > in.lo) brk.push_back(p - d);
            if (p + d < in.hi) brk.push_back(p + d);
        }
        auto outside_lo = adaptive_integrate(f, in.lo, p - h, 0.5 * abs_tol, brk, sub_opts);
        auto outside_hi = adaptive_integrate(f, p + h, in.hi, 0.5 * abs_tol, brk, sub_opts);

        // shells between h/4..h/2 and h/2..h on both sides
        auto shell = [&](double inner, double outer) {
            auto a = adaptive_integrate(f, p - outer, p - inner, 0.25 * abs_tol, {}, sub_opts);
            auto b = adaptive_integrate(f, p + inner, p + outer, 0.25 * abs_tol, {}, sub_opts);
            a += b;
            return a;
        };
        auto s1 = shell(0.5 * h, h);        // between h/2 and h
        auto s2 = shell(0.25 * h, 0.5 * h); // between h/4 and h/2

        const Complex a_h = outside_lo.value + outside_hi.value; // excised at h
        const Complex a_h2 = a_h + s1.value;                     // excised at h/2
        const Complex a_h4 = a_h2 + s2.value;                    // excised at h/4

        // Richardson: error(h) = c1 h + c3 h^3 + ...
        const Complex r1 = 2.0 * a_h2 - a_h;       // kills c1, O(h^3)
        const Complex r1b = 2.0 * a_h4 - a_h2;     // same at h/2
        const Complex r2 = (8.0 * r1b - r1) / 7.0; // kills c3, O(h^5)

        const double richardson_err = std::abs(r2 - r1b);
        report.value = r2;
        report.error_estimate = outside_lo.error_estimate + outside_hi.error_estimate +
                                s1.error_estimate + s2.error_estimate + richardson_err;
        report.node_count += outside_lo.node_count + outside_hi.node_count +
                             s1.node_count + s2.node_count;
        if (opts.record_panels) {
            report.panel_map.push_back({p - h, p + h, richardson_err});
        }

        const double accept =
            std::max({abs_tol * 8.0, tol * std::abs(report.value),
                      32.0 * std::numeric_limits<double>::epsilon() * scale *
                          std::max(1.0, std::abs(report.value))});
        if (report.error_estimate <= accept) return report;
        h *= 0.25; // h_override is only the starting width; shrink freely
        if (h < 64.0 * std::numeric_limits<double>::epsilon() *
                    std::max(std::abs(p), 1.0)) {
            break;
        }
    }
    if (opts.throw_on_accuracy) {
        throw accuracy_error("pv_integrate: requested tolerance not reached");
    }
    return report;
}

// ---------------------------------------------------------------------------
// Oscillatory engine
// ---------------------------------------------------------------------------

struct OscillatoryIntegrand {
    std::function<Complex(double)> envelope; // slowly varying
    double rate = 0.0;                       // a = omega - omega_A
    double t_max = 0.0;                      // integrate tau over [0, t_max]
    double envelope_scale = std::numeric_limits<double>::infinity();
};

namespace detail {

inline Complex oscillatory_pass(const OscillatoryIntegrand& in, std::size_t n,
                                std::size_t& nodes, double& env_mag) {
    const double h = in.t_max / static_cast<double>(n);
    KahanSumComplex acc;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = static_cast<double>(k) * h;
        const double c = a + 0.5 * h;
        Complex panel{};
        for (std::size_t i = 0; i < kGaussOrder; ++i) {
            const double tau = c + 0.5 * h * kGaussNodes[i];
            const Complex env = in.envelope(tau);
            env_mag = std::max(env_mag, std::abs(env));
            const Complex phase{std::cos(in.rate * tau), -std::sin(in.rate * tau)};
            panel += kGaussWeights[i] * env * phase;
        }
        acc.add(0.5 * h * panel);
        nodes += kGaussOrder;
    }
    return acc.value();
}

} // namespace detail

// int_0^T envelope(tau) e^{-i rate tau} dtau. Panels are at most a quarter
// oscillation period (and at most envelope_scale) wide; a coarser pass with
// half the panel count provides the a-posteriori error estimate.
inline QuadratureReport oscillatory_integrate(const OscillatoryIntegrand& in,
                                              double tol,
                                              const QuadratureOptions& opts = {}) {
    QuadratureReport report;
    if (!(in.t_max > 0.0)) return report;
    double h_max = in.t_max;
    if (in.rate != 0.0) {
        h_max = std::min(h_max, 0.5 * M_PI / std::abs(in.rate)); // quarter period
    }
    if (in.envelope_scale > 0.0) h_max = std::min(h_max, in.envelope_scale);
    std::size_t n = static_cast<std::size_t>(std::ceil(in.t_max / h_max));
    n = std::max<std::size_t>(n, 2);

    std::size_t nodes = 0;
    double env_mag = 0.0;
    const Complex coarse = detail::oscillatory_pass(in, (n + 1) / 2, nodes, env_mag);
    Complex fine = detail::oscillatory_pass(in, n, nodes, env_mag);
    report.value = fine;
    report.error_estimate = std::abs(fine - coarse);
    report.node_count = nodes;

    // tolerance floor: cancellation can make |value| << envelope * T
    auto tol_floor = [&] {
        return tol * std::max(std::abs(report.value), env_mag * in.t_max * 1e-3);
    };
    if (report.error_estimate > tol_floor()) {
        // one refinement retry before giving up
        const Complex finer = detail::oscillatory_pass(in, 2 * n, report.node_count, env_mag);
        report.error_estimate = std::abs(finer - fine);
        report.value = finer;
        if (opts.throw_on_accuracy && report.error_estimate > tol_floor()) {
            throw accuracy_error("oscillatory_integrate: tolerance not reached");
        }
    }
    if (opts.record_panels) {
        report.panel_map.push_back({0.0, in.t_max, report.error_estimate});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Resonance-aware frequency integrals
// ---------------------------------------------------------------------------

struct SplitOptions {
    double cluster_radius = 0.0;   // 0 -> derive from window width
    int cluster_levels = 4;
    double abs_tol_override = 0.0; // 0 -> probe the integrand for a scale
    QuadratureOptions quad{};
};

// int_0^upper f(omega) domega, split into the resonant window
// [window_lo, window_hi] and the off-resonant remainder. Mandatory nodes sit
// at the window edges; extra breakpoints cluster around the emitter line.
inline QuadratureReport frequency_integrate_split(
    const std::function<Complex(double)>& f, double window_lo, double window_hi,
    double emitter_line, double upper, double tol,
    const SplitOptions& sopts = {}) {
    if (!(window_lo > 0.0) || !(window_hi < upper) || !(window_lo < window_hi)) {
        throw std::domain_error("frequency_integrate_split: window outside (0, upper)");
    }
    const double lo = 0.0;
    std::vector<double> brk{window_lo, window_hi};
    double radius = sopts.cluster_radius;
    if (radius <= 0.0) radius = 0.25 * (window_hi - window_lo);
    for (int k = 0; k < sopts.cluster_levels; ++k) {
        const double d = radius * std::pow(2.0, k);
        if (emitter_line - d > lo) brk.push_back(emitter_line - d);
        if (emitter_line + d < upper) brk.push_back(emitter_line + d);
    }
    if (emitter_line > lo && emitter_line < upper) brk.push_back(emitter_line);

    double abs_tol = sopts.abs_tol_override;
    if (abs_tol <= 0.0) {
        // probe a magnitude scale; averaging dilutes any isolated spike
        double scale = 0.0;
        int probes = 0;
        for (double w : {window_lo, 0.5 * (window_lo + window_hi), window_hi,
                         std::min(std::max(emitter_line, window_lo * 0.5), upper * 0.999),
                         0.5 * upper}) {
            if (w > lo && w < upper) {
                scale += std::abs(f(w));
                ++probes;
            }
        }
        scale = (probes > 0 && scale > 0.0) ? scale / probes : 1.0;
        abs_tol = tol * scale * (window_hi - window_lo + 1.0);
    }

    return adaptive_integrate(f, lo, upper, abs_tol, brk, sopts.quad);
}

} // namespace tvdiel
