// emitter.hpp — radiative properties of a two-level emitter embedded in the
// modulated dielectric: the decay factor beta(t), the level shift Delta(t),
// and the regime closed forms. Rates carry Gamma_A through explicitly; time
// is in 1/omega0 units internally.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tvdiel/dielectric.hpp"
#include "tvdiel/errors.hpp"
#include "tvdiel/quadrature.hpp"

namespace tvdiel {

struct EmitterSpec {
    double omega_A = 1.0; // transition frequency (units of omega0)
    double gamma_A = 1e-6; // free-space spontaneous rate (units of omega0)

    void validate() const {
        if (!(omega_A > 0.0)) throw config_error("emitter: omega_A must be > 0");
        if (!(gamma_A > 0.0)) throw config_error("emitter: gamma_A must be > 0");
    }

    // rapid-adiabatic window Gamma_A <= Omega/10 and Omega <= omega_A/10;
    // violations are reported as warnings, never errors
    std::vector<std::string> rapid_adiabatic_warnings(const ModulationProfile& m) const {
        std::vector<std::string> out;
        if (const auto* s = std::get_if<SinusoidalModulation>(&m.variant())) {
            if (!(gamma_A <= s->rate / 10.0)) {
                out.push_back("modulation is not fast compared to Gamma_A (want Gamma_A <= Omega/10)");
            }
            if (!(s->rate <= omega_A / 10.0)) {
                out.push_back("modulation is not adiabatic compared to omega_A (want Omega <= omega_A/10)");
            }
        }
        return out;
    }
};

enum class Regime { Dissipative, Dispersive };

struct RegimeClassification {
    Regime tag = Regime::Dispersive;
    double detuning = 0.0;  // |omega_A - omega0|
    double threshold = 0.0; // gamma0 / 2
};

inline RegimeClassification classify_regime(const DielectricSpec& d, const EmitterSpec& e) {
    RegimeClassification rc;
    rc.detuning = std::abs(e.omega_A - d.omega0);
    rc.threshold = 0.5 * d.gamma0;
    rc.tag = (rc.detuning <= rc.threshold) ? Regime::Dissipative : Regime::Dispersive;
    return rc;
}

// beta0(omega, t) = (Gamma_A/2) (omega/omega_A) Re sqrt(eps(omega, t)); the
// in-medium generalization of the vacuum half-rate.
inline double beta0_rate(const DielectricSpec& d, const EmitterSpec& e, double omega,
                         double t) {
    const Complex n = upper_half_sqrt(permittivity(d, omega, t).value);
    return 0.5 * e.gamma_A * (omega / e.omega_A) * n.real();
}

// two-time memory kernel of the decay integral:
//   i (omega/omega_A) e^{-i(omega-omega_A)(t-t')}
//     sqrt(Im eps(w,t)) sqrt(Im eps(w,t')) / (sqrt(eps(w,t)) + sqrt(eps*(w,t')))
// All square roots take the upper-half branch; sqrt(Im eps) is the positive
// root (real coupling gauge — the common phase cancels in g g*).
inline Complex beta_kernel(const DielectricSpec& d, const EmitterSpec& e, double omega,
                           double t, double t_prime) {
    const Complex eps_t = permittivity(d, omega, t).value;
    const Complex eps_tp = permittivity(d, omega, t_prime).value;
    if (eps_t.imag() <= 0.0 || eps_tp.imag() <= 0.0) return Complex(0.0, 0.0);
    const Complex root_t = upper_half_sqrt(eps_t);
    const Complex root_tp = upper_half_sqrt(std::conj(eps_tp));
    if (root_t.imag() < 0.0 || root_tp.imag() < 0.0) {
        throw std::logic_error("beta_kernel: branch invariant violated");
    }
    const double a = omega - e.omega_A;
    const double tau = t - t_prime;
    const Complex phase{std::cos(a * tau), -std::sin(a * tau)};
    const Complex amp = std::sqrt(eps_t.imag()) * std::sqrt(eps_tp.imag()) /
                        (root_t + root_tp);
    return Complex(0.0, 1.0) * (omega / e.omega_A) * phase * amp;
}

struct DirectRates {
    double beta = 0.0;       // units of the supplied Gamma_A
    double delta = 0.0;      // same units
    double beta_error = 0.0;
    double delta_error = 0.0;
    std::size_t node_count = 0;
};

struct DirectOptions {
    double tol = 1e-5;
    double window_halfwidth = 0.0; // resonant window; 0 -> 5*gamma0
    bool force_literal = false;    // disable the constant-modulation tail split
};

namespace detail {

struct Interval {
    double lo, hi;
};

inline std::vector<Interval> merge_intervals(std::vector<Interval> iv) {
    std::sort(iv.begin(), iv.end(), [](auto a, auto b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& seg : iv) {
        if (!out.empty() && seg.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, seg.hi);
        } else {
            out.push_back(seg);
        }
    }
    return out;
}

} // namespace detail

// beta(t) and Delta(t) by direct quadrature of the double integral,
//   (Gamma_A/2 pi) int_0^Lambda domega int_0^t dtau kernel(omega; t, t-tau),
// with the frequency integral split around the dielectric resonance and the
// tau integral handled by the oscillatory engine at rate omega - omega_A.
// For constant damping the envelope is tau-independent, so on the far tails
// the tau integral is algebraically (env/(ia))(1 - e^{-iat}); the 1 part is a
// smooth frequency integral and the e^{-iat} part goes back through the
// oscillatory engine, now in omega at rate t.
inline DirectRates beta_delta_direct(const DielectricSpec& d, const EmitterSpec& e,
                                     double t, const DirectOptions& opts = {}) {
    DirectRates out;
    if (!(t > 0.0)) return out;
    d.validate();
    e.validate();

    const double lam = d.cutoff_lambda;
    const double wA = e.omega_A;
    double w_half = opts.window_halfwidth > 0.0 ? opts.window_halfwidth : 5.0 * d.gamma0;
    const double band_lo = std::max(1e-9 * d.omega0, d.omega0 - w_half);
    const double band_hi = std::min(lam * (1.0 - 1e-12), d.omega0 + w_half);

    const bool constant_mod = d.modulation.is_constant() && !opts.force_literal;

    // tau-envelope at fixed omega
    auto envelope_at = [&](double w) {
        return [&, w](double tau) { return beta_kernel(d, e, w, t, t - tau) *
                                           Complex(std::cos((w - wA) * tau),
                                                   std::sin((w - wA) * tau)); };
        // beta_kernel carries e^{-ia tau}; the counter-phase above strips it so
        // the oscillatory engine owns the full oscillation bookkeeping.
    };

    double env_scale = std::numeric_limits<double>::infinity();
    if (d.modulation.is_sinusoidal()) env_scale = d.modulation.period() / 8.0;
    if (d.modulation.is_tabulated()) {
        const auto& tab = std::get<TabulatedModulation>(d.modulation.variant());
        double min_dt = t;
        for (std::size_t i = 1; i < tab.times.size(); ++i) {
            min_dt = std::min(min_dt, tab.times[i] - tab.times[i - 1]);
        }
        env_scale = 0.25 * min_dt;
    }

    QuadratureOptions qopts;
    qopts.record_panels = false;
    std::size_t nodes = 0;
    double err_acc = 0.0;

    auto q_of = [&](double w) -> Complex {
        OscillatoryIntegrand osc;
        osc.envelope = envelope_at(w);
        osc.rate = w - wA;
        osc.t_max = t;
        osc.envelope_scale = env_scale;
        auto rep = oscillatory_integrate(osc, opts.tol, qopts);
        nodes += rep.node_count;
        err_acc += rep.error_estimate;
        return rep.value;
    };

    Complex total{};

    if (!constant_mod) {
        SplitOptions sopts;
        sopts.cluster_radius = std::max(8.0 * M_PI / t, 0.5 * d.gamma0);
        sopts.quad = qopts;
        auto rep = frequency_integrate_split(q_of, band_lo, band_hi, wA, lam,
                                             opts.tol, sopts);
        total = rep.value;
        err_acc += rep.error_estimate;
        nodes += rep.node_count;
    } else {
        const double atom_half = std::max(8.0 * M_PI / t, 0.5 * d.gamma0);
        std::vector<detail::Interval> windows{{band_lo, band_hi}};
        windows.push_back({std::max(1e-9 * d.omega0, wA - atom_half),
                           std::min(lam * (1.0 - 1e-12), wA + atom_half)});
        auto merged = detail::merge_intervals(windows);

        auto in_window = [&](double w) {
            for (const auto& seg : merged) {
                if (w >= seg.lo && w <= seg.hi) return true;
            }
            return false;
        };

        // constant-in-tau envelope value
        auto env0 = [&](double w) { return beta_kernel(d, e, w, t, t); };

        auto g = [&](double w) -> Complex {
            if (in_window(w)) return q_of(w);
            return env0(w) / (Complex(0.0, 1.0) * (w - wA));
        };

        // The switching points of g are the merged window edges, all of which
        // appear among the split engine's mandatory breakpoints (band edges
        // and emitter-line cluster points at radius atom_half).
        SplitOptions sopts;
        sopts.cluster_radius = atom_half;
        sopts.cluster_levels = 4;
        sopts.quad = qopts;
        sopts.abs_tol_override =
            opts.tol * M_PI *
            std::max({std::abs(env0(wA)), std::abs(env0(d.omega0)), 1e-30});
        auto rep = frequency_integrate_split(g, band_lo, band_hi, wA, lam,
                                             opts.tol, sopts);
        total = rep.value;
        err_acc += rep.error_estimate;
        nodes += rep.node_count;

        // oscillatory tail part: - int env0(w) e^{-i(w-wA)t}/(i(w-wA)) dw
        double prev = 0.0;
        std::vector<detail::Interval> tails;
        for (const auto& seg : merged) {
            if (seg.lo > prev) tails.push_back({prev, seg.lo});
            prev = seg.hi;
        }
        if (prev < lam) tails.push_back({prev, lam});
        for (const auto& seg : tails) {
            OscillatoryIntegrand osc;
            osc.envelope = [&, seg](double u) {
                const double w = seg.lo + u;
                return env0(w) / (Complex(0.0, 1.0) * (w - wA));
            };
            osc.rate = t;
            osc.t_max = seg.hi - seg.lo;
            auto rep_t = oscillatory_integrate(osc, opts.tol, qopts);
            nodes += rep_t.node_count;
            err_acc += rep_t.error_estimate;
            const double phi = (wA - seg.lo) * t;
            total -= Complex(std::cos(phi), std::sin(phi)) * rep_t.value;
        }
    }

    const double prefactor = e.gamma_A / (2.0 * M_PI);
    out.beta = prefactor * total.real();
    out.delta = -prefactor * total.imag();
    out.beta_error = prefactor * err_acc;
    out.delta_error = prefactor * err_acc;
    out.node_count = nodes;
    return out;
}

inline double beta_direct(const DielectricSpec& d, const EmitterSpec& e, double t,
                          double tol = 1e-5) {
    DirectOptions opts;
    opts.tol = tol;
    return beta_delta_direct(d, e, t, opts).beta;
}

// Dissipative-regime closed form:
//   beta(t) = (Gamma_A/2) omega_c/sqrt(2 omega0 gamma(t)) for |omega_A-omega0| <= gamma0/2,
// zero outside (the theta gate is inclusive at the boundary). Equivalent to
// (Gamma_A/2) Re sqrt(eps(omega_A, t)) in the deep-dissipative limit.
inline double beta_dissipative(const DielectricSpec& d, const EmitterSpec& e, double t) {
    if (std::abs(e.omega_A - d.omega0) > 0.5 * d.gamma0) return 0.0;
    return 0.5 * e.gamma_A * d.omega_c / std::sqrt(2.0 * d.omega0 * d.gamma(t));
}

// Resonant part of the dissipative level shift, in closed form:
//   (beta0(omega_A,t)/pi) ln|(omega_A-omega0-gamma0/2)/(omega_A-omega0+gamma0/2)|
inline double delta_resonant(const DielectricSpec& d, const EmitterSpec& e, double t) {
    const double det = e.omega_A - d.omega0;
    const double half = 0.5 * d.gamma0;
    const double num = std::abs(det - half);
    const double den = std::abs(det + half);
    if (num <= 1e-9 * half || den <= 1e-9 * half) {
        throw std::domain_error(
            "delta_resonant: omega_A sits on a window edge (log singularity); "
            "move the detuning off +-gamma0/2");
    }
    if (det == 0.0) return 0.0; // symmetric window, exactly zero
    return beta0_rate(d, e, e.omega_A, t) / M_PI * std::log(num / den);
}

// Off-resonant shift, shared by both regimes:
//   PV int_0^Lambda beta0(omega, t) / (pi (omega - omega_A)) domega
// The value is cutoff-regularized and grows ~ln Lambda; callers treat only
// differences or the oscillating component as physical.
inline QuadratureReport delta_offresonant_report(const DielectricSpec& d,
                                                 const EmitterSpec& e, double t,
                                                 double tol = 1e-6) {
    PVIntegrand pv;
    pv.numerator = [&, t](double w) { return beta0_rate(d, e, w, t) / M_PI; };
    pv.pole = e.omega_A;
    pv.lo = 1e-9 * d.omega0;
    pv.hi = d.cutoff_lambda;
    const double g = std::max(d.gamma(t), 1e-8);
    const double edge = std::sqrt(d.omega0 * d.omega0 + d.omega_c * d.omega_c);
    for (double center : {d.omega0, edge}) {
        pv.breakpoints.push_back(center);
        for (double dd = 0.5 * g; dd < d.cutoff_lambda; dd *= 2.0) {
            if (center - dd > pv.lo) pv.breakpoints.push_back(center - dd);
            if (center + dd < pv.hi) pv.breakpoints.push_back(center + dd);
        }
    }
    QuadratureOptions opts;
    opts.record_panels = false;
    // excision must stay inside the local smoothness scale of beta0 around
    // the pole (gamma near the band, the detuning further out)
    const double margin = std::min(pv.pole - pv.lo, pv.hi - pv.pole);
    const double local_scale =
        std::max(g, 0.5 * std::abs(e.omega_A - d.omega0));
    const double h = std::min(0.25 * margin, 0.125 * std::min(local_scale, 1.0));
    return pv_integrate(pv, tol, opts, h);
}

inline double delta_offresonant(const DielectricSpec& d, const EmitterSpec& e, double t,
                                double tol = 1e-6) {
    return delta_offresonant_report(d, e, t, tol).value.real();
}

// Dissipative-regime shift: off-resonant PV integral plus the resonant
// closed-form term.
inline double delta_dissipative(const DielectricSpec& d, const EmitterSpec& e, double t,
                                double tol = 1e-6) {
    return delta_offresonant(d, e, t, tol) + delta_resonant(d, e, t);
}

// Dispersive-regime decay: beta0 evaluated at the transition frequency.
inline double beta_dispersive(const DielectricSpec& d, const EmitterSpec& e, double t) {
    return beta0_rate(d, e, e.omega_A, t);
}

// Dispersive-regime shift: the off-resonant PV integral alone.
inline double delta_dispersive(const DielectricSpec& d, const EmitterSpec& e, double t,
                               double tol = 1e-6) {
    return delta_offresonant(d, e, t, tol);
}

// Excited-state population from sampled beta(t):
//   P_e(t) = exp(-2 int_0^t beta dt'), trapezoidal accumulation.
// Small negative beta excursions (quadrature noise) are clamped to zero in
// the accumulation only; the stored trace keeps the raw values.
inline std::vector<double> population_from_beta(const std::vector<double>& times,
                                                const std::vector<double>& betas) {
    if (times.size() != betas.size() || times.empty()) {
        throw std::invalid_argument("population_from_beta: mismatched grids");
    }
    std::vector<double> pop(times.size());
    pop[0] = 1.0;
    double integral = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double b0 = std::max(betas[i - 1], 0.0);
        const double b1 = std::max(betas[i], 0.0);
        integral += 0.5 * (b0 + b1) * (times[i] - times[i - 1]);
        pop[i] = std::exp(-2.0 * integral);
    }
    return pop;
}

// atom-polariton coupling sample; the dipole/angular constants are folded
// into a unit prefactor (diagnostic only)
struct CouplingStrength {
    Complex g{};
    double g_sq = 0.0;
    double k = 0.0;
    double omega = 0.0;
    double t = 0.0;
};

inline CouplingStrength coupling_strength(const DielectricSpec& d, const EmitterSpec& e,
                                          double k, double omega, double t) {
    (void)e;
    CouplingStrength out;
    out.k = k;
    out.omega = omega;
    out.t = t;
    const Complex eps = permittivity(d, omega, t).value;
    if (eps.imag() <= 0.0) return out; // transparent region
    const Complex den = omega * omega * std::conj(eps) - k * k;
    out.g = omega * std::sqrt(eps.imag()) / den;
    out.g_sq = std::norm(out.g);
    return out;
}

// in-medium emission rate without modulation, used to normalize Fig-style
// presets: 2 beta(A = 0) in the applicable regime
inline double unmodulated_rate(const DielectricSpec& d, const EmitterSpec& e) {
    DielectricSpec frozen = d;
    frozen.modulation = ModulationProfile::constant();
    const auto regime = classify_regime(frozen, e);
    if (regime.tag == Regime::Dissipative) return 2.0 * beta_dissipative(frozen, e, 0.0);
    return 2.0 * beta_dispersive(frozen, e, 0.0);
}

} // namespace tvdiel
