// fano.hpp — diagonalization ingredients for the dressed matter continuum:
// the renormalized resonance omega0~(t), the resolvent factor z(omega, t),
// the expansion coefficients, and the numerical certificates (sum rule,
// coupling inequality) that guarantee bosonic commutation at all times.

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tvdiel/dielectric.hpp"
#include "tvdiel/errors.hpp"
#include "tvdiel/quadrature.hpp"

namespace tvdiel {

// reservoir coupling density |v(omega, t)|^2 / rho^2 on (0, cutoff); the
// analytic continuation to negative omega is even by construction. rho = 1.
struct CouplingSpec {
    double omega0 = 1.0;
    double cutoff = 50.0;
    std::function<double(double, double)> v_sq; // (omega, t) -> |v|^2/rho^2
    bool boxcar = false;                        // flat in omega (Drude-Lorentz)
    std::function<double(double)> boxcar_level; // t -> level, when boxcar

    // Drude-Lorentz correspondence: |v|^2/rho^2 = 2 gamma(t)/pi on (0, Lambda)
    static CouplingSpec drude_lorentz(const DielectricSpec& d) {
        CouplingSpec c;
        c.omega0 = d.omega0;
        c.cutoff = d.cutoff_lambda;
        c.boxcar = true;
        c.boxcar_level = [d](double t) { return 2.0 * d.gamma(t) / M_PI; };
        c.v_sq = [d](double omega, double t) {
            if (!(omega > 0.0) || omega >= d.cutoff_lambda) return 0.0;
            return 2.0 * d.gamma(t) / M_PI;
        };
        return c;
    }
};

// Precomputes the t-dependent pieces once; all members are pure in omega.
class FanoEvaluator {
public:
    FanoEvaluator(const CouplingSpec& spec, double t, double tol = 1e-9)
        : spec_(spec), t_(t), tol_(tol) {
        if (spec_.boxcar) {
            coupling_integral_ = spec_.boxcar_level(t_) * spec_.cutoff;
        } else {
            QuadratureOptions opts;
            opts.record_panels = false;
            auto f = [&](double w) { return Complex(spec_.v_sq(w, t_), 0.0); };
            std::vector<double> seeds;
            for (int k = 1; k < 16; ++k) {
                seeds.push_back(spec_.cutoff * k / 16.0);
            }
            auto rep = adaptive_integrate(f, 0.0, spec_.cutoff, tol_, seeds, opts);
            coupling_integral_ = rep.value.real();
        }
        if (!std::isfinite(coupling_integral_) || coupling_integral_ < 0.0) {
            throw config_error("coupling integral must be finite and non-negative");
        }
        omega0_tilde_sq_ = spec_.omega0 * spec_.omega0 + coupling_integral_;
        omega0_tilde_ = std::sqrt(omega0_tilde_sq_);
    }

    double t() const { return t_; }
    double omega0_tilde() const { return omega0_tilde_; }
    double coupling_integral() const { return coupling_integral_; }

    // |V(omega, t)|^2 = (|v|^2/rho^2) * omega / omega0~(t) on (0, cutoff)
    double big_v_sq(double omega) const {
        if (!(omega > 0.0) || omega >= spec_.cutoff) return 0.0;
        return spec_.v_sq(omega, t_) * omega / omega0_tilde_;
    }

    double big_v(double omega) const { return std::sqrt(big_v_sq(omega)); } // real gauge

    // z(omega, t) = 1 - (1/2 omega0~) [ PV int |V~(w')|^2/(w'-omega) dw'
    //                                   - i pi |V~(omega)|^2 ]
    // with the odd extension |V~(-w)|^2 = -|V~(w)|^2. Conjugation symmetry:
    // z(-omega) = conj(z(omega)).
    Complex z(double omega) const {
        const double w = omega;
        const double aw = std::abs(w);
        if (aw == spec_.cutoff) {
            throw accuracy_error("z: pole sits at the cutoff edge");
        }
        double pv_val;
        if (spec_.boxcar) {
            // PV int_{-L}^{L} (level/omega0~) w'/(w'-w) dw'
            //   = (level/omega0~) [2L + w ln|(L-w)/(L+w)|]
            const double L = spec_.cutoff;
            const double lvl = spec_.boxcar_level(t_) / omega0_tilde_;
            pv_val = lvl * (2.0 * L + w * std::log(std::abs((L - w) / (L + w))));
        } else {
            pv_val = pv_folded(w);
        }
        const double im = (aw < spec_.cutoff) ? M_PI * odd_big_v_sq(w) : 0.0;
        return Complex(1.0 - pv_val / (2.0 * omega0_tilde_),
                       im / (2.0 * omega0_tilde_));
    }

    // D(omega, t) = omega^2 - omega0~^2 z(omega, t); zero-free on the real
    // axis whenever the coupling inequality holds.
    Complex denominator(double omega) const {
        return omega * omega - omega0_tilde_sq_ * z(omega);
    }

private:
    // odd extension of |V|^2
    double odd_big_v_sq(double w) const {
        return (w >= 0.0) ? big_v_sq(w) : -big_v_sq(-w);
    }

    // PV int_{-L}^{L} |V~(w')|^2/(w'-w) dw' folded onto (0, L):
    //   PV int_0^L |V|^2/(w'-|w|) + int_0^L |V|^2/(w'+|w|), sign-adjusted
    double pv_folded(double w) const {
        const double aw = std::abs(w);
        const double L = spec_.cutoff;
        QuadratureOptions opts;
        opts.record_panels = false;
        std::vector<double> seeds;
        for (int k = 1; k < 16; ++k) seeds.push_back(L * k / 16.0);

        double principal = 0.0;
        if (aw > 0.0 && aw < L) {
            PVIntegrand pv;
            pv.numerator = [&](double x) { return big_v_sq(x); };
            pv.pole = aw;
            pv.lo = 0.0;
            pv.hi = L;
            pv.breakpoints = seeds;
            principal = pv_integrate(pv, tol_, opts).value.real();
        } else {
            auto f = [&](double x) { return Complex(big_v_sq(x) / (x - aw), 0.0); };
            principal = adaptive_integrate(f, 0.0, L, tol_, seeds, opts).value.real();
        }
        auto g = [&](double x) { return Complex(big_v_sq(x) / (x + aw), 0.0); };
        const double mirror = adaptive_integrate(g, 0.0, L, tol_, seeds, opts).value.real();
        // the odd extension makes the folded integral even in w
        return principal + mirror;
    }

    CouplingSpec spec_;
    double t_;
    double tol_;
    double coupling_integral_ = 0.0;
    double omega0_tilde_ = 0.0;
    double omega0_tilde_sq_ = 0.0;
};

inline double omega0_tilde(const CouplingSpec& spec, double t) {
    return FanoEvaluator(spec, t).omega0_tilde();
}

inline Complex z_of(const CouplingSpec& spec, double omega, double t) {
    return FanoEvaluator(spec, t).z(omega);
}

// expansion coefficients of the dressed matter operator; the delta(omega -
// omega') part of alpha1 is carried structurally by alpha1_has_delta, and
// alpha1_regular holds the principal-value kernel (the -i eps prescription
// contributes its residue only inside integrals).
struct FanoCoefficients {
    Complex alpha0{};
    Complex beta0{};
    Complex alpha1_regular{};
    bool alpha1_has_delta = true;
    Complex beta1{};
};

inline FanoCoefficients fano_coeffs(const CouplingSpec& spec, double omega,
                                    double omega_prime, double t) {
    if (!(omega > 0.0) || !(omega < spec.cutoff)) {
        throw std::domain_error("fano_coeffs: need 0 < omega < cutoff");
    }
    FanoEvaluator ev(spec, t);
    const Complex den = ev.denominator(omega);
    if (std::abs(den) == 0.0) {
        throw accuracy_error("fano_coeffs: vanishing denominator");
    }
    const double omt = ev.omega0_tilde();
    const double v_w = ev.big_v(omega);
    const double v_wp = ev.big_v(omega_prime);
    FanoCoefficients c;
    c.alpha0 = 0.5 * (omega + omt) * v_w / den;
    c.beta0 = 0.5 * (omega - omt) * v_w / den;
    if (omega == omega_prime) {
        throw std::domain_error(
            "fano_coeffs: alpha1's principal-value kernel is singular at omega == omega'");
    }
    c.alpha1_regular = 0.5 * omt * v_wp / (omega - omega_prime) * v_w / den;
    c.beta1 = 0.5 * omt * v_wp / (omega + omega_prime) * v_w / den;
    return c;
}

struct CheckReport {
    std::string check;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    double error_estimate = 0.0;
    bool pass = false;
};

// Normalization integral int_0^cutoff (|alpha0|^2 - |beta0|^2) domega, whose
// integrand reduces to omega omega0~ |V|^2 / |D|^2. It equals 1 at every t.
// Nodes cluster where |D| is smallest (the dressed resonance).
inline CheckReport sum_rule_check(const CouplingSpec& spec, double t,
                                  double tolerance = 1e-3) {
    FanoEvaluator ev(spec, t);
    const double omt = ev.omega0_tilde();
    auto integrand = [&](double w) {
        const Complex den = ev.denominator(w);
        const double d2 = std::norm(den);
        return Complex(w * omt * ev.big_v_sq(w) / d2, 0.0);
    };

    // The integrand peaks where Re D crosses zero (the dressed resonance);
    // locate every crossing by scan + bisection and grade panels around it.
    std::vector<double> seeds{spec.omega0};
    const int scan_n = 1024;
    auto re_d = [&](double w) { return ev.denominator(w).real(); };
    double peak_val = 0.0;
    double prev_w = spec.cutoff * 1e-6;
    double prev_v = re_d(prev_w);
    std::vector<double> roots;
    for (int i = 1; i < scan_n; ++i) {
        const double w = spec.cutoff * i / scan_n;
        const double v = re_d(w);
        if (prev_v == 0.0 || prev_v * v < 0.0) {
            double a = prev_w, b = w;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (a + b);
                if (re_d(a) * re_d(m) <= 0.0) {
                    b = m;
                } else {
                    a = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_w = w;
        prev_v = v;
        peak_val = std::max(peak_val, integrand(w).real());
    }
    for (double root : roots) {
        seeds.push_back(root);
        peak_val = std::max(peak_val, integrand(root).real());
        // half-width of the resonance: |Im D| / |d Re D / d omega|
        const double dw = std::max(1e-7 * spec.cutoff, 1e-9);
        const double slope = std::abs(re_d(root + dw) - re_d(root - dw)) / (2.0 * dw);
        double width = std::abs(ev.denominator(root).imag()) / std::max(slope, 1e-12);
        width = std::max(width, spec.cutoff * 1e-9);
        for (double d = 0.25 * width; d < spec.cutoff; d *= 2.0) {
            if (root - d > 0.0) seeds.push_back(root - d);
            if (root + d < spec.cutoff) seeds.push_back(root + d);
        }
    }
    // refine any scanned region whose integrand exceeds 1% of the peak
    for (int i = 1; i < scan_n; ++i) {
        const double w = spec.cutoff * i / scan_n;
        if (integrand(w).real() > 0.01 * peak_val) seeds.push_back(w);
    }

    QuadratureOptions opts;
    opts.record_panels = false;
    auto rep = adaptive_integrate(integrand, 0.0, spec.cutoff,
                                  0.02 * tolerance, seeds, opts);
    CheckReport out;
    out.check = "sum_rule";
    out.value = rep.value.real();
    out.target = 1.0;
    out.tolerance = tolerance;
    out.error_estimate = rep.error_estimate;
    out.pass = std::abs(out.value - 1.0) <= tolerance;
    return out;
}

// int_0^cutoff |V(omega,t)|^2/omega domega < omega0~(t); for the boxcar
// coupling this reduces to omega0^2 > 0. The margin is reported relative to
// omega0~^2.
inline CheckReport coupling_inequality_check(const CouplingSpec& spec, double t) {
    FanoEvaluator ev(spec, t);
    double lhs;
    if (spec.boxcar) {
        lhs = spec.boxcar_level(t) * spec.cutoff / ev.omega0_tilde();
    } else {
        QuadratureOptions opts;
        opts.record_panels = false;
        auto f = [&](double w) { return Complex(ev.big_v_sq(w) / w, 0.0); };
        std::vector<double> seeds;
        for (int k = 1; k < 16; ++k) seeds.push_back(spec.cutoff * k / 16.0);
        lhs = adaptive_integrate(f, 0.0, spec.cutoff, 1e-9, seeds, opts).value.real();
    }
    const double rhs = ev.omega0_tilde();
    CheckReport out;
    out.check = "coupling_inequality";
    // margin = (omega0~ - lhs)/omega0~ = omega0^2/omega0~^2 for the boxcar
    out.value = (rhs - lhs) / rhs;
    out.target = 0.0;
    out.tolerance = 0.0;
    out.pass = lhs < rhs;
    return out;
}

} // namespace tvdiel
