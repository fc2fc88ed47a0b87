// dielectric.hpp — time-varying Drude-Lorentz permittivity and derived
// response quantities. All frequencies are in units of omega0 unless a spec
// overrides omega0 itself.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "tvdiel/errors.hpp"
#include "tvdiel/gauss.hpp"
#include "tvdiel/modulation.hpp"

namespace tvdiel {

struct DielectricSpec {
    double omega0 = 1.0;        // transverse resonance
    double omega_c = 0.5;       // plasma / coupling frequency
    double gamma0 = 0.05;       // base damping
    ModulationProfile modulation{};
    double cutoff_lambda = 50.0; // boxcar cutoff of the reservoir coupling

    void validate() const {
        if (!(omega0 > 0.0)) throw config_error("dielectric: omega0 must be > 0");
        if (!(omega_c >= 0.0)) throw config_error("dielectric: omega_c must be >= 0");
        if (!(gamma0 > 0.0)) throw config_error("dielectric: gamma0 must be > 0");
        if (!(cutoff_lambda >= 10.0 * std::max(omega0, omega_c))) {
            throw config_error("dielectric: cutoff_lambda must be >= 10*max(omega0, omega_c)");
        }
        if (!(gamma0 * modulation.min_factor() > 0.0)) {
            throw config_error("dielectric: modulated gamma(t) must stay > 0");
        }
    }

    double gamma(double t) const { return modulation.gamma_at(gamma0, t); }
};

// one response sample; beyond_cutoff marks |omega| >= cutoff where the
// boxcar forces epsilon = 1 exactly
struct ComplexResponse {
    Complex value{};
    double omega = 0.0;
    double t = 0.0;
    bool beyond_cutoff = false;
};

inline double gamma_at(const DielectricSpec& spec, double t) { return spec.gamma(t); }

// epsilon(omega, t) = 1 + omega_c^2 / (omega0^2 - omega^2 - i gamma(t) omega)
// inside the boxcar; exactly 1 outside. The closed form is its own analytic
// continuation to negative omega.
inline ComplexResponse permittivity(const DielectricSpec& spec, double omega, double t) {
    ComplexResponse out;
    out.omega = omega;
    out.t = t;
    if (std::abs(omega) >= spec.cutoff_lambda) {
        out.value = 1.0;
        out.beyond_cutoff = true;
        return out;
    }
    const double g = spec.gamma(t);
    const Complex den(spec.omega0 * spec.omega0 - omega * omega, -g * omega);
    out.value = 1.0 + spec.omega_c * spec.omega_c / den;
    return out;
}

// Im epsilon straight from the reservoir coupling:
//   omega_c^2 * omega gamma(t) / ((omega^2-omega0^2)^2 + omega^2 gamma(t)^2)
inline double im_permittivity_from_coupling(const DielectricSpec& spec, double omega,
                                            double t) {
    if (!(omega > 0.0) || !(omega < spec.cutoff_lambda)) {
        throw std::domain_error("im_permittivity_from_coupling: need 0 < omega < cutoff");
    }
    const double g = spec.gamma(t);
    const double d = omega * omega - spec.omega0 * spec.omega0;
    return spec.omega_c * spec.omega_c * omega * g / (d * d + omega * omega * g * g);
}

// |zeta(omega, t)|^2 = 2 omega^2 Im eps / (pi omega_c^2); the light-matter
// mode coupling density obtained by inverting the permittivity's Im part.
inline double zeta_magnitude_sq(const DielectricSpec& spec, double omega, double t) {
    if (!(spec.omega_c > 0.0)) {
        throw config_error("zeta_magnitude_sq: omega_c = 0 leaves the coupling undefined");
    }
    if (std::abs(omega) >= spec.cutoff_lambda) return 0.0;
    if (!(omega > 0.0)) throw std::domain_error("zeta_magnitude_sq: need omega > 0");
    const double im = permittivity(spec, omega, t).value.imag();
    return 2.0 * omega * omega * im / (M_PI * spec.omega_c * spec.omega_c);
}

// square root with Im >= 0; positive real axis maps to the positive root
inline Complex upper_half_sqrt(Complex z) {
    Complex w = std::sqrt(z);
    if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
    return w;
}

// n(omega, t) = eta + i kappa, the upper-half branch of sqrt(epsilon)
inline ComplexResponse refractive_index(const DielectricSpec& spec, double omega, double t) {
    ComplexResponse eps = permittivity(spec, omega, t);
    eps.value = upper_half_sqrt(eps.value);
    return eps;
}

struct RealityCheck {
    bool pass = false;
    double residual = 0.0;
};

// epsilon(-omega, t) must equal conj(epsilon(omega, t))
inline RealityCheck reality_constraint_check(const DielectricSpec& spec, double omega,
                                             double t, double tol = 1e-13) {
    const Complex plus = permittivity(spec, omega, t).value;
    const Complex minus = permittivity(spec, -omega, t).value;
    RealityCheck rc;
    rc.residual = std::abs(minus - std::conj(plus)) / std::max(1.0, std::abs(plus));
    rc.pass = rc.residual <= tol;
    return rc;
}

// same check for an arbitrary sampled response (used to reject tabulated
// profiles whose Im part is not odd)
inline RealityCheck reality_constraint_check(const std::function<Complex(double)>& response,
                                             double omega, double tol = 1e-13) {
    const Complex plus = response(omega);
    const Complex minus = response(-omega);
    RealityCheck rc;
    rc.residual = std::abs(minus - std::conj(plus)) / std::max(1.0, std::abs(plus));
    rc.pass = rc.residual <= tol;
    return rc;
}

} // namespace tvdiel
