// polariton.hpp — expansion coefficients of the fully dressed light-matter
// modes and the completeness inequality they must satisfy.

#pragma once

#include <cmath>

#include "tvdiel/dielectric.hpp"
#include "tvdiel/fano.hpp"
#include "tvdiel/quadrature.hpp"

namespace tvdiel {

struct PolaritonCoefficients {
    Complex alpha0{};
    Complex beta0{};
    Complex alpha1_regular{};
    bool alpha1_has_delta = true;
    Complex beta1_regular{};
};

// zeta(omega, t) in the real-coupling gauge: the phase collapses to +i and
// |zeta|^2 = 2 omega^2 Im eps / (pi omega_c^2).
inline Complex zeta_of(const DielectricSpec& spec, double omega, double t) {
    return Complex(0.0, 1.0) * std::sqrt(zeta_magnitude_sq(spec, omega, t));
}

// alpha0~ = sqrt(omega_c^2/(k~ c)) ((omega + k~ c)/2) zeta / (eps* omega^2 - k^2 c^2)
// with k~ = sqrt(k^2 + omega_c^2) and c = 1 in natural units. beta0~ carries
// (omega - k~ c)/2 instead. The alpha1~/beta1~ regular kernels mirror the
// matter-sector pair: zeta*(omega')/(omega - omega') and zeta(omega')/(omega + omega').
inline PolaritonCoefficients polariton_coeffs(const DielectricSpec& spec, double k,
                                              double omega, double omega_prime,
                                              double t) {
    if (!(k > 0.0)) throw std::domain_error("polariton_coeffs: need k > 0");
    if (!(omega > 0.0) || !(omega < spec.cutoff_lambda)) {
        throw std::domain_error("polariton_coeffs: need 0 < omega < cutoff");
    }
    const double k_tilde = std::sqrt(k * k + spec.omega_c * spec.omega_c);
    const Complex eps = permittivity(spec, omega, t).value;
    const Complex den = std::conj(eps) * omega * omega - k * k;
    // Im eps > 0 keeps den off the real zero; guarded regardless
    if (std::abs(den) == 0.0) {
        throw accuracy_error("polariton_coeffs: vanishing light-line denominator");
    }
    const Complex zeta = zeta_of(spec, omega, t);
    const double root = std::sqrt(spec.omega_c * spec.omega_c / k_tilde);
    PolaritonCoefficients c;
    c.alpha0 = root * 0.5 * (omega + k_tilde) * zeta / den;
    c.beta0 = root * 0.5 * (omega - k_tilde) * zeta / den;
    if (omega == omega_prime) {
        throw std::domain_error(
            "polariton_coeffs: alpha1's principal-value kernel is singular at omega == omega'");
    }
    const Complex zeta_p = zeta_of(spec, omega_prime, t);
    const double wc2 = spec.omega_c * spec.omega_c;
    c.alpha1_regular = 0.5 * wc2 * std::conj(zeta_p) / (omega - omega_prime) * zeta / den;
    c.beta1_regular = 0.5 * wc2 * zeta_p / (omega + omega_prime) * zeta / den;
    return c;
}

// (c k_c^2 / k~) int_0^cutoff |zeta|^2/omega domega < k~ c, with k_c = omega_c
// and c = 1. Reported margin is (rhs - lhs)/rhs.
inline CheckReport polariton_inequality_check(const DielectricSpec& spec, double k,
                                              double t) {
    const double k_tilde = std::sqrt(k * k + spec.omega_c * spec.omega_c);
    if (spec.omega_c == 0.0) {
        CheckReport out;
        out.check = "polariton_inequality";
        out.value = 1.0; // light decouples, lhs = 0
        out.pass = true;
        return out;
    }
    QuadratureOptions opts;
    opts.record_panels = false;
    auto f = [&](double w) {
        return Complex(zeta_magnitude_sq(spec, w, t) / w, 0.0);
    };
    std::vector<double> seeds{spec.omega0};
    const double g = spec.gamma(t);
    for (double d = 0.5 * g; d < spec.cutoff_lambda; d *= 2.0) {
        if (spec.omega0 - d > 0.0) seeds.push_back(spec.omega0 - d);
        if (spec.omega0 + d < spec.cutoff_lambda) seeds.push_back(spec.omega0 + d);
    }
    const double integral =
        adaptive_integrate(f, 0.0, spec.cutoff_lambda, 1e-8, seeds, opts).value.real();
    const double lhs = spec.omega_c * spec.omega_c / k_tilde * integral;
    const double rhs = k_tilde;
    CheckReport out;
    out.check = "polariton_inequality";
    out.value = (rhs - lhs) / rhs;
    out.target = 0.0;
    out.tolerance = 0.0;
    out.pass = lhs < rhs;
    return out;
}

} // namespace tvdiel
