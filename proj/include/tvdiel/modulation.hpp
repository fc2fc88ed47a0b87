// modulation.hpp — damping modulation profiles gamma(t)

#pragma once

#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "tvdiel/errors.hpp"
#include "tvdiel/interpolation.hpp"

namespace tvdiel {

// gamma(t) = gamma0 for all t
struct ConstantModulation {};

// gamma(t) = gamma0 * (1 + A sin(Omega t)); 0 <= A < 1 keeps gamma positive
struct SinusoidalModulation {
    double amplitude = 0.0;
    double rate = 0.0;
};

// absolute gamma samples on a strictly increasing time grid; monotone cubic
// interpolation, extrapolation forbidden
struct TabulatedModulation {
    std::vector<double> times;
    std::vector<double> gamma;
};

class ModulationProfile {
public:
    using Variant = std::variant<ConstantModulation, SinusoidalModulation, TabulatedModulation>;

    ModulationProfile() : v_(ConstantModulation{}) {}

    static ModulationProfile constant() { return ModulationProfile(ConstantModulation{}); }

    static ModulationProfile sinusoidal(double amplitude, double rate) {
        if (!(amplitude >= 0.0) || !(amplitude < 1.0)) {
            throw config_error("sinusoidal modulation requires 0 <= A < 1");
        }
        if (!(rate > 0.0)) {
            throw config_error("sinusoidal modulation requires Omega > 0");
        }
        return ModulationProfile(SinusoidalModulation{amplitude, rate});
    }

    static ModulationProfile tabulated(std::vector<double> times, std::vector<double> gamma) {
        if (times.size() != gamma.size() || times.size() < 2) {
            throw config_error("tabulated modulation requires >= 2 (t, gamma) samples");
        }
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            if (!(gamma[i] > 0.0)) throw config_error("tabulated gamma samples must be > 0");
            if (i > 0 && !(times[i] > times[i - 1])) {
                throw config_error("tabulated sample times must increase strictly");
            }
        }
        ModulationProfile p{TabulatedModulation{times, gamma}};
        p.interp_ = MonotoneCubic(std::move(times), std::move(gamma));
        return p;
    }

    bool is_constant() const { return std::holds_alternative<ConstantModulation>(v_); }
    bool is_sinusoidal() const { return std::holds_alternative<SinusoidalModulation>(v_); }
    bool is_tabulated() const { return std::holds_alternative<TabulatedModulation>(v_); }

    const Variant& variant() const { return v_; }

    // multiplicative factor gamma(t)/gamma0 for analytic profiles; tabulated
    // profiles carry absolute values and are handled in gamma_at.
    double factor(double t) const {
        if (const auto* s = std::get_if<SinusoidalModulation>(&v_)) {
            return 1.0 + s->amplitude * std::sin(s->rate * t);
        }
        return 1.0;
    }

    double gamma_at(double gamma0, double t) const {
        if (const auto* tab = std::get_if<TabulatedModulation>(&v_)) {
            (void)tab;
            if (!interp_.in_range(t)) {
                throw std::out_of_range("tabulated modulation: t outside sample range");
            }
            return interp_(t);
        }
        return gamma0 * factor(t);
    }

    // modulation period for sinusoidal profiles, +inf otherwise
    double period() const {
        if (const auto* s = std::get_if<SinusoidalModulation>(&v_)) {
            return 2.0 * M_PI / s->rate;
        }
        return std::numeric_limits<double>::infinity();
    }

    // lower/upper bounds of gamma(t)/gamma0 reachable by the profile
    double min_factor() const {
        if (const auto* s = std::get_if<SinusoidalModulation>(&v_)) return 1.0 - s->amplitude;
        return 1.0;
    }
    double max_factor() const {
        if (const auto* s = std::get_if<SinusoidalModulation>(&v_)) return 1.0 + s->amplitude;
        return 1.0;
    }

private:
    explicit ModulationProfile(Variant v) : v_(std::move(v)) {}

    Variant v_;
    MonotoneCubic interp_{{0.0, 1.0}, {1.0, 1.0}};
};

} // namespace tvdiel
