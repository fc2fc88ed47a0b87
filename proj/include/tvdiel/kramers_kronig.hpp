// kramers_kronig.hpp — dispersion-relation reconstruction of Re epsilon from
// tabulated Im epsilon samples.

#pragma once

#include <cmath>
#include <vector>

#include "tvdiel/dielectric.hpp"
#include "tvdiel/errors.hpp"
#include "tvdiel/interpolation.hpp"
#include "tvdiel/quadrature.hpp"

namespace tvdiel {

// Im epsilon sampled on a strictly increasing grid over (0, Lambda]; the odd
// extension Im eps(-w) = -Im eps(w) is implied.
struct ImEpsTable {
    std::vector<double> omega;
    std::vector<double> im_eps;
};

// Im epsilon tabulated on a grid spanning (0, Lambda]: linear pieces below
// and through the absorption line (dense within +-10 gamma of omega0) and a
// geometric tail up to the cutoff.
inline ImEpsTable make_drude_lorentz_im_table(const DielectricSpec& spec, double t) {
    const double g = spec.gamma(t);
    const double w0 = spec.omega0;
    const double lam = spec.cutoff_lambda;
    const double band_lo = std::max(w0 - 10.0 * g, 1e-4 * w0);
    const double band_hi = std::min(w0 + 10.0 * g, 0.9 * lam);
    std::vector<double> grid;
    auto linear = [&](double a, double b, int n) {
        for (int i = 0; i < n; ++i) grid.push_back(a + (b - a) * i / n);
    };
    linear(1e-4 * w0, 0.5 * band_lo, 200);
    linear(0.5 * band_lo, band_lo, 300);
    linear(band_lo, band_hi, 2400);
    linear(band_hi, std::min(3.0 * w0, lam), 800);
    if (3.0 * w0 < lam) {
        const double a = 3.0 * w0;
        const int n = 1200;
        const double r = std::pow(lam / a, 1.0 / n);
        double x = a;
        for (int i = 0; i < n; ++i) {
            grid.push_back(x);
            x *= r;
        }
    }
    grid.push_back(lam);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    ImEpsTable table;
    table.omega = grid;
    table.im_eps.reserve(grid.size());
    for (double w : grid) {
        table.im_eps.push_back(permittivity(spec, w, t).value.imag());
    }
    return table;
}

// Re epsilon(omega) - 1 via the principal-value dispersion integral
//   (2/pi) P int w' Im(w') / (w'^2 - w^2) dw'
// folded onto the positive axis. The pole panel is excised symmetrically and
// Richardson-extrapolated by pv_integrate.
inline double kramers_kronig_re(const ImEpsTable& table, double omega, double tol = 1e-7) {
    if (table.omega.size() < 4) {
        throw std::invalid_argument("kramers_kronig_re: need >= 4 samples");
    }
    MonotoneCubic interp(table.omega, table.im_eps);
    const double lo = table.omega.front();
    const double hi = table.omega.back();
    if (!(omega > lo && omega < hi)) {
        throw std::domain_error("kramers_kronig_re: omega must lie inside the sampled grid");
    }

    // local node spacing at the pole bounds the excision radius
    const auto& xs = table.omega;
    std::size_t i = 0;
    while (i + 1 < xs.size() && xs[i + 1] < omega) ++i;
    const double spacing = xs[i + 1] - xs[i];
    const double margin = std::min(omega - lo, hi - omega);
    const double h = std::min(0.25 * margin, 8.0 * spacing);
    if (spacing > h) {
        throw accuracy_error("kramers_kronig_re: sample grid too sparse near omega");
    }

    PVIntegrand pv;
    pv.numerator = [&](double w) {
        return (2.0 / M_PI) * w * interp(w) / (w + omega);
    };
    pv.pole = omega;
    pv.lo = lo;
    pv.hi = hi;
    // seed every 16th sample node so narrow absorption features are resolved
    for (std::size_t k = 16; k + 1 < xs.size(); k += 16) pv.breakpoints.push_back(xs[k]);
    QuadratureOptions opts;
    opts.record_panels = false;
    return pv_integrate(pv, tol, opts, h).value.real();
}

} // namespace tvdiel
