// gauss.hpp — fixed-order Gauss-Legendre panel rule and compensated summation

#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace tvdiel {

using Complex = std::complex<double>;

// 10-point Gauss-Legendre rule on [-1, 1]. Panel count, not order, is the
// refinement knob everywhere in this library.
inline constexpr std::size_t kGaussOrder = 10;

inline constexpr std::array<double, kGaussOrder> kGaussNodes = {
    -9.73906528517171743e-01, -8.65063366688984536e-01,
    -6.79409568299024436e-01, -4.33395394129247213e-01,
    -1.48874338981631216e-01, 1.48874338981631216e-01,
    4.33395394129247213e-01,  6.79409568299024436e-01,
    8.65063366688984536e-01,  9.73906528517171743e-01};

inline constexpr std::array<double, kGaussOrder> kGaussWeights = {
    6.66713443086880686e-02, 1.49451349150580365e-01,
    2.19086362515982014e-01, 2.69266719309996516e-01,
    2.95524224714752981e-01, 2.95524224714752981e-01,
    2.69266719309996516e-01, 2.19086362515982014e-01,
    1.49451349150580365e-01, 6.66713443086880686e-02};

template <typename F>
auto gauss_panel(F&& f, double lo, double hi) -> decltype(f(0.0)) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    decltype(f(0.0)) acc{};
    for (std::size_t i = 0; i < kGaussOrder; ++i) {
        acc += kGaussWeights[i] * f(c + h * kGaussNodes[i]);
    }
    return h * acc;
}

// Kahan compensated accumulator; summation order is fixed by the caller so
// that parallel sweeps stay bitwise deterministic.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumComplex {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    Complex value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_;
    KahanSum im_;
};

} // namespace tvdiel
