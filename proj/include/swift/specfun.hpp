#pragma once

// Sine integral Si(x) and complementary exponential integral
// Ein(z) = ∫_0^z (1 - e^{-t})/t dt.
//
// Ein is entire. Two regimes:
//  * the Taylor series Σ (-1)^{n+1} z^n / (n·n!) wherever the terms do not
//    cancel badly, i.e. |z| small or z close to the negative real axis
//    (cancellation grows like exp(|z| + Re z));
//  * Ein(z) = E1(z) + Log(z) + γ elsewhere, E1 from its continued fraction.
//    E1 and Log have opposite jumps across the negative axis, so the sum is
//    continuous; the series covers the axis itself.
//
// Accuracy is ~1e-14 relative for |Re z| <= 50 and any |Im z|; for
// Re z < -50 the result grows like e^{|Re z|} and eventually overflows.

#include <swift/core.hpp>

#include <cmath>
#include <limits>

namespace swift {

namespace detail {

inline constexpr double kEinSeriesLimit = 4.0;

inline Complex ein_series(Complex z) {
    // Kahan-compensated sum of Σ_{n>=1} (-1)^{n+1} z^n / (n·n!)
    Complex power = z;  // (-1)^{n+1} z^n / n!
    Complex sum = z;
    Complex comp = 0.0;
    for (int n = 2; n < 1000; ++n) {
        power *= -z / static_cast<double>(n);
        const Complex term = power / static_cast<double>(n);
        const Complex y = term - comp;
        const Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// e^z E1(z) by the even continued fraction, modified Lentz.
inline Complex e1_scaled(Complex z) {
    constexpr double tiny = 1e-300;
    Complex b = z + 1.0;
    Complex c = 1.0 / tiny;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i < 200000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const Complex del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= 1e-16) return h;
    }
    throw NumericalError("e1: continued fraction did not converge", std::abs(h), 0.0);
}

inline Complex e1_continued_fraction(Complex z) { return e1_scaled(z) * std::exp(-z); }

inline bool ein_uses_series(Complex z) {
    const double r = std::abs(z);
    return r <= kEinSeriesLimit || r + z.real() <= kEinSeriesLimit;
}

}  // namespace detail

inline Complex ein(Complex z) {
    if (z == Complex(0.0, 0.0)) return 0.0;
    if (detail::ein_uses_series(z)) return detail::ein_series(z);
    return detail::e1_continued_fraction(z) + std::log(z) + kEulerGamma;
}

inline double si(double x) {
    const double ax = std::fabs(x);
    double r;
    if (ax <= detail::kEinSeriesLimit) {
        // Σ (-1)^n x^{2n+1} / ((2n+1)(2n+1)!)
        const double x2 = ax * ax;
        double power = ax;
        r = ax;
        for (int n = 1; n < 60; ++n) {
            power *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
            const double term = power / (2.0 * n + 1.0);
            r += term;
            if (std::fabs(term) <= 1e-17 * r) break;
        }
    } else {
        // Si(x) = Im Ein(ix) = π/2 + Im E1(ix) for x > 0
        r = 0.5 * kPi + detail::e1_continued_fraction(Complex(0.0, ax)).imag();
    }
    return x < 0.0 ? -r : r;
}

/// Si(x) - Si(y). When x and y lie on the same side and away from 0 the
/// difference is taken between the E1 tails, so the π/2 cancels exactly.
inline double si_difference(double x, double y) {
    if (x * y > 0.0 && std::fabs(x) > detail::kEinSeriesLimit && std::fabs(y) > detail::kEinSeriesLimit) {
        const double s = x > 0.0 ? 1.0 : -1.0;
        return s * (detail::e1_continued_fraction(Complex(0.0, std::fabs(x))).imag() -
                    detail::e1_continued_fraction(Complex(0.0, std::fabs(y))).imag());
    }
    return si(x) - si(y);
}

/// ∫_0^1 e^{-a t} sin(b t) / t dt = Im Ein(a + ib).
inline double exp_sin_integral(double a, double b) { return ein(Complex(a, b)).imag(); }

}  // namespace swift
