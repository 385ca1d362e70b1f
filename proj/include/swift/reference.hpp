#pragma once

// Independent pricers used to measure SWIFT errors.
//
// reference_put inverts the characteristic function along the contour
// Im u = -1/2 (damping α = -1/2, which only needs E[e^{y/2}] <= 1 and so
// exists for every model here):
//
//     C/(BF) = 1 - (e^{z/2}/π) ∫_0^∞ Re[e^{-iwz} ψ(w - i/2)] / (w² + 1/4) dw
//     P/(BF) = e^z - (e^{z/2}/π) ∫_0^∞ (same) dw            (put-call parity)

#include <swift/models.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace swift {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Black-76 put on a forward.
inline double black76_put(double F, double K, double T, double vol, double discount) {
    const double sd = vol * std::sqrt(T);
    if (sd == 0.0) return discount * std::max(K - F, 0.0);
    const double d1 = (std::log(F / K) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return discount * (K * normal_cdf(-d2) - F * normal_cdf(-d1));
}

inline double black76_call(double F, double K, double T, double vol, double discount) {
    const double sd = vol * std::sqrt(T);
    if (sd == 0.0) return discount * std::max(F - K, 0.0);
    const double d1 = (std::log(F / K) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return discount * (F * normal_cdf(d1) - K * normal_cdf(d2));
}

struct ReferenceResult {
    double price = 0.0;
    double error_estimate = 0.0;  // quadrature + truncation, in price units
    double upper_limit = 0.0;     // truncation point of the inversion integral
};

/// Put price by adaptive Gauss-Kronrod quadrature of the damped inversion
/// integral. tol is an absolute tolerance on price/(B·F); the integral is
/// truncated where a tail bound drops below tol/10.
inline ReferenceResult reference_put_detailed(const ModelSpec& model, double K, double tol = 1e-13) {
    require(tol > 0.0, "reference: tolerance must be positive");
    require(K > 0.0, "reference: strike must be positive");
    const double F = model.forward();
    const double BF = model.discount() * F;
    const double z = std::log(K / F);
    const auto cum = cumulants(model);
    if (const auto* ln = std::get_if<LognormalParams>(&model.dynamics()); ln && ln->vol == 0.0)
        return {model.discount() * std::max(K - F, 0.0), 0.0, 0.0};
    require(cum.c2 > 0.0 && std::isfinite(cum.c2), "reference: model variance must be positive");

    const Complex half_i(0.0, 0.5);
    auto integrand = [&](double w) {
        const Complex v = std::polar(1.0, -w * z) * model(Complex(w, 0.0) - half_i);
        return v.real() / (w * w + 0.25);
    };

    // Tail: |∫_W^∞| <= sup_{w>=W} |ψ(w - i/2)| / W. Require that bound, checked
    // at W, 2W and 4W, to be below tol/10 in price/(BF) units.
    const double target = 0.1 * tol * kPi * std::exp(-0.5 * z);
    const double scale = 1.0 / std::sqrt(cum.c2);
    double W = 4.0 * scale;
    auto tail_bound = [&](double w) {
        double sup = 0.0;
        for (double f : {1.0, 2.0, 4.0}) sup = std::max(sup, std::abs(model(Complex(f * w, 0.0) - half_i)));
        return sup / w;
    };
    while (tail_bound(W) > target) {
        W *= 1.5;
        if (W > 1e8)
            throw NumericalError("reference: characteristic function does not decay", 0.0, tail_bound(W));
    }

    // panels no wider than a fraction of the oscillation period and the cf scale
    const double width = std::min(scale, std::abs(z) > 0.0 ? 2.0 * kPi / std::abs(z) : scale);
    const std::size_t panels = std::min<std::size_t>(std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(W / width))), 200000);
    const double h = W / static_cast<double>(panels);
    const double factor = std::exp(0.5 * z) / kPi;
    // absolute budget per panel; the library tolerance is relative to the
    // panel's L1 norm, which is tiny far out in the tail
    const double panel_target = 0.1 * tol / factor / static_cast<double>(panels);
    // the library halves the tolerance at every bisection, so a relative
    // request near epsilon recurses to full depth without improving anything
    constexpr double kRelFloor = 1e-13;
    double total = 0.0, err_total = 0.0, l1_total = 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    for (std::size_t p = 0; p < panels; ++p) {
        double err = 0.0, l1 = 0.0;
        double v = GK::integrate(integrand, p * h, (p + 1) * h, 0, 0.0, &err, &l1);
        if (err > panel_target)
            v = GK::integrate(integrand, p * h, (p + 1) * h, 15, std::max(panel_target / l1, kRelFloor), &err, &l1);
        total += v;
        err_total += err;
        l1_total += l1;
    }
    const double floor = kRelFloor * l1_total;
    const double put = std::exp(z) - factor * total;
    const double err = BF * (factor * err_total + 0.1 * tol);
    if (factor * err_total > std::max(tol, factor * floor))
        throw NumericalError("reference: quadrature did not reach tolerance", BF * put, factor * err_total);
    return {BF * put, err, W};
}

inline double reference_put(const ModelSpec& model, double K, double tol = 1e-13) {
    return reference_put_detailed(model, K, tol).price;
}

inline double reference_call(const ModelSpec& model, double K, double tol = 1e-13) {
    return reference_put(model, K, tol) + model.discount() * (model.forward() - K);
}

}  // namespace swift
