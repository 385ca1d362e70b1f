#pragma once

#include <swift/core.hpp>

#include <cmath>
#include <concepts>
#include <variant>

namespace swift {

struct HestonParams {
    double v0 = 0.0;     // initial variance
    double kappa = 0.0;  // mean-reversion speed
    double theta = 0.0;  // long-run variance
    double sigma = 0.0;  // vol-of-vol
    double rho = 0.0;    // spot/variance correlation

    void validate() const {
        require(v0 > 0.0, "heston: v0 must be positive");
        require(kappa >= 0.0, "heston: kappa must be non-negative");
        require(theta >= 0.0, "heston: theta must be non-negative");
        require(sigma > 0.0, "heston: sigma must be positive");
        require(rho >= -1.0 && rho <= 1.0, "heston: rho must lie in [-1, 1]");
    }
};

struct LognormalParams {
    double vol = 0.0;  // per sqrt-year; zero gives a point mass at the forward

    void validate() const { require(vol >= 0.0 && std::isfinite(vol), "lognormal: vol must be finite and non-negative"); }
};

/// Cumulants of y = ln(S_T / F).
struct Cumulants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c4 = 0.0;
};

/// A priced model: forward, maturity, discount factor and dynamics.
/// Immutable once built; safe to share between threads.
class ModelSpec {
public:
    using Dynamics = std::variant<HestonParams, LognormalParams>;

    ModelSpec(double forward, double maturity, double discount, Dynamics dynamics)
        : forward_(forward), maturity_(maturity), discount_(discount), dynamics_(dynamics) {
        require(forward > 0.0 && std::isfinite(forward), "model: forward must be positive");
        require(maturity > 0.0 && std::isfinite(maturity), "model: maturity must be positive");
        require(discount > 0.0 && discount <= 1.0, "model: discount must lie in (0, 1]");
        std::visit([](const auto& p) { p.validate(); }, dynamics_);
    }

    static ModelSpec heston(double forward, double maturity, double discount, HestonParams p) {
        return ModelSpec(forward, maturity, discount, p);
    }
    static ModelSpec lognormal(double forward, double maturity, double discount, double vol) {
        return ModelSpec(forward, maturity, discount, LognormalParams{vol});
    }

    double forward() const noexcept { return forward_; }
    double maturity() const noexcept { return maturity_; }
    double discount() const noexcept { return discount_; }
    const Dynamics& dynamics() const noexcept { return dynamics_; }
    bool is_heston() const noexcept { return std::holds_alternative<HestonParams>(dynamics_); }

    /// Characteristic function of y = ln(S_T/F); accepts complex arguments
    /// inside the strip where the corresponding moment exists.
    Complex operator()(Complex u) const;
    Complex operator()(double u) const { return (*this)(Complex(u, 0.0)); }

private:
    double forward_;
    double maturity_;
    double discount_;
    Dynamics dynamics_;
};

/// Anything that maps a real frequency to a characteristic-function value.
template <class F>
concept CharacteristicFunction = requires(const F& f, double u) {
    { f(u) } -> std::convertible_to<Complex>;
};

namespace detail {

inline Complex lognormal_cf(const LognormalParams& p, double T, Complex u) {
    const Complex i(0.0, 1.0);
    return std::exp(-0.5 * p.vol * p.vol * T * (u * u + i * u));
}

// Log-forward Heston characteristic function, "little trap" form:
// d is taken on the principal branch and g = (b - d)/(b + d), which keeps
// the complex logarithm continuous for long maturities.
inline Complex heston_cf(const HestonParams& p, double T, Complex u) {
    const Complex i(0.0, 1.0);
    const double s2 = p.sigma * p.sigma;
    const Complex b = p.kappa - i * p.rho * p.sigma * u;
    Complex d = std::sqrt(b * b + s2 * (i * u + u * u));
    // The expression is even in d; flip it at the removable singularity b + d = 0
    // (reached e.g. at u = -i when kappa < rho*sigma).
    if (std::abs(b + d) <= 1e-10 * (std::abs(b) + std::abs(d))) d = -d;
    const Complex g = (b - d) / (b + d);
    const Complex edt = std::exp(-d * T);
    const Complex one_minus_gedt = 1.0 - g * edt;
    const Complex C = p.kappa * p.theta / s2 * ((b - d) * T - 2.0 * std::log(one_minus_gedt / (1.0 - g)));
    const Complex D = (b - d) / s2 * (1.0 - edt) / one_minus_gedt;
    return std::exp(C + D * p.v0);
}

}  // namespace detail

inline Complex ModelSpec::operator()(Complex u) const {
    if (u == Complex(0.0, 0.0)) return Complex(1.0, 0.0);
    return std::visit(
        [&](const auto& p) -> Complex {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, HestonParams>)
                return detail::heston_cf(p, maturity_, u);
            else
                return detail::lognormal_cf(p, maturity_, u);
        },
        dynamics_);
}

inline Complex char_fn(const ModelSpec& model, double u) { return model(u); }

/// Cumulants of ln(S_T/F). For Heston, c1 and c2 are closed forms and c4 is
/// set to zero; the truncation rule that consumes them is calibrated with
/// c4 = 0. c2 is Var(-½∫v + ∫√v dW) from the CIR moments; note the σ²θ
/// terms read θ(4e^{-κT} - 5), not the θ(6e^{-κT} - 7) found in some tables.
inline Cumulants cumulants(const ModelSpec& model) {
    const double T = model.maturity();
    if (const auto* ln = std::get_if<LognormalParams>(&model.dynamics())) {
        const double var = ln->vol * ln->vol * T;
        return {-0.5 * var, var, 0.0};
    }
    const auto& p = std::get<HestonParams>(model.dynamics());
    // the closed form divides by kappa^3; below this the cancellation is worse
    // than the effect of nudging kappa
    const double k = std::max(p.kappa, 1e-3);
    const double th = p.theta, v0 = p.v0, s = p.sigma, r = p.rho;
    const double ekt = std::exp(-k * T);
    const double e2kt = ekt * ekt;
    Cumulants c;
    c.c1 = (1.0 - ekt) * (th - v0) / (2.0 * k) - 0.5 * th * T;
    c.c2 = (s * T * k * ekt * (v0 - th) * (8.0 * k * r - 4.0 * s)
            + k * r * s * (1.0 - ekt) * (16.0 * th - 8.0 * v0)
            + 2.0 * th * k * T * (-4.0 * k * r * s + s * s + 4.0 * k * k)
            + s * s * ((th - 2.0 * v0) * e2kt + th * (4.0 * ekt - 5.0) + 2.0 * v0)
            + 8.0 * k * k * (v0 - th) * (1.0 - ekt))
           / (8.0 * k * k * k);
    c.c4 = 0.0;
    return c;
}

/// ψ_u(v) = ψ(v)·e^{-i v z}: characteristic function of y - z.
template <CharacteristicFunction CF>
class ShiftedCharFn {
public:
    ShiftedCharFn(const CF& cf, double shift) : cf_(cf), shift_(shift) {}
    Complex operator()(double u) const { return Complex(cf_(u)) * std::polar(1.0, -u * shift_); }

private:
    const CF& cf_;
    double shift_;
};

/// Wraps a characteristic function and counts evaluations. Not thread-safe.
template <CharacteristicFunction CF>
class CountingCharFn {
public:
    explicit CountingCharFn(const CF& cf) : cf_(cf) {}
    Complex operator()(double u) const {
        ++count_;
        return cf_(u);
    }
    std::size_t count() const noexcept { return count_; }

private:
    const CF& cf_;
    mutable std::size_t count_ = 0;
};

}  // namespace swift
