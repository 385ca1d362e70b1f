#pragma once

// Option prices v = B Σ_k c_{m,k} V_{m,k}, grid selection, and a pricing
// context that computes the density coefficients once per (model, grid).

#include <swift/density.hpp>
#include <swift/payoff.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace swift {

enum class DensityStrategy { Midpoint, Trapezoidal, Filon };
enum class PayoffStrategy { Classic, Forward, EmFft };

inline std::string_view to_string(DensityStrategy s) {
    switch (s) {
        case DensityStrategy::Midpoint: return "midpoint";
        case DensityStrategy::Trapezoidal: return "trapezoidal";
        case DensityStrategy::Filon: return "filon";
    }
    return "?";
}

inline std::string_view to_string(PayoffStrategy s) {
    switch (s) {
        case PayoffStrategy::Classic: return "classic";
        case PayoffStrategy::Forward: return "forward";
        case PayoffStrategy::EmFft: return "em-fft";
    }
    return "?";
}

inline DensityStrategy parse_density_strategy(std::string_view s) {
    if (s == "midpoint") return DensityStrategy::Midpoint;
    if (s == "trapezoidal") return DensityStrategy::Trapezoidal;
    if (s == "filon") return DensityStrategy::Filon;
    throw std::invalid_argument("unknown density strategy: " + std::string(s));
}

inline PayoffStrategy parse_payoff_strategy(std::string_view s) {
    if (s == "classic") return PayoffStrategy::Classic;
    if (s == "forward") return PayoffStrategy::Forward;
    if (s == "em-fft" || s == "em_fft") return PayoffStrategy::EmFft;
    throw std::invalid_argument("unknown payoff strategy: " + std::string(s));
}

struct WaveletGrid {
    int m = 1;
    int k1 = 0;
    int k2 = 1;
    int J = 1;           // density FFT size 2^J
    std::size_t N = 0;   // payoff transform size (em-fft only); 0 sizes it from the grid
    double a = -1.0;     // truncation in log-moneyness
    double b = 1.0;
    double L = 0.0;      // truncation level that produced [a, b], 0 if set by hand

    void validate() const {
        require(m >= 1, "grid: m must be >= 1");
        require(k2 > k1, "grid: empty coefficient range");
        require(J >= 1 && J <= 30, "grid: J must lie in [1, 30]");
        require(static_cast<long long>(k2) - k1 <= (1LL << J), "grid: k2 - k1 exceeds 2^J");
        require(std::isfinite(a) && std::isfinite(b) && a < b, "grid: need finite a < b");
        require(N == 0 || is_power_of_two(N), "grid: N must be a power of two");
    }
    DensityJob density_job() const { return {m, J, k1, k2}; }

    /// The midpoint cosine sum behind em-fft approximates sinc(x) only for
    /// |x| well below N, and x = 2^m y - k reaches 2^m b - k1 or k2 - 2^m a.
    std::size_t payoff_size() const {
        if (N != 0) return N;
        const double scale = std::ldexp(1.0, m);
        const double reach = std::max(scale * b - k1, k2 - scale * a);
        std::size_t n = 64;
        while (static_cast<double>(n) < 8.0 * reach) n *= 2;
        return n;
    }
};

struct PricingResult {
    double price = 0.0;
    WaveletGrid grid;
    std::string density_strategy;
    std::string payoff_strategy;
    std::optional<double> reference_price;
    std::optional<double> abs_error;  // price - reference_price
    std::size_t cf_evals = 0;
    std::chrono::nanoseconds elapsed{0};

    void set_reference(double ref) {
        reference_price = ref;
        abs_error = price - ref;
    }
};

struct Interval {
    double a;
    double b;
};

/// [c1 - L√(c2 + √|c4|), c1 + L√(c2 + √|c4|)]
inline Interval truncation_interval(const Cumulants& cum, double L) {
    require(L > 0.0, "truncation: L must be positive");
    const double half = L * std::sqrt(cum.c2 + std::sqrt(std::fabs(cum.c4)));
    return {cum.c1 - half, cum.c1 + half};
}

/// Smallest m in [m_min, m_max] with |ψ(2^m π)| <= tol.
template <CharacteristicFunction CF>
int select_scale(const CF& cf, double tol, int m_min = 1, int m_max = 14) {
    require(m_min >= 1 && m_max >= m_min, "select_scale: need 1 <= m_min <= m_max");
    double last = 0.0;
    for (int m = m_min; m <= m_max; ++m) {
        last = std::abs(Complex(cf(kPi * std::ldexp(1.0, m))));
        if (last <= tol) return m;
    }
    throw NumericalError("select_scale: characteristic function not below tolerance at m_max", last, last);
}

/// Grows [kc - h, kc + h] around the largest coefficient, doubling h, until
/// the reconstructed mass 2^{-m/2} Σ c reaches 1 - mass_tol.
inline std::pair<int, int> select_k_range(const CoefficientArray& c, int m, double mass_tol) {
    require(mass_tol > 0.0 && mass_tol < 1.0, "select_k_range: mass_tol must lie in (0, 1)");
    require(c.size() > 0, "select_k_range: empty candidate range");
    int kc = c.k1;
    for (int k = c.k1; k < c.k2(); ++k)
        if (c.at(k) > c.at(kc)) kc = k;
    const double unit = 1.0 / std::sqrt(std::ldexp(1.0, m));
    auto mass = [&](int lo, int hi) {
        double s = 0.0;
        for (int k = lo; k < hi; ++k) s += c.at(k);
        return s * unit;
    };
    int lo = kc, hi = kc + 1;
    for (long long h = 1;; h *= 2) {
        const double got = mass(lo, hi);
        if (got >= 1.0 - mass_tol) return {lo, hi};
        if (lo == c.k1 && hi == c.k2())
            throw NumericalError("select_k_range: mass target unreachable on candidate range (achieved mass " +
                                     std::to_string(got) + ")",
                                 got, got);
        lo = static_cast<int>(std::max<long long>(c.k1, kc - h));
        hi = static_cast<int>(std::min<long long>(c.k2(), kc + h + 1));
    }
}

struct AutoGridOptions {
    double L = 12.0;
    double cf_tol = 1e-12;
    int m_min = 1;
    int m_max = 14;
    double mass_tol = 1e-12;  // <= 0 keeps the cumulant window as is
    int m = 0;                // > 0 fixes the scale instead of selecting it
    int max_J = 22;           // cap on the candidate window while searching
};

/// Grid from cumulants (seed interval), the characteristic function (scale)
/// and the density mass (coefficient range). The candidate window starts at
/// twice the cumulant interval and doubles until the mass target is met
/// inside it; [a, b] then follows the selected coefficient range. The FFT
/// keeps one extra doubling over the coefficient count.
inline WaveletGrid auto_grid(const ModelSpec& model, const AutoGridOptions& opt = {}) {
    WaveletGrid g;
    const auto iv = truncation_interval(cumulants(model), opt.L);
    g.a = iv.a;
    g.b = iv.b;
    g.L = opt.L;
    g.m = opt.m > 0 ? opt.m : select_scale(model, opt.cf_tol, opt.m_min, opt.m_max);
    const double scale = std::ldexp(1.0, g.m);
    g.k1 = static_cast<int>(std::floor(scale * g.a));
    g.k2 = static_cast<int>(std::ceil(scale * g.b)) + 1;
    auto fft_exponent = [](long long count) {
        int J = 1;
        while ((1LL << J) < 2 * count) ++J;
        return J;
    };
    g.J = fft_exponent(g.k2 - g.k1);
    if (opt.mass_tol <= 0.0) return g;

    const double centre = 0.5 * (g.k1 + g.k2);
    double half = g.k2 - centre;
    for (;;) {
        half *= 2.0;
        const int lo = static_cast<int>(std::floor(centre - half));
        const int hi = static_cast<int>(std::ceil(centre + half));
        const int J = fft_exponent(hi - lo);
        if (J > opt.max_J)
            throw NumericalError("auto_grid: density mass target not reached within 2^max_J coefficients", 0.0,
                                 half / scale);
        const auto c = density_trapezoidal_fft(model, DensityJob{g.m, J, lo, hi});
        try {
            const auto [k1, k2] = select_k_range(c, g.m, opt.mass_tol);
            // a range touching the candidate edge may be cut short by it
            if ((k1 == lo || k2 == hi) && J < opt.max_J) continue;
            g.k1 = k1;
            g.k2 = k2;
            g.J = fft_exponent(k2 - k1);
            g.a = std::min(g.a, k1 / scale);
            g.b = std::max(g.b, k2 / scale);
            return g;
        } catch (const NumericalError&) {
            if (J >= opt.max_J) throw;
        }
    }
}

struct PricingOptions {
    FilonOptions filon{};
};

/// Model + grid + density coefficients. The forward-centred coefficients do
/// not depend on the strike, so they are computed once here and every strike
/// reuses them; the classic route needs strike-shifted coefficients and
/// recomputes them per call. Const member functions are safe to call
/// concurrently.
class PricingContext {
public:
    PricingContext(const ModelSpec& model, const WaveletGrid& grid, DensityStrategy density,
                   const PricingOptions& opt = {})
        : model_(model), grid_(checked(grid)), density_(density), opt_(opt),
          transform_(grid_.payoff_size()), classic_cache_(1.0, std::min(grid_.a, -1e-300)) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [c, evals] = compute_density(model_);
        coefficients_ = std::move(c);
        init_cf_evals_ = evals;
        init_time_ = std::chrono::steady_clock::now() - t0;
    }

    const ModelSpec& model() const noexcept { return model_; }
    const WaveletGrid& grid() const noexcept { return grid_; }
    DensityStrategy density_strategy() const noexcept { return density_; }
    const CoefficientArray& density_coefficients() const noexcept { return coefficients_; }
    std::size_t init_cf_evals() const noexcept { return init_cf_evals_; }
    std::chrono::nanoseconds init_time() const noexcept { return init_time_; }
    std::size_t density_computations() const noexcept { return density_computations_.load(); }

    /// Forward-centred payoff coefficients for one strike.
    CoefficientArray payoff_coefficients(double K, PayoffStrategy payoff) const {
        require(payoff != PayoffStrategy::Classic, "payoff_coefficients: classic route pairs with shifted density");
        if (payoff == PayoffStrategy::EmFft) {
            PayoffJob job{K, model_.forward(), grid_.m, grid_.a, grid_.b, grid_.k1, grid_.k2, grid_.payoff_size()};
            return payoff_fft_euler_maclaurin(job, true, &transform_);
        }
        CoefficientArray v{grid_.k1, std::vector<double>(static_cast<std::size_t>(grid_.k2 - grid_.k1))};
        for (int k = grid_.k1; k < grid_.k2; ++k)
            v.at(k) = payoff_forward_si_ein(K, model_.forward(), grid_.m, k, grid_.a, grid_.b);
        return v;
    }

    PricingResult price_put(double K, PayoffStrategy payoff) const {
        require(K > 0.0 && std::isfinite(K), "price: strike must be positive");
        const auto t0 = std::chrono::steady_clock::now();
        PricingResult r;
        r.grid = grid_;
        r.density_strategy = std::string(to_string(density_));
        r.payoff_strategy = std::string(to_string(payoff));
        double sum = 0.0;
        if (payoff == PayoffStrategy::Classic) {
            // density of u = ln(S_T/K) = y - z on the fixed window [k1, k2)
            require(grid_.a < 0.0, "price: classic payoff needs a < 0");
            const double z = std::log(K / model_.forward());
            const ShiftedCharFn shifted(model_, z);
            auto [c, evals] = compute_density(shifted);
            r.cf_evals = evals;
            const double upper = std::min(0.0, grid_.b);
            for (int k = grid_.k1; k < grid_.k2; ++k) {
                const double v = upper == 0.0 ? K * classic_cache_.get(grid_.m, k)
                                              : detail::put_coefficient_si_ein(K, grid_.m, k, grid_.a, upper, 0.0);
                sum += c.at(k) * v;
            }
        } else {
            const auto v = payoff_coefficients(K, payoff);
            for (int k = grid_.k1; k < grid_.k2; ++k) sum += coefficients_.at(k) * v.at(k);
        }
        r.price = model_.discount() * sum;
        r.elapsed = std::chrono::steady_clock::now() - t0;
        return r;
    }

    /// Put-call parity on the forward: C = P + B(F - K).
    PricingResult price_call(double K, PayoffStrategy payoff) const {
        auto r = price_put(K, payoff);
        r.price += model_.discount() * (model_.forward() - K);
        return r;
    }

private:
    static const WaveletGrid& checked(const WaveletGrid& g) {
        g.validate();
        return g;
    }

    template <CharacteristicFunction CF>
    std::pair<CoefficientArray, std::size_t> compute_density(const CF& cf) const {
        ++density_computations_;
        const CountingCharFn counted(cf);
        switch (density_) {
            case DensityStrategy::Midpoint: {
                auto c = density_midpoint_fft(counted, grid_.density_job());
                return {std::move(c), counted.count()};
            }
            case DensityStrategy::Trapezoidal: {
                auto c = density_trapezoidal_fft(counted, grid_.density_job());
                return {std::move(c), counted.count()};
            }
            case DensityStrategy::Filon: {
                auto res = density_filon(counted, grid_.m, grid_.k1, grid_.k2, opt_.filon);
                return {std::move(res.coefficients), res.cf_evals};
            }
        }
        throw std::logic_error("unreachable");
    }

    ModelSpec model_;
    WaveletGrid grid_;
    DensityStrategy density_;
    PricingOptions opt_;
    TrigTransform transform_;
    ClassicPayoffCache classic_cache_;
    CoefficientArray coefficients_;
    std::size_t init_cf_evals_ = 0;
    std::chrono::nanoseconds init_time_{0};
    mutable std::atomic<std::size_t> density_computations_{0};
};

inline PricingResult price_put(const ModelSpec& model, double K, const WaveletGrid& grid, DensityStrategy density,
                               PayoffStrategy payoff, const PricingOptions& opt = {}) {
    const PricingContext ctx(model, grid, density, opt);
    auto r = ctx.price_put(K, payoff);
    r.cf_evals += ctx.init_cf_evals();
    r.elapsed += ctx.init_time();
    return r;
}

inline PricingResult price_call(const ModelSpec& model, double K, const WaveletGrid& grid, DensityStrategy density,
                                PayoffStrategy payoff, const PricingOptions& opt = {}) {
    auto r = price_put(model, K, grid, density, payoff, opt);
    r.price += model.discount() * (model.forward() - K);
    return r;
}

}  // namespace swift
