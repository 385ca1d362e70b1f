#pragma once

// Density coefficients c_{m,k} = <f | φ_{m,k}> from the characteristic
// function, through the Parseval form
//
//     c_{m,k} = 2^{m/2+1} Re ∫_0^{1/2} f̂(2^{m+1}π t) e^{2πikt} dt,   f̂(w) = ψ(-w).
//
// The midpoint rule on 2^{J-1} panels of that integral is the Vieta cosine
// expansion, and both it and the trapezoidal rule evaluate all k at once with
// one inverse DFT of size 2^J.

#include <swift/models.hpp>
#include <swift/transform.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace swift {

struct DensityJob {
    int m = 1;   // scale
    int J = 1;   // FFT size is 2^J
    int k1 = 0;  // coefficient range [k1, k2)
    int k2 = 1;

    void validate() const {
        require(m >= 1, "density: scale m must be >= 1");
        require(J >= 1 && J <= 30, "density: J must lie in [1, 30]");
        require(k2 > k1, "density: empty coefficient range");
        // k2 - k1 == 2^J is allowed: the output then covers exactly one period
        require(static_cast<long long>(k2) - k1 <= (1LL << J), "density: k2 - k1 exceeds 2^J");
    }
    std::size_t fft_size() const noexcept { return std::size_t{1} << J; }
};

namespace detail {

// e^{2πi·(k·j mod n)/n}, reduced first so the angle stays exact for large k·j
inline Complex unit_root(long long k, long long j, long long n) {
    const long long r = ((k * j) % n + n) % n;
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}

enum class Rule { Midpoint, Trapezoidal };

template <CharacteristicFunction CF>
CoefficientArray density_fft(const CF& cf, const DensityJob& job, Rule rule) {
    job.validate();
    const std::size_t n = job.fft_size();
    const std::size_t half = n / 2;
    const long long nn = static_cast<long long>(n);
    const double scale = std::ldexp(1.0, job.m);  // 2^m
    const bool centered = job.k1 == -static_cast<long long>(half);

    std::vector<Complex> f(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < half; ++j) {
        const double node = rule == Rule::Midpoint ? (2.0 * static_cast<double>(j) + 1.0) : 2.0 * static_cast<double>(j);
        Complex fj = Complex(cf(-scale * kPi * node / static_cast<double>(n)));
        if (rule == Rule::Trapezoidal && j == 0) fj *= 0.5;
        if (!centered) fj *= unit_root(job.k1, static_cast<long long>(j), nn);
        f[j] = fj;
    }
    FftPlan(n).inverse(f);

    CoefficientArray out{job.k1, std::vector<double>(static_cast<std::size_t>(job.k2 - job.k1))};
    const double norm = std::sqrt(scale) / static_cast<double>(half);
    for (std::size_t l = 0; l < out.values.size(); ++l) {
        const long long k = job.k1 + static_cast<long long>(l);
        // centered: the unmodulated transform holds k at index k mod n (half swap)
        const Complex g = centered ? f[static_cast<std::size_t>((k % nn + nn) % nn)] : f[l];
        const Complex phase = rule == Rule::Midpoint ? std::polar(1.0, kPi * static_cast<double>(k) / static_cast<double>(n))
                                                     : Complex(1.0, 0.0);
        out.values[l] = norm * (phase * g).real();
    }
    return out;
}

}  // namespace detail

/// Midpoint rule on 2^{J-1} panels (the Vieta expansion), one inverse DFT of
/// size 2^J. f̂ is taken as zero for node index j >= 2^{J-1}.
template <CharacteristicFunction CF>
CoefficientArray density_midpoint_fft(const CF& cf, const DensityJob& job) {
    return detail::density_fft(cf, job, detail::Rule::Midpoint);
}

/// Trapezoidal rule with f_0 = ½f̂(0) and the same one-sided truncation.
template <CharacteristicFunction CF>
CoefficientArray density_trapezoidal_fft(const CF& cf, const DensityJob& job) {
    return detail::density_fft(cf, job, detail::Rule::Trapezoidal);
}

/// One coefficient from the explicit Vieta cosine sum
///   φ(x) ≈ 2^{1-J} Σ_{j=1}^{2^{J-1}} cos((2j-1)πx/2^J)
/// integrated against the density: c = 2^{m/2}/2^{J-1} Σ_j Re[e^{-iω_j k} ψ(2^m ω_j)].
template <CharacteristicFunction CF>
double density_vieta_direct(const CF& cf, int m, int k, int J) {
    require(m >= 1 && J >= 1, "vieta: m and J must be >= 1");
    const long long terms = 1LL << (J - 1);
    const double n = std::ldexp(1.0, J);
    const double scale = std::ldexp(1.0, m);
    double sum = 0.0;
    for (long long j = 1; j <= terms; ++j) {
        const double omega = static_cast<double>(2 * j - 1) * kPi / n;
        // ω_j·k reduced mod 2π using exact integer arithmetic
        const long long r = ((static_cast<long long>(2 * j - 1) * k) % (2LL << J) + (2LL << J)) % (2LL << J);
        const double angle = -kPi * static_cast<double>(r) / n;
        sum += (std::polar(1.0, angle) * Complex(cf(scale * omega))).real();
    }
    return std::sqrt(scale) * sum / static_cast<double>(terms);
}

// --- adaptive Filon ----------------------------------------------------------

struct FilonOptions {
    double tol = 1e-8;          // bound on max |f̂ - interpolant|, relative to |ψ(0)|
    int min_depth = 3;          // uniform bisections before adaptivity starts
    int max_depth = 40;
    std::size_t max_panels = 1u << 16;
};

struct FilonResult {
    CoefficientArray coefficients;
    std::size_t cf_evals = 0;
    std::vector<double> nodes;  // evaluation nodes t in [0, ½], ascending
    std::size_t panels = 0;
};

class FilonError : public NumericalError {
public:
    FilonError(const std::string& what, FilonResult best, double achieved)
        : NumericalError(what, 0.0, achieved), best_(std::move(best)) {}
    const FilonResult& best() const noexcept { return best_; }

private:
    FilonResult best_;
};

namespace detail {

// Cubic on the nodes s = 0, 1/3, 2/3, 1 of the unit panel.
struct CubicPanel {
    static constexpr std::array<double, 4> nodes{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};

    // monomial coefficients of the Lagrange basis: L_i(s) = Σ_p basis[i][p] s^p
    static const std::array<std::array<double, 4>, 4>& basis() {
        static const auto table = [] {
            std::array<std::array<double, 4>, 4> b{};
            for (int i = 0; i < 4; ++i) {
                std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};
                double denom = 1.0;
                int degree = 0;
                for (int j = 0; j < 4; ++j) {
                    if (j == i) continue;
                    // poly *= (s - nodes[j])
                    for (int p = degree + 1; p >= 1; --p) poly[p] = poly[p - 1] - nodes[j] * poly[p];
                    poly[0] = -nodes[j] * poly[0];
                    ++degree;
                    denom *= nodes[i] - nodes[j];
                }
                for (int p = 0; p < 4; ++p) b[i][p] = poly[p] / denom;
            }
            return b;
        }();
        return table;
    }

    static Complex interpolate(const std::array<Complex, 4>& g, double s) {
        Complex r = 0.0;
        for (int i = 0; i < 4; ++i) {
            double l = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) l *= (s - nodes[j]) / (nodes[i] - nodes[j]);
            r += l * g[i];
        }
        return r;
    }
};

// M_p(θ) = ∫_0^1 s^p e^{iθs} ds for p = 0..3. Upward recursion loses digits
// for small θ, so a Taylor series takes over there.
inline std::array<Complex, 4> filon_moments(double theta) {
    std::array<Complex, 4> M{};
    const Complex it(0.0, theta);
    if (std::fabs(theta) < 2.0) {
        // M_p = Σ_j (iθ)^j / (j! (p + j + 1))
        for (int p = 0; p < 4; ++p) {
            Complex term = 1.0;  // (iθ)^j / j!
            Complex sum = 1.0 / (p + 1.0);
            for (int j = 1; j < 40; ++j) {
                term *= it / static_cast<double>(j);
                const Complex add = term / static_cast<double>(p + j + 1);
                sum += add;
                if (std::abs(add) < 1e-18) break;
            }
            M[p] = sum;
        }
        return M;
    }
    const Complex e = std::exp(it);
    M[0] = (e - 1.0) / it;
    for (int p = 1; p < 4; ++p) M[p] = (e - static_cast<double>(p) * M[p - 1]) / it;
    return M;
}

struct FilonLeaf {
    double t0;
    double h;
    std::array<Complex, 4> g;
};

}  // namespace detail

/// Adaptive cubic Filon quadrature of the Parseval integral. Panels are
/// bisected until the cubic interpolant of f̂ predicts the bisection nodes to
/// within tol; the criterion does not involve k, so the node set depends only
/// on (cf, m, tol) and is shared by every coefficient. The oscillatory factor
/// e^{2πikt} is integrated exactly on each panel.
template <CharacteristicFunction CF>
FilonResult density_filon(const CF& cf, int m, int k1, int k2, const FilonOptions& opt = {}) {
    require(m >= 1, "filon: scale m must be >= 1");
    require(k2 > k1, "filon: empty coefficient range");
    require(opt.tol > 0.0, "filon: tolerance must be positive");
    const double scale = std::ldexp(1.0, m);
    std::vector<double> nodes;
    auto g = [&](double t) {
        nodes.push_back(t);
        return Complex(cf(-2.0 * scale * kPi * t));
    };
    const double ref = std::max(std::abs(Complex(cf(0.0))), 1e-300);

    struct Pending {
        double t0, h;
        int depth;
        std::array<Complex, 4> g;
    };
    std::vector<detail::FilonLeaf> leaves;
    std::vector<Pending> stack;
    {
        const double h = 0.5;
        stack.push_back({0.0, h, 0, {g(0.0), g(h / 3.0), g(2.0 * h / 3.0), g(h)}});
    }
    double worst = 0.0;
    bool exhausted = false;
    while (!stack.empty()) {
        Pending p = stack.back();
        stack.pop_back();
        const double hh = p.h / 2.0;
        // children reuse the parent's nodes at 1/3 and 2/3
        const Complex g16 = g(p.t0 + p.h / 6.0);
        const Complex g12 = g(p.t0 + p.h / 2.0);
        const Complex g56 = g(p.t0 + 5.0 * p.h / 6.0);
        Pending left{p.t0, hh, p.depth + 1, {p.g[0], g16, p.g[1], g12}};
        Pending right{p.t0 + hh, hh, p.depth + 1, {g12, p.g[2], g56, p.g[3]}};
        const double err = std::max({std::abs(g16 - detail::CubicPanel::interpolate(p.g, 1.0 / 6.0)),
                                     std::abs(g12 - detail::CubicPanel::interpolate(p.g, 0.5)),
                                     std::abs(g56 - detail::CubicPanel::interpolate(p.g, 5.0 / 6.0))}) /
                           ref;
        const bool converged = err <= opt.tol && p.depth >= opt.min_depth;
        const bool stop = p.depth + 1 >= opt.max_depth || leaves.size() + stack.size() + 2 > opt.max_panels;
        if (converged || stop) {
            if (!converged) {
                exhausted = true;
                worst = std::max(worst, err);
            }
            leaves.push_back({left.t0, left.h, left.g});
            leaves.push_back({right.t0, right.h, right.g});
        } else {
            // right first so the left half is processed first
            stack.push_back(right);
            stack.push_back(left);
        }
    }

    FilonResult result;
    // one more evaluation for the normalisation at t = 0
    result.cf_evals = nodes.size() + 1;
    result.panels = leaves.size();
    result.coefficients = {k1, std::vector<double>(static_cast<std::size_t>(k2 - k1))};
    const auto& basis = detail::CubicPanel::basis();
    const double norm = 2.0 * std::sqrt(scale);
    for (int k = k1; k < k2; ++k) {
        const double omega = 2.0 * kPi * k;
        Complex total = 0.0;
        for (const auto& leaf : leaves) {
            const auto M = detail::filon_moments(omega * leaf.h);
            Complex panel = 0.0;
            for (int i = 0; i < 4; ++i) {
                Complex w = 0.0;
                for (int q = 0; q < 4; ++q) w += basis[i][q] * M[q];
                panel += w * leaf.g[i];
            }
            total += leaf.h * std::polar(1.0, omega * leaf.t0) * panel;
        }
        result.coefficients.at(k) = norm * total.real();
    }
    std::sort(nodes.begin(), nodes.end());
    result.nodes = std::move(nodes);
    if (exhausted)
        throw FilonError("filon: subdivision limit reached before tolerance", std::move(result), worst);
    return result;
}

/// 2^{-m/2} Σ_k c_{m,k}: the mass of the reconstructed density.
inline double density_mass(const CoefficientArray& c, int m) {
    double s = 0.0;
    for (double v : c.values) s += v;
    return s * std::ldexp(1.0, -m) * std::sqrt(std::ldexp(1.0, m));
}

}  // namespace swift
