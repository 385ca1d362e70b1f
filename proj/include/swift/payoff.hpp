#pragma once

// Put payoff coefficients V_{m,k} = ∫ v(y) φ_{m,k}(y) dy.
//
// Two closed forms (via Si and Ein) and one FFT route:
//  * classic, strike-centred:  V = K 2^{m/2} ∫_a^0 (1 - e^u) φ(2^m u - k) du, u = ln(S_T/K)
//  * forward-centred:          V = K e^{-z} 2^{m/2} ∫_a^z (e^z - e^y) φ(2^m y - k) dy, y = ln(S_T/F)
//  * Euler-Maclaurin midpoint: the forward-centred integral with
//        sinc(x) ≈ (1/N) Σ_n cos(πx(n+½)/N) - πx sin(πx)/(24N²),
//    summed over n by one cosine and one sine transform of size N.
//
// With s = π(2^m y - k) the closed forms split into
//     (K/(2^{m/2}π)) [Si(t_u) - Si(t_l)] - (K e^{k/2^m - z}/(2^{m/2}π)) [G(t_u) - G(t_l)],
//     G(t) = ∫_0^t e^{s/(π2^m)} sin(s)/s ds = Im Ein(-t/(π2^m) + i t).
// This is the same arrangement as the published final displays; the
// quadrature tests pin the signs.

#include <swift/specfun.hpp>
#include <swift/transform.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

namespace swift {

namespace detail {

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

// K e^{-z} 2^{m/2} ∫_lower^upper (e^z - e^y) φ(2^m y - k) dy
inline double put_coefficient_si_ein(double K, int m, int k, double lower, double upper, double z) {
    if (!(upper > lower)) return 0.0;
    const double scale = std::ldexp(1.0, m);
    const double t_l = kPi * (scale * lower - k);
    const double t_u = kPi * (scale * upper - k);
    const double c = 1.0 / (kPi * scale);
    const double pref = K / (std::sqrt(scale) * kPi);
    const Complex ray(-c, 1.0);
    double ein_part;
    if (t_u * t_l > 0.0 && !ein_uses_series(t_u * ray) && !ein_uses_series(t_l * ray)) {
        // both arguments lie on the ray t(-c + i), so the Log terms cancel and
        // e^{k/2^m} E1(t(-c + i)) = e^y e^{-it} e^{z}E1(z) stays bounded
        const auto tail = [&](double t, double y) { return std::exp(y) * (e1_scaled(t * ray) * std::polar(1.0, -t)).imag(); };
        ein_part = std::exp(-z) * (tail(t_u, upper) - tail(t_l, lower));
    } else {
        const auto G = [&](double t) { return ein(t * ray).imag(); };
        ein_part = std::exp(k / scale - z) * (G(t_u) - G(t_l));
    }
    return pref * si_difference(t_u, t_l) - pref * ein_part;
}

}  // namespace detail

/// Classic strike-centred coefficient: K 2^{m/2} ∫_a^0 (1 - e^u) φ(2^m u - k) du.
inline double payoff_classic_si_ein(double K, int m, int k, double a) {
    require(m >= 1, "payoff: scale m must be >= 1");
    require(a < 0.0, "payoff: classic route needs a < 0");
    return detail::put_coefficient_si_ein(K, m, k, a, 0.0, 0.0);
}

/// Forward-centred coefficient with z = ln(K/F); the support is [a, min(z, b)].
inline double payoff_forward_si_ein(double K, double F, int m, int k, double a,
                                    double b = std::numeric_limits<double>::infinity()) {
    require(m >= 1, "payoff: scale m must be >= 1");
    require(K > 0.0 && F > 0.0, "payoff: strike and forward must be positive");
    const double z = std::log(K / F);
    return detail::put_coefficient_si_ein(K, m, k, a, std::min(z, b), z);
}

/// Classic coefficient with φ replaced by its 2^{J-1}-term Vieta cosine
/// expansion; each cosine term is integrated exactly.
inline double payoff_classic_vieta(double K, int m, int k, double a, int J) {
    require(m >= 1 && J >= 1, "payoff: m and J must be >= 1");
    require(a < 0.0, "payoff: classic route needs a < 0");
    const long long terms = 1LL << (J - 1);
    const double n = std::ldexp(1.0, J);
    const double scale = std::ldexp(1.0, m);
    const Complex i(0.0, 1.0);
    double sum = 0.0;
    for (long long j = 1; j <= terms; ++j) {
        const double omega = static_cast<double>(2 * j - 1) * kPi / n;
        const double q = omega * scale;
        // ∫_a^0 (1 - e^y) e^{iqy} dy
        const Complex integral = (1.0 - std::exp(i * q * a)) / (i * q) - (1.0 - std::exp((1.0 + i * q) * a)) / (1.0 + i * q);
        sum += (std::polar(1.0, -omega * k) * integral).real();
    }
    return K * std::sqrt(scale) * sum / static_cast<double>(terms);
}

/// Composite Simpson 3/8 rule on the classic defining integral using the
/// largest multiple of 3 not exceeding 2^{J-1} intervals.
inline double payoff_classic_simpson(double K, int m, int k, double a, int J) {
    require(m >= 1 && J >= 3, "payoff: simpson needs m >= 1 and J >= 3");
    require(a < 0.0, "payoff: classic route needs a < 0");
    const long long n = ((1LL << (J - 1)) / 3) * 3;
    const double scale = std::ldexp(1.0, m);
    const double h = -a / static_cast<double>(n);
    double sum = 0.0;
    for (long long i = 0; i <= n; ++i) {
        const double y = a + static_cast<double>(i) * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 3 == 0 ? 2.0 : 3.0);
        sum += w * (1.0 - std::exp(y)) * detail::sinc(scale * y - k);
    }
    return K * std::sqrt(scale) * 3.0 * h / 8.0 * sum;
}

// --- Euler-Maclaurin FFT route ---------------------------------------------

struct TrigMoments {
    double Cn = 0.0;  // ∫ (e^z - e^y) cos(q y) dy
    double Sn = 0.0;  // ∫ (e^z - e^y) sin(q y) dy
    double q = 0.0;   // (n/N)·p
    double p = 0.0;   // π 2^m
};

/// C and S over [lower, upper] with level e^z; q = 0 is the analytic limit.
inline TrigMoments trig_moments(double q, double lower, double upper, double z) {
    TrigMoments t;
    t.q = q;
    if (!(upper > lower)) return t;
    const double ez = std::exp(z);
    const double eu = std::exp(upper), el = std::exp(lower);
    if (q == 0.0) {
        t.Cn = ez * (upper - lower) - (eu - el);
        return t;
    }
    const double mid = 0.5 * q * (upper + lower);
    const double halfwidth_sin = std::sin(0.5 * q * (upper - lower));
    const double cu = std::cos(q * upper), su = std::sin(q * upper);
    const double cl = std::cos(q * lower), sl = std::sin(q * lower);
    const double d = 1.0 + q * q;
    // sin(qu) - sin(ql) and cos(ql) - cos(qu) in product form
    t.Cn = ez * 2.0 * std::cos(mid) * halfwidth_sin / q - (eu * (cu + q * su) - el * (cl + q * sl)) / d;
    t.Sn = ez * 2.0 * std::sin(mid) * halfwidth_sin / q - (eu * (su - q * cu) - el * (sl - q * cl)) / d;
    return t;
}

/// C and S at the evenly spaced frequencies q_j = q0 + j·dq, j < count.
/// The oscillating factors advance by complex rotation and are recomputed
/// directly every 32 steps so rounding cannot accumulate.
inline void trig_moment_table(double q0, double dq, std::size_t count, double lower, double upper, double z,
                              std::span<double> cos_out, std::span<double> sin_out) {
    require(cos_out.size() >= count && sin_out.size() >= count, "trig_moment_table: output too small");
    if (!(upper > lower)) {
        std::fill_n(cos_out.begin(), count, 0.0);
        std::fill_n(sin_out.begin(), count, 0.0);
        return;
    }
    const double ez = std::exp(z);
    const double eu = std::exp(upper), el = std::exp(lower);
    const double mid = 0.5 * (upper + lower), half = 0.5 * (upper - lower);
    const Complex step_u = std::polar(1.0, dq * upper), step_l = std::polar(1.0, dq * lower);
    const Complex step_m = std::polar(1.0, dq * mid), step_h = std::polar(1.0, dq * half);
    Complex ru, rl, rm, rh;
    for (std::size_t j = 0; j < count; ++j) {
        const double q = q0 + static_cast<double>(j) * dq;
        if (j % 32 == 0) {
            ru = std::polar(1.0, q * upper);
            rl = std::polar(1.0, q * lower);
            rm = std::polar(1.0, q * mid);
            rh = std::polar(1.0, q * half);
        } else {
            const auto rotate = [](Complex& r, Complex w) {
                r = Complex(r.real() * w.real() - r.imag() * w.imag(), r.real() * w.imag() + r.imag() * w.real());
            };
            rotate(ru, step_u);
            rotate(rl, step_l);
            rotate(rm, step_m);
            rotate(rh, step_h);
        }
        if (q == 0.0) {
            cos_out[j] = ez * (upper - lower) - (eu - el);
            sin_out[j] = 0.0;
            continue;
        }
        const double d = 1.0 + q * q;
        const double level = ez * 2.0 * rh.imag() / q;
        cos_out[j] = level * rm.real() - (eu * (ru.real() + q * ru.imag()) - el * (rl.real() + q * rl.imag())) / d;
        sin_out[j] = level * rm.imag() - (eu * (ru.imag() - q * ru.real()) - el * (rl.imag() - q * rl.real())) / d;
    }
}

/// C_n, S_n at frequency q = (n/N) π 2^m over [a, z].
inline TrigMoments trig_moments(double n, double N, int m, double a, double z) {
    require(m >= 1 && N > 0.0, "trig_moments: m >= 1 and N > 0 required");
    const double p = kPi * std::ldexp(1.0, m);
    auto t = trig_moments(n / N * p, a, z, z);
    t.p = p;
    return t;
}

/// D = p ∫_lower^upper y (e^z - e^y) sin(p y) dy with p = π 2^m: the
/// k-independent part of the Euler-Maclaurin correction integral
///   ∫ (e^z - e^y) π(2^m y - k) sin(π(2^m y - k)) dy = (-1)^k (D - πk S_N).
inline double em_correction_D(int m, double lower, double upper, double z) {
    require(m >= 1, "em_correction_D: scale m must be >= 1");
    if (!(upper > lower)) return 0.0;
    const double p = kPi * std::ldexp(1.0, m);
    const Complex w(1.0, p);
    // ∫ y sin(py) dy = sin(py)/p² - y cos(py)/p
    const auto poly = [p](double y) { return std::sin(p * y) / (p * p) - y * std::cos(p * y) / p; };
    // ∫ y e^y sin(py) dy = Im[e^{(1+ip)y} (y/(1+ip) - 1/(1+ip)²)]
    const auto expo = [&w](double y) { return (std::exp(w * y) * (y / w - 1.0 / (w * w))).imag(); };
    const double integral = std::exp(z) * (poly(upper) - poly(lower)) - (expo(upper) - expo(lower));
    return p * integral;
}

inline double em_correction_D(int m, double a, double z) { return em_correction_D(m, a, z, z); }

struct PayoffJob {
    double K = 1.0;  // strike
    double F = 1.0;  // forward
    int m = 1;
    double a = -1.0;  // truncation (log-moneyness)
    double b = std::numeric_limits<double>::infinity();
    int k1 = 0;
    int k2 = 1;
    std::size_t N = 1;  // payoff quadrature size, power of two

    double z() const { return std::log(K / F); }
    double upper() const { return std::min(z(), b); }
    void validate() const {
        require(K > 0.0 && F > 0.0, "payoff: strike and forward must be positive");
        require(m >= 1, "payoff: scale m must be >= 1");
        require(a < b, "payoff: need a < b");
        require(k2 > k1, "payoff: empty coefficient range");
        require(N >= 1 && is_power_of_two(N), "payoff: N must be a power of two");
    }
};

/// All V_{m,k}, k in [k1, k2), from the midpoint sum over half-integer
/// frequencies (one DCT-II plus one DST-II of size N) and, unless disabled,
/// the O(N^{-2}) Euler-Maclaurin correction built from S_N and D.
inline CoefficientArray payoff_fft_euler_maclaurin(const PayoffJob& job, bool correction = true,
                                                   const TrigTransform* transform = nullptr) {
    job.validate();
    CoefficientArray out{job.k1, std::vector<double>(static_cast<std::size_t>(job.k2 - job.k1), 0.0)};
    const double z = job.z();
    const double upper = job.upper();
    if (!(upper > job.a)) return out;

    const std::size_t N = job.N;
    const double Nd = static_cast<double>(N);
    const double p = kPi * std::ldexp(1.0, job.m);
    std::vector<double> cos_part(N), sin_part(N);
    trig_moment_table(0.5 / Nd * p, p / Nd, N, job.a, upper, z, cos_part, sin_part);
    std::unique_ptr<TrigTransform> owned;
    if (transform == nullptr || transform->size() != N) {
        owned = std::make_unique<TrigTransform>(N);
        transform = owned.get();
    }
    const auto sums = transform->cos_sin_sum(cos_part, sin_part, job.k1, job.k2);

    const double pref = job.K * std::exp(-z) * std::sqrt(std::ldexp(1.0, job.m));
    const double SN = trig_moments(p, job.a, upper, z).Sn;
    const double D = em_correction_D(job.m, job.a, upper, z);
    const double em = 1.0 / (24.0 * Nd * Nd);
    for (std::size_t l = 0; l < out.values.size(); ++l) {
        const int k = job.k1 + static_cast<int>(l);
        double v = sums[l] / Nd;
        if (correction) {
            const double parity = (k % 2 == 0) ? 1.0 : -1.0;
            v -= parity * em * (D - kPi * k * SN);
        }
        out.values[l] = pref * v;
    }
    return out;
}

/// Lazily filled table of classic coefficients for one (K, a), keyed by
/// (m, k) over m in [m_min, m_max] and k in [-k_max, k_max]. Entries are
/// written once and never change; concurrent readers are safe. Keys outside
/// the table are evaluated directly.
class ClassicPayoffCache {
public:
    ClassicPayoffCache(double K, double a, int m_min = 2, int m_max = 8, int k_max = 512)
        : K_(K), a_(a), m_min_(m_min), m_max_(m_max), k_max_(k_max),
          width_(static_cast<std::size_t>(2 * k_max + 1)),
          entries_(static_cast<std::size_t>(m_max - m_min + 1) * width_),
          values_(new double[entries_]),
          once_(new std::once_flag[entries_]) {
        require(a < 0.0, "payoff cache: a must be negative");
        require(m_min >= 1 && m_max >= m_min && k_max >= 0, "payoff cache: bad key ranges");
    }

    double K() const noexcept { return K_; }
    double a() const noexcept { return a_; }

    double get(int m, int k) const {
        if (m < m_min_ || m > m_max_ || k < -k_max_ || k > k_max_) return payoff_classic_si_ein(K_, m, k, a_);
        const std::size_t idx = static_cast<std::size_t>(m - m_min_) * width_ + static_cast<std::size_t>(k + k_max_);
        std::call_once(once_[idx], [&] { values_[idx] = payoff_classic_si_ein(K_, m, k, a_); });
        return values_[idx];
    }

private:
    double K_, a_;
    int m_min_, m_max_, k_max_;
    std::size_t width_, entries_;
    std::unique_ptr<double[]> values_;
    std::unique_ptr<std::once_flag[]> once_;
};

}  // namespace swift
