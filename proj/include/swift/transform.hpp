#pragma once

#include <swift/core.hpp>

#include <bit>
#include <cmath>
#include <span>
#include <vector>

namespace swift {

/// Radix-2 decimation-in-time FFT plan. Twiddles and the bit-reversal table
/// are computed once; execution works in place on caller-owned buffers, so a
/// plan can be shared between threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        require(n >= 1 && is_power_of_two(n), "fft: length must be a power of two");
        twiddles_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k)
            twiddles_[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
        bitrev_.resize(n);
        const int bits = std::countr_zero(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (int b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
            bitrev_[i] = r;
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// X_k = Σ_j x_j e^{-2πi jk/n}
    void forward(std::span<Complex> data) const { run(data, false); }
    /// x_l = Σ_j X_j e^{+2πi jl/n}, no 1/n scaling.
    void inverse(std::span<Complex> data) const { run(data, true); }

private:
    void run(std::span<Complex> data, bool inverse) const {
        require(data.size() == n_, "fft: buffer length does not match plan");
        for (std::size_t i = 0; i < n_; ++i)
            if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    // written out: std::complex operator* takes the slow
                    // Annex G path for inf/nan unless built with -ffast-math
                    const Complex w = twiddles_[j * stride];
                    const double wr = w.real(), wi = inverse ? -w.imag() : w.imag();
                    const Complex x = data[start + j + half];
                    const Complex t(wr * x.real() - wi * x.imag(), wr * x.imag() + wi * x.real());
                    data[start + j + half] = data[start + j] - t;
                    data[start + j] += t;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<Complex> twiddles_;
    std::vector<std::size_t> bitrev_;
};

inline std::vector<Complex> inverse_dft(std::vector<Complex> buf) {
    FftPlan(buf.size()).inverse(buf);
    return buf;
}

inline std::vector<Complex> forward_dft(std::vector<Complex> buf) {
    FftPlan(buf.size()).forward(buf);
    return buf;
}

/// Type-2 cosine and sine transforms of length N, each from one FFT of
/// length N (Makhoul's even/odd reordering).
///   DCT-II: â_k = Σ_j a_j cos(πk(j+½)/N)
///   DST-II: b̂_k = Σ_j b_j sin(πk(j+½)/N)
class TrigTransform {
public:
    explicit TrigTransform(std::size_t n) : plan_(n) {
        phase_.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            phase_[k] = std::polar(1.0, -kPi * static_cast<double>(k) / (2.0 * static_cast<double>(n)));
    }

    std::size_t size() const noexcept { return plan_.size(); }

    std::vector<double> dct2(std::span<const double> a) const {
        auto c = reorder(a, 1.0);
        plan_.forward(c);
        std::vector<double> out(size());
        for (std::size_t k = 0; k < size(); ++k) out[k] = (c[k] * phase_[k]).real();
        return out;
    }

    std::vector<double> dst2(std::span<const double> b) const {
        auto c = reorder(b, -1.0);
        plan_.forward(c);
        std::vector<double> out(size());
        for (std::size_t k = 0; k < size(); ++k) out[k] = -(c[k] * phase_[k]).imag();
        return out;
    }

    /// V_k = DCT-II(a)_k + DST-II(b)_k for k in [k1, k2). Any integer k is
    /// accepted: outside [0, N) the values follow from cos parity, sin
    /// antiparity and the 4N period, with the one extra sine value at k = N
    /// computed directly.
    std::vector<double> cos_sin_sum(std::span<const double> a, std::span<const double> b, int k1, int k2) const {
        const std::size_t n = size();
        require(a.size() == n && b.size() == n, "cos_sin_sum: input length does not match transform size");
        require(k1 <= k2, "cos_sin_sum: empty or reversed k range");
        // both real sequences ride in one complex FFT, split afterwards by
        // conjugate symmetry: A_k = (C_k + C*_{n-k})/2, B_k = (C_k - C*_{n-k})/2i
        auto c = reorder(a, 1.0);
        const auto cb = reorder(b, -1.0);
        for (std::size_t j = 0; j < n; ++j) c[j] += Complex(0.0, cb[j].real());
        plan_.forward(c);
        std::vector<double> cosines(n), sines(n + 1);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ck = c[k], cm = std::conj(c[(n - k) % n]);
            const Complex A = 0.5 * (ck + cm);
            const Complex B = Complex(0.0, -0.5) * (ck - cm);
            const Complex ph = phase_[k];
            cosines[k] = A.real() * ph.real() - A.imag() * ph.imag();
            sines[k] = -(B.real() * ph.imag() + B.imag() * ph.real());
        }
        double alternating = 0.0;
        for (std::size_t j = 0; j < n; ++j) alternating += (j % 2 == 0) ? b[j] : -b[j];
        sines[n] = alternating;

        const long long N = static_cast<long long>(n);
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(k2 - k1));
        for (int k = k1; k < k2; ++k) {
            long long r = ((static_cast<long long>(k) % (4 * N)) + 4 * N) % (4 * N);
            double sign = 1.0;
            if (r >= 2 * N) {
                r -= 2 * N;
                sign = -1.0;
            }
            double c, s;
            if (r < N) {
                c = cosines[static_cast<std::size_t>(r)];
                s = sines[static_cast<std::size_t>(r)];
            } else if (r == N) {
                c = 0.0;
                s = sines[n];
            } else {
                const auto mirror = static_cast<std::size_t>(2 * N - r);
                c = -cosines[mirror];
                s = sines[mirror];
            }
            out.push_back(sign * (c + s));
        }
        return out;
    }

private:
    // c_j = x_{2j}, c_{N-1-j} = sign·x_{2j+1}
    std::vector<Complex> reorder(std::span<const double> x, double odd_sign) const {
        const std::size_t n = size();
        require(x.size() == n, "trig transform: input length does not match transform size");
        std::vector<Complex> c(n);
        if (n == 1) {
            c[0] = x[0];
            return c;
        }
        for (std::size_t j = 0; j < n / 2; ++j) {
            c[j] = x[2 * j];
            c[n - 1 - j] = odd_sign * x[2 * j + 1];
        }
        return c;
    }

    FftPlan plan_;
    std::vector<Complex> phase_;
};

inline std::vector<double> dct2_via_fft(std::span<const double> a) { return TrigTransform(a.size()).dct2(a); }
inline std::vector<double> dst2_via_fft(std::span<const double> b) { return TrigTransform(b.size()).dst2(b); }
inline std::vector<double> cos_sin_sum(std::span<const double> a, std::span<const double> b, int k1, int k2) {
    return TrigTransform(a.size()).cos_sin_sum(a, b, k1, k2);
}

}  // namespace swift
