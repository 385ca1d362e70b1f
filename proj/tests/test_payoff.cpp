#include "oracles.hpp"

#include <swift/payoff.hpp>

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace swift;

namespace {

long double sinc_l(long double x) { return x == 0.0L ? 1.0L : std::sin(oracle::kPiL * x) / (oracle::kPiL * x); }

// K e^{-z} 2^{m/2} ∫_a^u (e^z - e^y) sinc(2^m y - k) dy
double put_integral(double K, int m, int k, double a, double u, double z, bool gk = false) {
    const long double scale = std::ldexp(1.0L, m), ez = std::exp(static_cast<long double>(z));
    auto f = [&](long double y) { return (ez - std::exp(y)) * sinc_l(scale * y - k); };
    const int pieces = std::max(4, static_cast<int>(std::ceil((u - a) * scale)));
    const long double I = gk ? oracle::gk_panels(f, a, u, pieces) : oracle::adaptive_simpson(f, a, u, 1e-16, pieces);
    return static_cast<double>(K * std::exp(-static_cast<long double>(z)) * std::sqrt(scale) * I);
}

double max_deviation(const CoefficientArray& v, const PayoffJob& job) {
    double err = 0.0;
    for (int k = job.k1; k < job.k2; ++k)
        err = std::max(err, std::fabs(v.at(k) - payoff_forward_si_ein(job.K, job.F, job.m, k, job.a, job.b)));
    return err;
}

}  // namespace

TEST(BenchmarkCoefficient, ClosedFormAndVietaRows) {
    EXPECT_NEAR(payoff_classic_si_ein(1.0, 6, -1, -1.0), 0.0020420954069492, 1e-14);
    EXPECT_NEAR(payoff_classic_vieta(1.0, 6, -1, -1.0, 5), -0.0555195115435162, 1e-15);
    EXPECT_NEAR(payoff_classic_vieta(1.0, 6, -1, -1.0, 10), 0.0020428901436639, 1e-15);
    EXPECT_NEAR(payoff_classic_vieta(1.0, 6, -1, -1.0, 20), payoff_classic_si_ein(1.0, 6, -1, -1.0), 1e-9);
}

TEST(BenchmarkCoefficient, VietaRowsMatchHighPrecisionSum) {
    // the exact sums round to ...5163 and ...6641 in the 16th decimal
    EXPECT_NEAR(oracle::vieta_payoff_mp(1.0, 6, -1, -1.0, 5), -0.055519511543516254, 1e-17);
    EXPECT_NEAR(oracle::vieta_payoff_mp(1.0, 6, -1, -1.0, 10), 0.0020428901436641305, 1e-18);
    for (int J : {5, 10, 14})
        EXPECT_NEAR(payoff_classic_vieta(1.0, 6, -1, -1.0, J), oracle::vieta_payoff_mp(1.0, 6, -1, -1.0, J), 1e-15) << J;
}

TEST(BenchmarkCoefficient, SimpsonRow) {
    EXPECT_NEAR(payoff_classic_simpson(1.0, 6, -1, -1.0, 10), 0.0020420973936057, 1e-12);
}

TEST(ClassicPayoff, MatchesQuadrature) {
    EXPECT_NEAR(payoff_classic_si_ein(1.0, 5, 3, -2.0), put_integral(1.0, 5, 3, -2.0, 0.0, 0.0), 1e-13);
    EXPECT_NEAR(payoff_classic_si_ein(1.0, 6, -1, -1.0), put_integral(1.0, 6, -1, -1.0, 0.0, 0.0), 1e-14);
}

TEST(ClassicPayoff, VanishingInterval) {
    EXPECT_NEAR(payoff_classic_si_ein(1.0, 6, 0, -1e-14), 0.0, 1e-13);
    EXPECT_THROW(payoff_classic_si_ein(1.0, 6, 0, 0.0), std::invalid_argument);
    EXPECT_THROW(payoff_classic_si_ein(1.0, 0, 0, -1.0), std::invalid_argument);
}

TEST(ClassicPayoff, SampledGridAgainstQuadrature) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> dk(-512, 512);
    for (int m = 2; m <= 10; ++m) {
        for (double a : {-10.0, -1.0, -0.25, -0.01}) {
            for (int s = 0; s < 3; ++s) {
                const int k = dk(rng);
                const double ref = put_integral(1.0, m, k, a, 0.0, 0.0, true);
                const double got = payoff_classic_si_ein(1.0, m, k, a);
                EXPECT_LE(std::fabs(got - ref), 1e-12 * std::max(std::fabs(ref), 1e-3 / std::sqrt(std::ldexp(1.0, m))))
                    << m << " " << a << " " << k;
            }
        }
    }
}

TEST(ForwardPayoff, EmptySupportAndClassicLimit) {
    // z = ln(K/F) = a
    EXPECT_EQ(payoff_forward_si_ein(std::exp(-0.5), 1.0, 6, 3, -0.5), 0.0);
    EXPECT_EQ(payoff_forward_si_ein(0.5, 1.0, 6, 3, -0.2), 0.0);
    for (int k : {-40, -1, 0, 5}) EXPECT_EQ(payoff_forward_si_ein(2.5, 2.5, 6, k, -1.0), payoff_classic_si_ein(2.5, 6, k, -1.0));
}

TEST(ForwardPayoff, MatchesQuadrature) {
    const double z = std::log(1.2);
    EXPECT_NEAR(payoff_forward_si_ein(1.2, 1.0, 8, 10, -0.2815), put_integral(1.2, 8, 10, -0.2815, z, z), 1e-13);
    // capped at b
    EXPECT_NEAR(payoff_forward_si_ein(1.5, 1.0, 8, 60, -0.2815, 0.281),
                put_integral(1.5, 8, 60, -0.2815, 0.281, std::log(1.5)), 1e-13);
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<int> dk(-512, 512);
    for (int m = 2; m <= 10; m += 2) {
        for (double a : {-10.0, -0.5, -0.01}) {
            const int k = dk(rng);
            const double K = 0.9, zz = std::log(K);
            if (zz <= a) continue;
            const double ref = put_integral(K, m, k, a, zz, zz, true);
            EXPECT_LE(std::fabs(payoff_forward_si_ein(K, 1.0, m, k, a) - ref),
                      1e-12 * std::max(std::fabs(ref), 1e-3 / std::sqrt(std::ldexp(1.0, m))))
                << m << " " << a << " " << k;
        }
    }
}

TEST(TrigMoments, Examples) {
    const auto empty = trig_moments(3.0, 16.0, 6, 0.1, 0.1);
    EXPECT_EQ(empty.Cn, 0.0);
    EXPECT_EQ(empty.Sn, 0.0);

    const auto lim = trig_moments(0.0, -1.0, 0.1, 0.1);
    EXPECT_NEAR(lim.Cn, std::exp(0.1) * 1.1 - (std::exp(0.1) - std::exp(-1.0)), 1e-15);
    EXPECT_EQ(lim.Sn, 0.0);
    const auto near = trig_moments(1e-9, -1.0, 0.1, 0.1);
    EXPECT_NEAR(near.Cn, lim.Cn, 1e-12);
    EXPECT_NEAR(near.Sn, 0.0, 1e-9);

    const auto t = trig_moments(3.0, 16.0, 6, -1.0, 0.1);
    const long double q = 3.0L / 16.0L * oracle::kPiL * 64.0L, ez = std::exp(0.1L);
    const double C = oracle::adaptive_simpson([&](long double y) { return (ez - std::exp(y)) * std::cos(q * y); }, -1.0,
                                              0.1, 1e-16, 64);
    const double S = oracle::adaptive_simpson([&](long double y) { return (ez - std::exp(y)) * std::sin(q * y); }, -1.0,
                                              0.1, 1e-16, 64);
    EXPECT_NEAR(t.Cn, C, 1e-13);
    EXPECT_NEAR(t.Sn, S, 1e-13);
    EXPECT_NEAR(t.q, static_cast<double>(q), 1e-12);
}

TEST(TrigMoments, TableMatchesPointwise) {
    const std::size_t n = 300;
    std::vector<double> c(n), s(n);
    const double p = kPi * 256.0;
    trig_moment_table(0.5 / 128.0 * p, p / 128.0, n, -0.7, 0.05, 0.05, c, s);
    for (std::size_t j = 0; j < n; ++j) {
        const auto t = trig_moments((j + 0.5) / 128.0 * p, -0.7, 0.05, 0.05);
        EXPECT_NEAR(c[j], t.Cn, 1e-14) << j;
        EXPECT_NEAR(s[j], t.Sn, 1e-14) << j;
    }
}

TEST(EmCorrection, DMatchesQuadrature) {
    EXPECT_EQ(em_correction_D(6, -0.3, -0.3), 0.0);
    for (double z : {0.0, 0.1, -0.4}) {
        const long double p = oracle::kPiL * 64.0L, ez = std::exp(static_cast<long double>(z));
        const double ref = oracle::adaptive_simpson(
            [&](long double y) { return p * y * (ez - std::exp(y)) * std::sin(p * y); }, -1.0, z, 1e-15, 128);
        EXPECT_NEAR(em_correction_D(6, -1.0, z), ref, 1e-12 * std::max(1.0, std::fabs(ref))) << z;
    }
}

TEST(EmCorrection, CorrectionIdentity) {
    // ∫ (e^z - e^y) πx sin(πx) dy with x = 2^m y - k equals (-1)^k (D - πk S_N)
    const int m = 6;
    for (double z : {0.0, 0.1}) {
        const double a = -1.0;
        const double D = em_correction_D(m, a, z);
        const double SN = trig_moments(kPi * 64.0, a, z, z).Sn;
        for (int k : {-3, 0, 7}) {
            const long double ez = std::exp(static_cast<long double>(z));
            const double ref = oracle::adaptive_simpson(
                [&](long double y) {
                    const long double x = 64.0L * y - k;
                    return (ez - std::exp(y)) * oracle::kPiL * x * std::sin(oracle::kPiL * x);
                },
                a, z, 1e-15, 128);
            const double parity = (k % 2 == 0) ? 1.0 : -1.0;
            EXPECT_NEAR(parity * (D - kPi * k * SN), ref, 1e-11 * std::max(1.0, std::fabs(ref))) << z << " " << k;
        }
    }
}

TEST(EmFft, EmptySupportGivesZeros) {
    const PayoffJob job{std::exp(-1.0), 1.0, 6, -1.0, 1.0, -8, 8, 64};
    for (double v : payoff_fft_euler_maclaurin(job).values) EXPECT_EQ(v, 0.0);
}

TEST(EmFft, RejectsBadJobs) {
    EXPECT_THROW(payoff_fft_euler_maclaurin(PayoffJob{1.0, 1.0, 6, -1.0, 1.0, 0, 8, 48}), std::invalid_argument);
    EXPECT_THROW(payoff_fft_euler_maclaurin(PayoffJob{1.0, 1.0, 6, 1.0, -1.0, 0, 8, 64}), std::invalid_argument);
    EXPECT_THROW(payoff_fft_euler_maclaurin(PayoffJob{-1.0, 1.0, 6, -1.0, 1.0, 0, 8, 64}), std::invalid_argument);
}

TEST(EmFft, MatchesClosedFormOnWideRange) {
    PayoffJob job{1.0, 1.0, 6, -1.0, std::numeric_limits<double>::infinity(), -128, 128, 2048};
    EXPECT_LE(max_deviation(payoff_fft_euler_maclaurin(job), job), 1e-9);
    // the midpoint sum needs N well above the reach 2^m|a| + |k| = 192; at N = 512 the
    // deviation is about 1e-7
    job.N = 512;
    EXPECT_LE(max_deviation(payoff_fft_euler_maclaurin(job), job), 2e-7);
}

TEST(EmFft, CorrectionReducesError) {
    // below N ~ reach (192 here) the midpoint sum aliases and neither variant
    // approximates the integral, so N = 32 is covered by the small job below
    PayoffJob job{1.0, 1.0, 6, -1.0, std::numeric_limits<double>::infinity(), -128, 128, 32};
    for (std::size_t N : {128u, 512u, 2048u}) {
        job.N = N;
        const double with = max_deviation(payoff_fft_euler_maclaurin(job, true), job);
        const double without = max_deviation(payoff_fft_euler_maclaurin(job, false), job);
        EXPECT_LT(with, without) << N;
    }
    job = PayoffJob{1.0, 1.0, 4, -1.0, std::numeric_limits<double>::infinity(), -8, 8, 32};
    for (std::size_t N : {32u, 128u, 512u}) {
        job.N = N;
        const double with = max_deviation(payoff_fft_euler_maclaurin(job, true), job);
        const double without = max_deviation(payoff_fft_euler_maclaurin(job, false), job);
        EXPECT_LT(with, without) << N;
    }
}

TEST(EmFft, ConvergenceOrders) {
    // reach 2^4·1 + 8 < 32 keeps every N below in the asymptotic regime
    PayoffJob job{1.0, 1.0, 4, -1.0, std::numeric_limits<double>::infinity(), -8, 8, 32};
    std::vector<double> with, without;
    for (std::size_t N = 32; N <= 512; N *= 2) {
        job.N = N;
        with.push_back(max_deviation(payoff_fft_euler_maclaurin(job, true), job));
        without.push_back(max_deviation(payoff_fft_euler_maclaurin(job, false), job));
    }
    for (std::size_t i = 0; i + 1 < with.size(); ++i) {
        if (with[i + 1] < 1e-14) break;
        const double slope = std::log2(with[i] / with[i + 1]);
        EXPECT_GT(slope, 3.5) << i;
        EXPECT_LT(slope, 4.5) << i;
    }
    for (std::size_t i = 0; i + 1 < without.size(); ++i) {
        const double slope = std::log2(without[i] / without[i + 1]);
        EXPECT_GT(slope, 1.8) << i;
        EXPECT_LT(slope, 2.2) << i;
    }
}

TEST(EmFft, SharedTransformGivesSameResult) {
    const PayoffJob job{1.1, 1.0, 5, -0.8, 0.8, -40, 40, 256};
    const TrigTransform t(256);
    const auto a = payoff_fft_euler_maclaurin(job);
    const auto b = payoff_fft_euler_maclaurin(job, true, &t);
    EXPECT_EQ(a.values, b.values);
}

TEST(ClassicPayoffCache, BitIdenticalUnderConcurrency) {
    const ClassicPayoffCache cache(1.0, -1.0, 2, 8, 64);
    std::vector<std::thread> pool;
    std::vector<std::vector<double>> seen(4);
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&, t] {
            for (int m = 2; m <= 9; ++m)
                for (int k = -70; k <= 70; ++k) seen[t].push_back(cache.get(m, k));
        });
    }
    for (auto& th : pool) th.join();
    std::size_t i = 0;
    for (int m = 2; m <= 9; ++m) {
        for (int k = -70; k <= 70; ++k, ++i) {
            const double direct = payoff_classic_si_ein(1.0, m, k, -1.0);
            for (int t = 0; t < 4; ++t) EXPECT_EQ(seen[t][i], direct);
        }
    }
}
