#include "oracles.hpp"

#include <swift/specfun.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace swift;

TEST(Si, KnownValues) {
    EXPECT_EQ(si(0.0), 0.0);
    EXPECT_NEAR(si(kPi), 1.8519370519824662, 1e-15);
    const double q = oracle::adaptive_simpson([](long double t) { return t == 0 ? 1.0L : std::sin(t) / t; }, 0.0, kPi,
                                              1e-16);
    EXPECT_NEAR(si(kPi), q, 1e-14);
}

TEST(Si, OddSymmetry) {
    for (double x : {1e-9, 0.3, 3.999, 4.0, 4.001, 5.0, 17.0, 1234.5, 1e7}) EXPECT_EQ(si(-x), -si(x)) << x;
}

TEST(Si, AsymptoticEnvelope) {
    for (double x = 10.0; x < 1e5; x *= 1.37) EXPECT_LE(std::fabs(si(x) - kPi / 2), 2.0 / x) << x;
}

TEST(Si, AgreesWithQuadratureAcrossTheSwitch) {
    for (double x : {0.5, 2.0, 3.9999, 4.0, 4.0001, 8.0, 16.0, 30.0, 100.0}) {
        const double q = oracle::exp_sin_quadrature(0.0, x);  // ∫_0^1 sin(xt)/t dt = Si(x)
        EXPECT_NEAR(si(x), q, 1e-14) << x;
    }
}

TEST(Ein, KnownValues) {
    EXPECT_EQ(ein(Complex(0.0, 0.0)), Complex(0.0, 0.0));
    const Complex e1 = ein(Complex(1.0, 0.0));
    EXPECT_NEAR(e1.real(), 0.7965995992970531, 1e-15);
    EXPECT_EQ(e1.imag(), 0.0);
}

TEST(Ein, SchwarzReflection) {
    for (Complex z : {Complex(2, 3), Complex(-7, 0.5), Complex(30, -200), Complex(-40, 4000)}) {
        const Complex a = ein(std::conj(z)), b = std::conj(ein(z));
        EXPECT_LE(std::abs(a - b), 1e-15 * std::abs(b)) << z;
    }
}

TEST(Ein, MatchesHighPrecisionSeries) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-50.0, 50.0), im(-50.0, 50.0);
    for (int i = 0; i < 300; ++i) {
        Complex z(re(rng), im(rng));
        if (std::abs(z) > 60.0) continue;
        const Complex ref = oracle::ein_series_mp(z);
        EXPECT_LE(std::abs(ein(z) - ref), 1e-13 * std::abs(ref)) << z;
    }
}

TEST(Ein, MatchesQuadratureOverPayoffRegion) {
    // |Re z| <= 50, |Im z| <= 5000
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-50.0, 50.0), im(-5000.0, 5000.0);
    for (int i = 0; i < 60; ++i) {
        const Complex z(re(rng), im(rng));
        const Complex ref = oracle::ein_quadrature(z);
        EXPECT_LE(std::abs(ein(z) - ref), 1e-13 * std::abs(ref)) << z;
    }
}

TEST(Ein, ContinuousAcrossAlgorithmSwitch) {
    // the series is used for |z| <= 4 or |z| + Re z <= 4
    for (double r : {3.999999, 4.000001}) {
        for (double arg = -3.0; arg <= 3.0; arg += 0.25) {
            const Complex z = std::polar(r, arg);
            const Complex ref = oracle::ein_series_mp(z);
            EXPECT_LE(std::abs(ein(z) - ref), 1e-12 * std::abs(ref)) << z;
        }
    }
    for (double x : {-10.0, -30.0}) {
        // |z| + Re z = 4 on the parabola y² = 16 - 8x
        const double y = std::sqrt(16.0 - 8.0 * x);
        for (double d : {-1e-6, 1e-6}) {
            const Complex z(x, y + d);
            const Complex ref = oracle::ein_series_mp(z);
            EXPECT_LE(std::abs(ein(z) - ref), 1e-12 * std::abs(ref)) << z;
        }
    }
}

TEST(ExpSinIntegral, Examples) {
    EXPECT_NEAR(exp_sin_integral(0.0, kPi), 1.8519370519824662, 1e-15);
    EXPECT_EQ(exp_sin_integral(1.0, 0.0), 0.0);
    EXPECT_NEAR(exp_sin_integral(1.0, 2.0), oracle::exp_sin_quadrature(1.0, 2.0), 1e-14);
}

TEST(ExpSinIntegral, RandomPointsAgainstQuadrature) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> da(-20.0, 20.0), db(-200.0, 200.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = da(rng), b = db(rng);
        const double ref = oracle::exp_sin_quadrature(a, b);
        EXPECT_LE(std::fabs(exp_sin_integral(a, b) - ref), 1e-11 * (1.0 + std::fabs(ref))) << a << " " << b;
    }
}
