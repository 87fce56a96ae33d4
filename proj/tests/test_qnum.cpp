#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "oracles.hpp"
#include "qtrace/qnum.hpp"

using namespace qtrace;

TEST(Level, RejectsSmallLevels) {
    EXPECT_THROW(Level(2), input_error);
    EXPECT_THROW(Level(-1), input_error);
    EXPECT_NO_THROW(Level(3));
    EXPECT_EQ(Level(7).p(), 14);
}

TEST(Level, RootIsPrimitive4rthRoot) {
    for (int r = 3; r <= 20; ++r) {
        const Level level(r);
        EXPECT_NEAR(std::abs(level.root()), 1.0, 1e-15);
        EXPECT_EQ(level.root_power(4 * r), std::complex<double>(1.0, 0.0));
        for (int k = 1; k < 4 * r; ++k)
            EXPECT_GT(std::abs(level.root_power(k) - 1.0), 1e-6) << "r=" << r << " k=" << k;
        // A = -exp(i pi / 2r)
        const std::complex<double> expected = -std::polar(1.0, oracle::pi / (2.0 * r));
        EXPECT_NEAR(std::abs(level.root() - expected), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(level.root_power(-3) - std::pow(expected, -3)), 0.0, 1e-13);
    }
}

TEST(QuantumInt, Examples) {
    const Level r5(5);
    EXPECT_DOUBLE_EQ(quantum_int(r5, 1), 1.0);
    EXPECT_EQ(quantum_int(r5, 5), 0.0);
    // [2] at r = 5 is 2 cos(pi/5), the golden ratio
    EXPECT_NEAR(quantum_int(r5, 2), 1.6180339887498949, 1e-15);
    EXPECT_THROW(quantum_int(r5, -1), input_error);
}

TEST(QuantumInt, MatchesExtendedPrecisionOracle) {
    using Ext = boost::multiprecision::cpp_bin_float_50;
    for (int r = 3; r <= 30; ++r) {
        const Level level(r);
        for (int j = 0; j <= 2 * r; ++j) {
            const Ext expected = oracle::quantum_int(r, j);
            EXPECT_NEAR(quantum_int(level, j), expected.convert_to<double>(), 1e-13);
            // the templated path in 50 digits agrees to far more digits
            const Ext ext = quantum_int<Ext>(level, j);
            EXPECT_LT(abs(ext - expected).convert_to<double>(), 1e-40);
        }
    }
}

TEST(QuantumInt, SineSymmetryAndPositivity) {
    for (int r = 3; r <= 40; ++r) {
        const Level level(r);
        for (int j = 0; j <= r; ++j)
            EXPECT_NEAR(quantum_int(level, j), quantum_int(level, r - j), 1e-12);
        for (int j = 1; j <= r - 1; ++j)
            EXPECT_GT(quantum_int(level, j), 0.0);
    }
}

TEST(QuantumFact, Examples) {
    EXPECT_EQ(quantum_fact(Level(7), 0), 1.0);
    EXPECT_EQ(quantum_fact(Level(7), 1), 1.0);
    const double phi = 1.6180339887498949;
    EXPECT_NEAR(quantum_fact(Level(5), 3), phi * phi, 1e-14);
    EXPECT_THROW(quantum_fact(Level(5), -2), input_error);
}

TEST(QuantumFact, VanishesFromR) {
    const Level level(6);
    EXPECT_FALSE(factorial_vanishes(level, 5));
    EXPECT_TRUE(factorial_vanishes(level, 6));
    EXPECT_EQ(quantum_fact(level, 6), 0.0);
    EXPECT_EQ(quantum_fact(level, 9), 0.0);
    EXPECT_NEAR(std::exp(log_quantum_fact(level, 5)), quantum_fact(level, 5), 1e-12);
    EXPECT_THROW(log_quantum_fact(level, 6), input_error);
}

TEST(LoopSymbol, Examples) {
    EXPECT_DOUBLE_EQ(loop_symbol(Level(5), 0), 1.0);
    EXPECT_NEAR(loop_symbol(Level(5), 1), -1.6180339887498949, 1e-15);
    for (int r = 3; r <= 15; ++r) {
        const Level level(r);
        const double expected = ((r - 2) % 2 == 0) ? 1.0 : -1.0;
        EXPECT_NEAR(loop_symbol(level, r - 2), expected, 1e-12);
    }
    EXPECT_THROW(loop_symbol(Level(5), 4), input_error);
    EXPECT_THROW(loop_symbol(Level(5), -1), input_error);
}

TEST(Admissibility, Examples) {
    EXPECT_TRUE(is_admissible(Level(3), 0, 0, 0));
    EXPECT_FALSE(is_admissible(Level(3), 1, 1, 1));
    EXPECT_FALSE(is_admissible(Level(4), 2, 2, 2));
    EXPECT_FALSE(is_admissible(Level(5), 0, 0, 5)); // not a color
}

TEST(Admissibility, AgreesWithDefinitionAndIsSymmetric) {
    for (int r = 3; r <= 12; ++r) {
        const Level level(r);
        for (int a = 0; a <= r - 2; ++a)
            for (int b = 0; b <= r - 2; ++b)
                for (int c = 0; c <= r - 2; ++c) {
                    const bool v = is_admissible(level, a, b, c);
                    EXPECT_EQ(v, oracle::admissible_triple(a, b, c, r));
                    EXPECT_EQ(v, is_admissible(level, b, a, c));
                    EXPECT_EQ(v, is_admissible(level, c, b, a));
                    EXPECT_EQ(v, is_admissible(level, a, c, b));
                }
    }
}

TEST(ThetaSymbol, Examples) {
    EXPECT_NEAR(theta_symbol(Level(5), 0, 0, 0), 1.0, 1e-15);
    EXPECT_NEAR(theta_symbol(Level(5), 1, 1, 0), -1.6180339887498949, 1e-14);
    EXPECT_THROW(theta_symbol(Level(5), 1, 1, 1), input_error);
}

TEST(ThetaSymbol, MatchesFactorialFormulaInExtendedPrecision) {
    using Ext = boost::multiprecision::cpp_bin_float_50;
    for (int r = 3; r <= 12; ++r) {
        const Level level(r);
        auto fact = [&](int j) {
            Ext out = 1;
            for (int k = 1; k <= j; ++k)
                out *= oracle::quantum_int(r, k);
            return out;
        };
        for (int a = 0; a <= r - 2; ++a)
            for (int b = 0; b <= r - 2; ++b)
                for (int c = 0; c <= r - 2; ++c) {
                    if (!is_admissible(level, a, b, c))
                        continue;
                    const int x = (b + c - a) / 2, y = (a + c - b) / 2, z = (a + b - c) / 2;
                    Ext expected = fact(x + y + z + 1) * fact(x) * fact(y) * fact(z) / (fact(a) * fact(b) * fact(c));
                    if ((x + y + z) % 2)
                        expected = -expected;
                    const double got = theta_symbol(level, a, b, c);
                    EXPECT_NEAR(got, expected.convert_to<double>(), 1e-12 * std::max(1.0, std::abs(got)));
                }
    }
}

TEST(ThetaSymbol, PermutationInvariantExhaustive) {
    for (int r = 3; r <= 12; ++r) {
        const Level level(r);
        for (int a = 0; a <= r - 2; ++a)
            for (int b = 0; b <= r - 2; ++b)
                for (int c = 0; c <= r - 2; ++c) {
                    if (!is_admissible(level, a, b, c))
                        continue;
                    std::array<int, 3> t{a, b, c};
                    const double ref = theta_symbol(level, a, b, c);
                    std::sort(t.begin(), t.end());
                    do {
                        EXPECT_NEAR(theta_symbol(level, t[0], t[1], t[2]), ref, 1e-12 * std::max(1.0, std::abs(ref)));
                    } while (std::next_permutation(t.begin(), t.end()));
                }
    }
}

TEST(ThetaSymbol, ReducesToLoopSymbol) {
    for (int r = 3; r <= 12; ++r) {
        const Level level(r);
        for (int a = 0; a <= r - 2; ++a)
            EXPECT_NEAR(theta_symbol(level, a, a, 0), loop_symbol(level, a), 1e-12);
    }
}

TEST(ThetaSymbol, FiniteAtLargeLevels) {
    const Level level(400);
    const double v = theta_symbol(level, 200, 150, 130);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NE(v, 0.0);
}

TEST(Eta, Values) {
    EXPECT_NEAR(eta(Level(3)), 0.70710678118654752, 1e-15);
    EXPECT_NEAR(eta(Level(4)), 0.5, 1e-15);
    double prev = eta(Level(3));
    for (int r = 4; r <= 200; ++r) {
        const double e = eta(Level(r));
        EXPECT_LT(e, prev);
        prev = e;
    }
    // sqrt(2) pi r^(-3/2) asymptotically
    const double r = 1e5;
    EXPECT_NEAR(eta(Level(100000)) / (std::sqrt(2.0) * oracle::pi * std::pow(r, -1.5)), 1.0, 1e-8);
}
