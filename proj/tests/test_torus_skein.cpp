#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qtrace/torus_skein.hpp"

using namespace qtrace;

namespace {

SkeinElementT T(long long p, long long q, LaurentPoly c = 1) { return SkeinElementT::term(CurveClass(p, q), c); }
LaurentPoly A(int k, long long c = 1) { return LaurentPoly::monomial(k, c); }
SkeinElementT scalar(long long c) { return SkeinElementT::scalar(c); }

MulticurveKey copies(long long p, long long q, long long n) { return {CurveClass(p, q), n}; }

} // namespace

TEST(CurveClass, Canonical) {
    EXPECT_EQ(CurveClass(-1, 2), CurveClass(1, -2));
    EXPECT_EQ(CurveClass(0, -3), CurveClass(0, 3));
    EXPECT_EQ(CurveClass(0, -3).q(), 3);
    EXPECT_EQ(CurveClass(-4, -6).p(), 4);
    EXPECT_EQ(CurveClass(4, 6).multiplicity(), 2);
    EXPECT_EQ(CurveClass(4, -6).primitive(), CurveClass(2, -3));
    EXPECT_EQ(CurveClass(0, 0).multiplicity(), 0);
}

TEST(Laurent, Arithmetic) {
    const LaurentPoly x = A(1) + A(-1);
    EXPECT_EQ(x * x, A(2) + LaurentPoly(2) + A(-2));
    EXPECT_TRUE((x - x).is_zero());
    EXPECT_EQ(x.shifted(3), A(4) + A(2));
    EXPECT_EQ((A(2, 5) + A(-1, -3)).conjugate(), A(-2, 5) + A(1, -3));
    EXPECT_EQ(x.at_minus_one(), -2);
}

TEST(Laurent, BigCoefficientIsCentralBinomial) {
    // (A + A^-1)^128 has constant term C(128, 64)
    LaurentPoly x = A(1) + A(-1);
    LaurentPoly p = 1;
    for (int i = 0; i < 128; ++i)
        p = p * x;
    BigInt c = 1;
    for (int k = 1; k <= 64; ++k)
        c = c * (64 + k) / k;
    EXPECT_EQ(p.coeff(0), c);
    EXPECT_GT(c, BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST(Evaluate, Examples) {
    for (int r = 3; r <= 30; ++r) {
        const Level level(r);
        const auto v = (A(1) + A(-1)).evaluate(level);
        EXPECT_NEAR(v.real(), -2.0 * std::cos(oracle::pi / (2.0 * r)), 1e-14);
        EXPECT_NEAR(v.imag(), 0.0, 1e-14);
        const auto w = A(4 * r).evaluate(level);
        EXPECT_EQ(w, std::complex<double>(1.0, 0.0));
    }
    EXPECT_EQ((A(1) + A(-1)).at_minus_one(), -2);
    const auto e = at_minus_one(T(1, 0, A(1) + A(-1)));
    EXPECT_EQ(e.coeff(CurveClass(1, 0)), -2);
}

TEST(FgMul, Examples) {
    EXPECT_EQ(fg_mul(T(1, 0), T(0, 1)), T(1, 1, A(1)) + T(1, -1, A(-1)));
    EXPECT_EQ(fg_mul(T(1, 0), T(1, 0)), T(2, 0) + scalar(2));
    EXPECT_EQ(fg_mul(T(2, 0), T(0, 1)), T(2, 1, A(2)) + T(2, -1, A(-2)));
    EXPECT_EQ(fg_mul(scalar(3), T(5, 2, A(1))), T(5, 2, A(1, 3)));
}

TEST(FgMul, ScalarSquareMatchesChebyshev) {
    // (2,0)_T = X^2 - 2 computed through multicurves agrees with the product rule
    const auto x2 = fg_mul(T(1, 0), T(1, 0));
    MulticurveElement<LaurentPoly> expected;
    expected.add(copies(1, 0, 2), 1);
    EXPECT_EQ(t_to_multicurve(x2), expected);
}

TEST(Chebyshev, Examples) {
    MulticurveElement<LaurentPoly> two;
    two.add(copies(1, 0, 2), 1);
    two.add(MulticurveKey::empty(), -2);
    EXPECT_EQ(t_to_multicurve(T(2, 0)), two);

    MulticurveElement<LaurentPoly> one;
    one.add(copies(1, 1, 1), 1);
    EXPECT_EQ(t_to_multicurve(T(1, 1)), one);

    MulticurveElement<LaurentPoly> three;
    three.add(copies(1, 0, 3), 1);
    three.add(copies(1, 0, 1), -3);
    EXPECT_EQ(t_to_multicurve(T(3, 0)), three);

    EXPECT_EQ(chebyshev_coefficients(0), (std::vector<BigInt>{2}));
    EXPECT_EQ(chebyshev_coefficients(4), (std::vector<BigInt>{2, 0, -4, 0, 1}));
}

TEST(Chebyshev, ChebyshevIsTraceOfPowers) {
    // T_n(2 cos t) = 2 cos(n t)
    for (int n = 0; n <= 25; ++n) {
        const auto c = chebyshev_coefficients(n);
        for (double t : {0.1, 0.7, 2.3}) {
            double x = 2.0 * std::cos(t), s = 0.0, pw = 1.0;
            for (const auto& k : c) {
                s += k.convert_to<double>() * pw;
                pw *= x;
            }
            EXPECT_NEAR(s, 2.0 * std::cos(n * t), 1e-6 * std::max(1.0, std::abs(s)));
        }
    }
}

TEST(Chebyshev, RoundTrip) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto x = oracle::random_element(rng, 4, 8, 3);
        EXPECT_EQ(multicurve_to_t(t_to_multicurve(x)), x);
    }
}

TEST(Conjugate, Examples) {
    EXPECT_EQ(conjugate(T(1, 1, A(1))), T(1, 1, A(-1)));
    const auto ints = T(2, 3, 5) + scalar(-7);
    EXPECT_EQ(conjugate(ints), ints);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto x = oracle::random_element(rng);
        EXPECT_EQ(conjugate(conjugate(x)), x);
    }
}

TEST(Algebra, Associative) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto x = oracle::random_element(rng), y = oracle::random_element(rng), z = oracle::random_element(rng);
        EXPECT_EQ(fg_mul(fg_mul(x, y), z), fg_mul(x, fg_mul(y, z)));
    }
}

TEST(Algebra, CommutativeAtMinusOne) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const auto x = oracle::random_element(rng), y = oracle::random_element(rng);
        EXPECT_TRUE(at_minus_one(fg_mul(x, y) - fg_mul(y, x)).is_zero());
    }
}

TEST(Algebra, CosineModelIsMultiplicative) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * oracle::pi);
    for (int i = 0; i < 100; ++i) {
        const auto x = oracle::random_element(rng), y = oracle::random_element(rng);
        const auto xy = at_minus_one(fg_mul(x, y));
        const auto xm = at_minus_one(x), ym = at_minus_one(y);
        for (int k = 0; k < 1000; ++k) {
            const double u = angle(rng), v = angle(rng);
            const double lhs = oracle::cosine_model(xy, u, v);
            const double rhs = oracle::cosine_model(xm, u, v) * oracle::cosine_model(ym, u, v);
            ASSERT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(TorusTrace, Examples) {
    MulticurveElement<std::complex<double>> two;
    two.add(copies(1, 0, 2), 1.0);
    EXPECT_NEAR(trace_level_torus(two, Level(6)).real(), 8.0, 1e-12);
    MulticurveElement<std::complex<double>> empty;
    empty.add(MulticurveKey::empty(), 1.0);
    EXPECT_NEAR(trace_level_torus(empty, Level(5)).real(), 4.0, 1e-12);
}

TEST(TorusTrace, SingleCurveTracesToZero) {
    // sum_{k=1}^{r-1} -2 cos(k pi / r) vanishes: the terms cancel in pairs k <-> r - k
    for (int r = 3; r <= 40; ++r) {
        MulticurveElement<std::complex<double>> one;
        one.add(copies(2, 3, 1), 1.0);
        EXPECT_NEAR(trace_level_torus(one, Level(r)).real(), oracle::direct_torus_trace(r, 1), 1e-12);
        EXPECT_NEAR(trace_level_torus(one, Level(r)).real(), 0.0, 1e-12);
    }
}

TEST(TorusTrace, IndependentOfPrimitiveClass) {
    for (int r = 3; r <= 15; ++r) {
        for (int n = 0; n <= 6; ++n) {
            MulticurveElement<std::complex<double>> ref;
            ref.add(n == 0 ? MulticurveKey::empty() : copies(1, 0, n), 1.0);
            const auto base = trace_level_torus(ref, Level(r));
            EXPECT_NEAR(base.real(), oracle::direct_torus_trace(r, n), 1e-9);
            for (auto cls : {CurveClass(0, 1), CurveClass(1, 1), CurveClass(2, -5), CurveClass(7, 3)}) {
                if (n == 0)
                    continue;
                MulticurveElement<std::complex<double>> x;
                x.add(MulticurveKey{cls, n}, 1.0);
                EXPECT_NEAR(std::abs(trace_level_torus(x, Level(r)) - base), 0.0, 1e-9);
            }
        }
    }
}

TEST(PairLevel, Examples) {
    for (int r = 3; r <= 40; ++r) {
        const Level level(r);
        const auto aa = pair_level_torus(T(1, 0), T(1, 0), level);
        EXPECT_NEAR(aa.real(), 2.0 * r - 4, 1e-10);
        EXPECT_NEAR(aa.imag(), 0.0, 1e-10);
        // (A + A^-1) times the single-curve trace, which is zero
        const auto ab = pair_level_torus(T(1, 0), T(0, 1), level);
        const double oracle_value = -2.0 * std::cos(oracle::pi / (2.0 * r)) * oracle::direct_torus_trace(r, 1);
        EXPECT_NEAR(std::abs(ab - oracle_value), 0.0, 1e-10);
    }
}

TEST(PairLevel, HermitianSymmetry) {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 30; ++i) {
        const auto x = oracle::random_element(rng), y = oracle::random_element(rng);
        for (int r = 3; r <= 20; ++r) {
            const auto xy = pair_level_torus(x, y, Level(r));
            const auto yx = pair_level_torus(y, x, Level(r));
            EXPECT_NEAR(std::abs(xy - std::conj(yx)), 0.0, 1e-9 * std::max(1.0, std::abs(xy)));
        }
    }
}

TEST(PairLevel, NormalizedConvergesToLimit) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10; ++i) {
        const auto x = oracle::random_element(rng, 3, 3, 2);
        const double lim = pair_limit_torus(x, x);
        const double at = pair_level_torus(x, x, Level(4000)).real() / 4000.0;
        EXPECT_NEAR(at, lim, 0.05 * std::max(1.0, std::abs(lim)));
    }
}

TEST(PairLimit, Examples) {
    EXPECT_EQ(pair_limit_torus(T(1, 0), T(1, 0)), 2.0);
    EXPECT_EQ(pair_limit_torus(T(1, 0), T(0, 1)), 0.0);
    EXPECT_EQ(pair_limit_torus(scalar(1), scalar(1)), 1.0);
    EXPECT_EQ(copies_limit(0), 1);
    EXPECT_EQ(copies_limit(6), 20);
    EXPECT_EQ(copies_limit(7), 0);
}

TEST(PairLimit, MatchesCosineModelAverage) {
    // <x, y> at A = -1 is the average of mu(x) mu(y) over the diagonal torus,
    // computed here by an exact trapezoid rule in both angles
    std::mt19937_64 rng(8);
    const int n = 64;
    for (int i = 0; i < 40; ++i) {
        const auto x = oracle::random_element(rng, 3, 4, 2), y = oracle::random_element(rng, 3, 4, 2);
        const auto xm = at_minus_one(x), ym = at_minus_one(y);
        double avg = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double u = 2.0 * oracle::pi * a / n, v = 2.0 * oracle::pi * b / n;
                avg += oracle::cosine_model(xm, u, v) * oracle::cosine_model(ym, u, v);
            }
        avg /= n * n;
        EXPECT_NEAR(pair_limit_torus(x, y), avg, 1e-8 * std::max(1.0, std::abs(avg)));
    }
}

TEST(Mcg, Examples) {
    EXPECT_EQ(mcg_act(Unimodular(1, 1, 0, 1), T(0, 1)), T(1, 1));
    std::mt19937_64 rng(9);
    const auto x = oracle::random_element(rng);
    EXPECT_EQ(mcg_act(Unimodular::identity(), x), x);
    EXPECT_THROW(Unimodular(2, 0, 0, 1), input_error);
    EXPECT_THROW(parse_matrix("1,2,3"), input_error);
    EXPECT_THROW(parse_matrix("1,x,0,1"), input_error);
    EXPECT_EQ(parse_matrix("1,1,0,1"), Unimodular(1, 1, 0, 1));
}

TEST(Mcg, InverseUndoesAction) {
    std::mt19937_64 rng(10);
    const std::vector<Unimodular> gens{{1, 1, 0, 1}, {1, 0, 1, 1}, {0, -1, 1, 0}, {1, 0, 0, -1}};
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    for (int i = 0; i < 100; ++i) {
        Unimodular m = Unimodular::identity();
        for (int k = 0; k < 4; ++k)
            m = m * gens[pick(rng)];
        const auto x = oracle::random_element(rng);
        EXPECT_EQ(mcg_act(m.inverse(), mcg_act(m, x)), x);
        EXPECT_EQ(m * m.inverse(), Unimodular::identity());
    }
}

TEST(Mcg, IsometryOfLimitPairing) {
    std::mt19937_64 rng(11);
    const std::vector<Unimodular> ms{{1, 1, 0, 1}, {2, 1, 1, 1}, {0, -1, 1, 0}, {1, 0, 0, -1}, {3, 2, 4, 3}};
    for (int i = 0; i < 50; ++i) {
        const auto x = oracle::random_element(rng), y = oracle::random_element(rng);
        for (const auto& m : ms)
            EXPECT_EQ(pair_limit_torus_exact(mcg_act(m, x), mcg_act(m, y)), pair_limit_torus_exact(x, y));
    }
}

TEST(Parse, Examples) {
    EXPECT_EQ(parse_skein("(1,0) + 2*A^-1*(1,-1)"), T(1, 0) + T(1, -1, A(-1, 2)));
    EXPECT_EQ(parse_skein(" ( 0 , 1 ) "), T(0, 1));
    EXPECT_EQ(parse_skein("3"), scalar(3));
    EXPECT_EQ(parse_skein("(0,0)"), scalar(1));
    EXPECT_EQ(parse_skein("-A*(2,1) + A*(-2,-1)"), SkeinElementT{});
    EXPECT_EQ(parse_skein("A^2*A^-3*(1,1)"), T(1, 1, A(-1)));
}

TEST(Parse, RoundTrip) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const auto x = oracle::random_element(rng);
        EXPECT_EQ(parse_skein(to_string(x)), x) << to_string(x);
    }
    EXPECT_EQ(to_string(SkeinElementT{}), "0");
}

TEST(Parse, Errors) {
    for (const char* bad : {"", "(1,0", "(1;0)", "(1,0)(0,1)", "(1,0) (0,1)", "A^", "x", "2*", "(1,0)+"})
        EXPECT_THROW(parse_skein(bad), input_error) << bad;
}
