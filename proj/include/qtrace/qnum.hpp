#pragma once

// Quantum arithmetic at level r: quantum integers and factorials, the loop
// and theta symbols of colored graphs, r-admissibility and the constant eta.
//
// Every real-valued function is templated on the scalar type so the same code
// path can be evaluated in double or in an extended-precision type such as
// boost::multiprecision::cpp_bin_float_50.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "qtrace/error.hpp"

namespace qtrace {

/// The level r of the theory; p = 2r and A = -exp(i*pi/p).
class Level {
  public:
    static constexpr int min_r = 3;

    explicit Level(int r) : r_(r) {
        if (r < min_r)
            throw input_error("level r must be >= 3, got " + std::to_string(r));
    }

    int r() const { return r_; }
    int p() const { return 2 * r_; }
    /// Number of colors, |{0, ..., r-2}|.
    int num_colors() const { return r_ - 1; }
    int max_color() const { return r_ - 2; }
    bool is_color(int c) const { return c >= 0 && c <= r_ - 2; }

    /// A^k for the primitive 4r-th root A = -exp(i*pi/2r). The exponent is
    /// reduced mod 4r first, so A^(4r) is exactly 1.
    std::complex<double> root_power(long long k) const {
        const long long order = 4LL * r_;
        long long e = k % order;
        if (e < 0)
            e += order;
        if (e == 0)
            return {1.0, 0.0};
        // (-1)^e * exp(i*pi*e/2r)
        const double angle = boost::math::constants::pi<double>() * static_cast<double>(e) / (2.0 * r_);
        std::complex<double> z = std::polar(1.0, angle);
        return (e % 2 == 0) ? z : -z;
    }

    std::complex<double> root() const { return root_power(1); }

    friend bool operator==(const Level&, const Level&) = default;

  private:
    int r_;
};

namespace detail {

inline void require_nonnegative(int j, const char* what) {
    if (j < 0)
        throw input_error(std::string(what) + ": negative argument " + std::to_string(j));
}

inline void require_color(const Level& level, int c) {
    if (!level.is_color(c))
        throw input_error("color " + std::to_string(c) + " outside C_r = {0.." +
                          std::to_string(level.max_color()) + "}");
}

} // namespace detail

/// [j] = sin(pi j / r) / sin(pi / r). Multiples of r give an exact zero.
template <class Real = double>
Real quantum_int(const Level& level, int j) {
    using std::sin;
    detail::require_nonnegative(j, "quantum_int");
    const int r = level.r();
    if (j % r == 0)
        return Real(0);
    const Real pi = boost::math::constants::pi<Real>();
    return Real(sin(pi * Real(j % (2 * r)) / Real(r)) / sin(pi / Real(r)));
}

/// [j]! = [1][2]...[j]. Defined for every j >= 0; any j >= r contains the
/// factor [r] = 0, so see factorial_vanishes().
template <class Real = double>
Real quantum_fact(const Level& level, int j) {
    detail::require_nonnegative(j, "quantum_fact");
    Real out(1);
    for (int k = 1; k <= j; ++k)
        out *= quantum_int<Real>(level, k);
    return out;
}

inline bool factorial_vanishes(const Level& level, int j) { return j >= level.r(); }

/// log([j]!) for 0 <= j <= r-1, where every factor is positive.
template <class Real = double>
Real log_quantum_fact(const Level& level, int j) {
    using std::log;
    detail::require_nonnegative(j, "log_quantum_fact");
    if (j > level.r() - 1)
        throw input_error("log_quantum_fact: j = " + std::to_string(j) + " exceeds r-1");
    Real out(0);
    for (int k = 2; k <= j; ++k)
        out += log(quantum_int<Real>(level, k));
    return out;
}

/// <j> = (-1)^j [j+1], the value of a loop colored j.
template <class Real = double>
Real loop_symbol(const Level& level, int j) {
    detail::require_color(level, j);
    Real v = quantum_int<Real>(level, j + 1);
    return (j % 2 == 0) ? v : Real(-v);
}

inline bool is_admissible(const Level& level, int a, int b, int c) {
    if (!level.is_color(a) || !level.is_color(b) || !level.is_color(c))
        return false;
    const int sum = a + b + c;
    return sum % 2 == 0 && std::abs(a - b) <= c && c <= a + b && sum < 2 * level.r() - 2;
}

/// <a,b,c> = (-1)^(x+y+z) [x+y+z+1]! [x]! [y]! [z]! / ([a]! [b]! [c]!)
/// with a = y+z, b = x+z, c = x+y. Evaluated through logarithms since the
/// factorial products leave the double range for large r; all factorials
/// involved have argument <= r-1 and are therefore positive.
template <class Real = double>
Real theta_symbol(const Level& level, int a, int b, int c) {
    using std::exp;
    if (!is_admissible(level, a, b, c))
        throw input_error("theta_symbol: triple (" + std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + ") is not r-admissible at r=" + std::to_string(level.r()));
    const int x = (b + c - a) / 2;
    const int y = (a + c - b) / 2;
    const int z = (a + b - c) / 2;
    const int s = x + y + z;
    Real log_mag = log_quantum_fact<Real>(level, s + 1) + log_quantum_fact<Real>(level, x) +
                   log_quantum_fact<Real>(level, y) + log_quantum_fact<Real>(level, z) -
                   log_quantum_fact<Real>(level, a) - log_quantum_fact<Real>(level, b) -
                   log_quantum_fact<Real>(level, c);
    Real mag = exp(log_mag);
    return (s % 2 == 0) ? mag : Real(-mag);
}

/// eta = sqrt(2/r) sin(pi/r).
template <class Real = double>
Real eta(const Level& level) {
    using std::sin;
    using std::sqrt;
    const Real r(level.r());
    return sqrt(Real(2) / r) * sin(boost::math::constants::pi<Real>() / r);
}

} // namespace qtrace
