#pragma once

#include <complex>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qtrace/qnum.hpp"

namespace qtrace {

using BigInt = boost::multiprecision::cpp_int;

/// Exact element of Z[A, A^-1]. Zero coefficients are never stored.
class LaurentPoly {
  public:
    LaurentPoly() = default;
    LaurentPoly(long long c) { // NOLINT: integers promote to constants
        if (c != 0)
            terms_.emplace(0, BigInt(c));
    }
    LaurentPoly(const BigInt& c) { // NOLINT
        if (c != 0)
            terms_.emplace(0, c);
    }

    static LaurentPoly monomial(int exponent, const BigInt& coeff = 1) {
        LaurentPoly out;
        if (coeff != 0)
            out.terms_.emplace(exponent, coeff);
        return out;
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<int, BigInt>& terms() const { return terms_; }

    BigInt coeff(int exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [k, c] : o.terms_)
            add_term(k, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [k, c] : o.terms_)
            add_term(k, -c);
        return *this;
    }
    LaurentPoly operator-() const {
        LaurentPoly out;
        for (const auto& [k, c] : terms_)
            out.terms_.emplace(k, -c);
        return out;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out;
        for (const auto& [i, x] : a.terms_)
            for (const auto& [j, y] : b.terms_)
                out.add_term(i + j, x * y);
        return out;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    /// Multiplication by A^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_)
            out.terms_.emplace(e + k, c);
        return out;
    }

    /// A -> A^-1.
    LaurentPoly conjugate() const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_)
            out.terms_.emplace(-e, c);
        return out;
    }

    /// Value at A = -exp(i pi / 2r).
    std::complex<double> evaluate(const Level& level) const {
        std::complex<double> out{0.0, 0.0};
        for (const auto& [e, c] : terms_)
            out += c.convert_to<double>() * level.root_power(e);
        return out;
    }

    std::complex<double> evaluate(std::complex<double> a) const {
        std::complex<double> out{0.0, 0.0};
        for (const auto& [e, c] : terms_)
            out += c.convert_to<double>() * std::pow(a, e);
        return out;
    }

    /// Exact value at A = -1.
    BigInt at_minus_one() const {
        BigInt out = 0;
        for (const auto& [e, c] : terms_)
            out += (e % 2 == 0) ? c : BigInt(-c);
        return out;
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    std::string to_string() const {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first)
                os << (c < 0 ? " - " : " + ");
            else if (c < 0)
                os << "-";
            first = false;
            const BigInt mag = abs(c);
            if (e == 0) {
                os << mag;
                continue;
            }
            if (mag != 1)
                os << mag << "*";
            os << "A";
            if (e != 1)
                os << "^" << e;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

  private:
    void add_term(int exponent, const BigInt& c) {
        if (c == 0)
            return;
        auto [it, inserted] = terms_.emplace(exponent, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    std::map<int, BigInt> terms_;
};

} // namespace qtrace
