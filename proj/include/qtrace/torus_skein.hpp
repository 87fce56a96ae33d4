#pragma once

// The Kauffman skein algebra of the thickened torus.
//
// Elements are finite combinations of curve classes (p, q) ~ (-p, -q) with
// Laurent-polynomial coefficients, in the Chebyshev basis: for d = gcd(p, q)
// the class (p, q)_T is T_d applied to the primitive curve (p/d, q/d), where
// T_0 = 2, T_1 = X, T_{n+1} = X T_n - T_{n-1}. The key (0, 0) holds the
// coefficient of the empty link, so the basis element (0,0)_T = T_0 of the
// product rule enters as 2 * (0, 0).
//
// Product (Frohman-Gelca):
//     (p,q)_T * (r,s)_T = A^(ps-qr) (p+r, q+s)_T + A^-(ps-qr) (p-r, q-s)_T.
//
// The multicurve basis records n parallel copies of a primitive curve; the
// change of basis is the Chebyshev expansion, an integer unitriangular map.

#include <cctype>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qtrace/asymptotics.hpp"
#include "qtrace/error.hpp"
#include "qtrace/laurent.hpp"
#include "qtrace/qnum.hpp"
#include "qtrace/summation.hpp"

namespace qtrace {

/// Canonical representative of {(p, q), (-p, -q)}: (0,0), or p > 0, or
/// p = 0 and q > 0.
class CurveClass {
  public:
    CurveClass() = default;
    CurveClass(long long p, long long q) : p_(p), q_(q) {
        if (p_ < 0 || (p_ == 0 && q_ < 0)) {
            p_ = -p_;
            q_ = -q_;
        }
    }

    long long p() const { return p_; }
    long long q() const { return q_; }
    bool is_empty() const { return p_ == 0 && q_ == 0; }
    /// Number of parallel components, gcd(|p|, |q|).
    long long multiplicity() const { return std::gcd(p_, q_); }
    CurveClass primitive() const {
        const long long d = multiplicity();
        return d == 0 ? *this : CurveClass(p_ / d, q_ / d);
    }

    friend auto operator<=>(const CurveClass&, const CurveClass&) = default;

    std::string to_string() const { return "(" + std::to_string(p_) + "," + std::to_string(q_) + ")"; }

  private:
    long long p_ = 0;
    long long q_ = 0;
};

// ---------------------------------------------------------------------------
// Coefficient helpers shared by the exact, integer and complex elements

namespace detail {

inline bool coeff_is_zero(const LaurentPoly& c) { return c.is_zero(); }
inline bool coeff_is_zero(const BigInt& c) { return c == 0; }
inline bool coeff_is_zero(const std::complex<double>& c) { return c == std::complex<double>(0.0, 0.0); }

inline LaurentPoly coeff_scale(const LaurentPoly& c, const BigInt& k) { return c * LaurentPoly(k); }
inline BigInt coeff_scale(const BigInt& c, const BigInt& k) { return c * k; }
inline std::complex<double> coeff_scale(const std::complex<double>& c, const BigInt& k) {
    return c * k.convert_to<double>();
}

template <class Coeff>
void accumulate(std::map<CurveClass, Coeff>& terms, const CurveClass& key, const Coeff& c) {
    if (coeff_is_zero(c))
        return;
    auto [it, inserted] = terms.emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (coeff_is_zero(it->second))
            terms.erase(it);
    }
}

} // namespace detail

/// Finite combination of curve classes in the Chebyshev basis.
template <class Coeff>
class TorusElement {
  public:
    TorusElement() = default;

    static TorusElement term(const CurveClass& c, const Coeff& coeff) {
        TorusElement out;
        out.add(c, coeff);
        return out;
    }
    static TorusElement scalar(const Coeff& coeff) { return term(CurveClass(0, 0), coeff); }

    void add(const CurveClass& c, const Coeff& coeff) { detail::accumulate(terms_, c, coeff); }

    const std::map<CurveClass, Coeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Coeff coeff(const CurveClass& c) const {
        auto it = terms_.find(c);
        return it == terms_.end() ? Coeff{} : it->second;
    }

    TorusElement& operator+=(const TorusElement& o) {
        for (const auto& [k, c] : o.terms_)
            add(k, c);
        return *this;
    }
    TorusElement& operator-=(const TorusElement& o) {
        for (const auto& [k, c] : o.terms_)
            add(k, -c);
        return *this;
    }
    TorusElement operator-() const {
        TorusElement out;
        for (const auto& [k, c] : terms_)
            out.terms_.emplace(k, -c);
        return out;
    }
    friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
    friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
    friend bool operator==(const TorusElement&, const TorusElement&) = default;

  private:
    std::map<CurveClass, Coeff> terms_;
};

using SkeinElementT = TorusElement<LaurentPoly>;

/// n parallel copies of a primitive curve; n = 0 with class (0,0) is the
/// empty multicurve.
struct MulticurveKey {
    CurveClass primitive;
    long long copies = 0;

    static MulticurveKey empty() { return {CurveClass(0, 0), 0}; }
    bool is_empty() const { return copies == 0; }

    friend auto operator<=>(const MulticurveKey&, const MulticurveKey&) = default;
};

template <class Coeff>
class MulticurveElement {
  public:
    void add(const MulticurveKey& k, const Coeff& c) {
        if (detail::coeff_is_zero(c))
            return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (detail::coeff_is_zero(it->second))
                terms_.erase(it);
        }
    }
    const std::map<MulticurveKey, Coeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Coeff coeff(const MulticurveKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Coeff{} : it->second;
    }
    friend bool operator==(const MulticurveElement&, const MulticurveElement&) = default;

  private:
    std::map<MulticurveKey, Coeff> terms_;
};

// ---------------------------------------------------------------------------
// Chebyshev change of basis

/// Coefficients of T_n in powers of X (index = power), T_0 = 2, T_1 = X.
inline std::vector<BigInt> chebyshev_coefficients(long long n) {
    std::vector<BigInt> prev{2}, cur{0, 1};
    if (n == 0)
        return prev;
    for (long long k = 1; k < n; ++k) {
        std::vector<BigInt> next(cur.size() + 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i)
            next[i + 1] += cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

template <class Coeff>
MulticurveElement<Coeff> t_to_multicurve(const TorusElement<Coeff>& x) {
    MulticurveElement<Coeff> out;
    for (const auto& [cls, c] : x.terms()) {
        if (cls.is_empty()) {
            out.add(MulticurveKey::empty(), c);
            continue;
        }
        const auto cheb = chebyshev_coefficients(cls.multiplicity());
        for (std::size_t k = 0; k < cheb.size(); ++k) {
            if (cheb[k] == 0)
                continue;
            const MulticurveKey key = (k == 0) ? MulticurveKey::empty()
                                               : MulticurveKey{cls.primitive(), static_cast<long long>(k)};
            out.add(key, detail::coeff_scale(c, cheb[k]));
        }
    }
    return out;
}

template <class Coeff>
TorusElement<Coeff> multicurve_to_t(const MulticurveElement<Coeff>& x) {
    // group powers of X by primitive class, then peel off T_n from the top
    std::map<CurveClass, std::map<long long, Coeff>> by_class;
    TorusElement<Coeff> out;
    for (const auto& [key, c] : x.terms()) {
        if (key.is_empty())
            out.add(CurveClass(0, 0), c);
        else
            by_class[key.primitive][key.copies] += c;
    }
    for (auto& [prim, powers] : by_class) {
        while (!powers.empty()) {
            auto top = std::prev(powers.end());
            const long long n = top->first;
            const Coeff lead = top->second;
            powers.erase(top);
            if (detail::coeff_is_zero(lead))
                continue;
            if (n == 0) {
                out.add(CurveClass(0, 0), lead);
                continue;
            }
            out.add(CurveClass(prim.p() * n, prim.q() * n), lead);
            const auto cheb = chebyshev_coefficients(n);
            for (long long k = 0; k < n; ++k)
                if (cheb[static_cast<std::size_t>(k)] != 0)
                    powers[k] -= detail::coeff_scale(lead, cheb[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Algebra

/// Stacking product of the skein algebra.
inline SkeinElementT fg_mul(const SkeinElementT& x, const SkeinElementT& y) {
    SkeinElementT out;
    for (const auto& [a, ca] : x.terms()) {
        for (const auto& [b, cb] : y.terms()) {
            const LaurentPoly c = ca * cb;
            if (a.is_empty()) {
                out.add(b, c);
                continue;
            }
            if (b.is_empty()) {
                out.add(a, c);
                continue;
            }
            const long long det = a.p() * b.q() - a.q() * b.p();
            // (0,0)_T = T_0 = 2 * empty
            auto emit = [&](long long p, long long q, int exponent) {
                LaurentPoly term = c.shifted(exponent);
                if (p == 0 && q == 0)
                    term = term * LaurentPoly(2);
                out.add(CurveClass(p, q), term);
            };
            emit(a.p() + b.p(), a.q() + b.q(), static_cast<int>(det));
            emit(a.p() - b.p(), a.q() - b.q(), -static_cast<int>(det));
        }
    }
    return out;
}

/// Coefficient-wise A -> A^-1; multicurves are their own mirror images.
inline SkeinElementT conjugate(const SkeinElementT& x) {
    SkeinElementT out;
    for (const auto& [cls, c] : x.terms())
        out.add(cls, c.conjugate());
    return out;
}

template <template <class> class Element, class Key>
Element<std::complex<double>> evaluate_terms(const std::map<Key, LaurentPoly>& terms, const Level& level) {
    Element<std::complex<double>> out;
    for (const auto& [k, c] : terms)
        out.add(k, c.evaluate(level));
    return out;
}

inline TorusElement<std::complex<double>> evaluate(const SkeinElementT& x, const Level& level) {
    return evaluate_terms<TorusElement>(x.terms(), level);
}
inline MulticurveElement<std::complex<double>> evaluate(const MulticurveElement<LaurentPoly>& x, const Level& level) {
    return evaluate_terms<MulticurveElement>(x.terms(), level);
}

/// Exact specialization A = -1.
inline TorusElement<BigInt> at_minus_one(const SkeinElementT& x) {
    TorusElement<BigInt> out;
    for (const auto& [cls, c] : x.terms())
        out.add(cls, c.at_minus_one());
    return out;
}
inline MulticurveElement<BigInt> at_minus_one(const MulticurveElement<LaurentPoly>& x) {
    MulticurveElement<BigInt> out;
    for (const auto& [k, c] : x.terms())
        out.add(k, c.at_minus_one());
    return out;
}

// ---------------------------------------------------------------------------
// Traces and pairings

/// sum_{j in C_r} (-2 cos((j+1) pi / r))^n; the empty multicurve (n = 0)
/// gives r - 1.
inline double torus_copies_trace(const Level& level, long long copies) {
    PairwiseSum<double> acc;
    for (int j = 0; j <= level.max_color(); ++j)
        acc.add(meridian_weight(level, j, static_cast<int>(copies)));
    return acc.result();
}

/// tr_p of an evaluated multicurve combination on the torus. The value of n
/// parallel copies does not depend on the primitive class: a mapping class
/// carries any primitive curve to (1, 0), where the genus-1 coloring sum
/// applies.
inline std::complex<double> trace_level_torus(const MulticurveElement<std::complex<double>>& x, const Level& level) {
    std::complex<double> out{0.0, 0.0};
    for (const auto& [key, c] : x.terms())
        out += c * torus_copies_trace(level, key.copies);
    return out;
}

/// <phi_p(x), phi_p(y)>_p = tr_p(x * conj(y)) at A = -exp(i pi / 2r).
inline std::complex<double> pair_level_torus(const SkeinElementT& x, const SkeinElementT& y, const Level& level) {
    return trace_level_torus(evaluate(t_to_multicurve(fg_mul(x, conjugate(y))), level), level);
}

/// integral_0^1 (-2 cos(pi t))^n dt: the central binomial C(n, n/2) for even
/// n, 0 for odd n, 1 for n = 0.
inline BigInt copies_limit(long long copies) {
    if (copies % 2 != 0)
        return 0;
    BigInt out = 1;
    for (long long k = 1; k <= copies / 2; ++k)
        out = out * (copies / 2 + k) / k;
    return out;
}

/// <x, y> = <x * conj(y)> with the product taken at A = -1. The value is an
/// integer.
inline BigInt pair_limit_torus_exact(const SkeinElementT& x, const SkeinElementT& y) {
    const auto product = at_minus_one(t_to_multicurve(fg_mul(x, conjugate(y))));
    BigInt out = 0;
    for (const auto& [key, c] : product.terms())
        out += c * copies_limit(key.copies);
    return out;
}

inline double pair_limit_torus(const SkeinElementT& x, const SkeinElementT& y) {
    return pair_limit_torus_exact(x, y).convert_to<double>();
}

// ---------------------------------------------------------------------------
// Mapping class group

/// Integer 2x2 matrix [[a, b], [c, d]] with determinant +-1.
class Unimodular {
  public:
    Unimodular(long long a, long long b, long long c, long long d) : a_(a), b_(b), c_(c), d_(d) {
        const long long det = a * d - b * c;
        if (det != 1 && det != -1)
            throw input_error("matrix [[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) +
                              "," + std::to_string(d) + "]] has determinant " + std::to_string(det) +
                              ", expected +-1");
    }
    static Unimodular identity() { return {1, 0, 0, 1}; }

    long long a() const { return a_; }
    long long b() const { return b_; }
    long long c() const { return c_; }
    long long d() const { return d_; }
    long long det() const { return a_ * d_ - b_ * c_; }

    Unimodular inverse() const {
        const long long s = det();
        return {d_ * s, -b_ * s, -c_ * s, a_ * s};
    }

    CurveClass apply(const CurveClass& x) const { return {a_ * x.p() + b_ * x.q(), c_ * x.p() + d_ * x.q()}; }

    friend Unimodular operator*(const Unimodular& m, const Unimodular& n) {
        return {m.a_ * n.a_ + m.b_ * n.c_, m.a_ * n.b_ + m.b_ * n.d_, m.c_ * n.a_ + m.d_ * n.c_,
                m.c_ * n.b_ + m.d_ * n.d_};
    }
    friend bool operator==(const Unimodular&, const Unimodular&) = default;

    std::string to_string() const {
        return std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) + "," + std::to_string(d_);
    }

  private:
    long long a_, b_, c_, d_;
};

/// Parses "a,b,c,d" (row-major).
inline Unimodular parse_matrix(const std::string& text) {
    std::vector<long long> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(item, &used));
            if (used != item.size())
                throw input_error("");
        } catch (const std::exception&) {
            throw input_error("matrix entries must be integers: '" + text + "'");
        }
    }
    if (v.size() != 4)
        throw input_error("matrix must have 4 entries a,b,c,d: '" + text + "'");
    return {v[0], v[1], v[2], v[3]};
}

inline SkeinElementT mcg_act(const Unimodular& m, const SkeinElementT& x) {
    SkeinElementT out;
    for (const auto& [cls, c] : x.terms())
        out.add(m.apply(cls), c);
    return out;
}

// ---------------------------------------------------------------------------
// Text format: sums of terms c*A^k*(p,q); a term without a curve is a scalar

namespace detail {

class SkeinParser {
  public:
    explicit SkeinParser(const std::string& text) {
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                s_.push_back(ch);
    }

    SkeinElementT parse() {
        if (s_.empty())
            fail("empty expression");
        SkeinElementT out;
        bool first = true;
        while (pos_ < s_.size()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = (s_[pos_] == '-') ? -1 : 1;
                ++pos_;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            parse_term(out, sign);
        }
        return out;
    }

  private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    [[noreturn]] void fail(const std::string& why) const {
        throw input_error("skein expression '" + s_ + "': " + why + " at position " + std::to_string(pos_));
    }

    BigInt parse_integer(bool allow_sign) {
        std::string digits;
        if (allow_sign && (peek() == '-' || peek() == '+')) {
            if (s_[pos_] == '-')
                digits.push_back('-');
            ++pos_;
        }
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            digits.push_back(s_[pos_++]);
        if (pos_ == start)
            fail("expected an integer");
        return BigInt(digits);
    }

    void parse_term(SkeinElementT& out, int sign) {
        LaurentPoly coeff(sign);
        CurveClass curve(0, 0);
        bool have_curve = false;
        for (;;) {
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                coeff = coeff * LaurentPoly(parse_integer(false));
            } else if (c == 'A') {
                ++pos_;
                long long k = 1;
                if (peek() == '^') {
                    ++pos_;
                    k = parse_integer(true).convert_to<long long>();
                }
                coeff = coeff.shifted(static_cast<int>(k));
            } else if (c == '(') {
                if (have_curve)
                    fail("a term holds at most one curve");
                ++pos_;
                const auto p = parse_integer(true).convert_to<long long>();
                if (peek() != ',')
                    fail("expected ','");
                ++pos_;
                const auto q = parse_integer(true).convert_to<long long>();
                if (peek() != ')')
                    fail("expected ')'");
                ++pos_;
                curve = CurveClass(p, q);
                have_curve = true;
            } else {
                fail("unexpected character");
            }
            if (peek() != '*')
                break;
            ++pos_;
        }
        out.add(curve, coeff);
    }

    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline SkeinElementT parse_skein(const std::string& text) { return detail::SkeinParser(text).parse(); }

inline std::string to_string(const SkeinElementT& x) {
    if (x.is_zero())
        return "0";
    std::string out;
    for (const auto& [cls, poly] : x.terms()) {
        for (const auto& [e, c] : poly.terms()) {
            const bool negative = c < 0;
            if (out.empty())
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            const BigInt mag = negative ? BigInt(-c) : c;
            std::string factors;
            if (mag != 1 || (e == 0 && cls.is_empty()))
                factors = mag.str();
            if (e != 0)
                factors += (factors.empty() ? "" : "*") + std::string("A") + (e == 1 ? "" : "^" + std::to_string(e));
            if (!cls.is_empty())
                factors += (factors.empty() ? "" : "*") + cls.to_string();
            out += factors;
        }
    }
    return out;
}

} // namespace qtrace
