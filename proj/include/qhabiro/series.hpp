#pragma once

#include <gmpxx.h>

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// boost 1.74 mixed comparisons recurse forever under C++20 rewritten
// operators; exact overloads win overload resolution and stop that.
namespace boost {
#define QH_RAT_EQ(T)                                                                                  \
    inline bool operator==(const rational<long long>& a, T b) { return a == rational<long long>(b); } \
    inline bool operator==(T b, const rational<long long>& a) { return a == rational<long long>(b); } \
    inline bool operator!=(const rational<long long>& a, T b) { return !(a == rational<long long>(b)); } \
    inline bool operator!=(T b, const rational<long long>& a) { return !(a == rational<long long>(b)); }
QH_RAT_EQ(int)
QH_RAT_EQ(long)
QH_RAT_EQ(long long)
#undef QH_RAT_EQ
}  // namespace boost

namespace qh {

using Rat = boost::rational<long long>;

// Every failure raised by the library. The CLI maps these to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long long floor_div(long long a, long long b);
long long ceil_div(long long a, long long b);
long long floor(Rat r);
long long ceil(Rat r);
std::string rat_str(Rat r);

// Lowest exponent of a series. Truncated series that vanish up to their
// precision only give a lower bound.
struct Degree {
    enum class Kind { Finite, Infinite, AtLeast };
    Kind kind = Kind::Infinite;
    Rat value = 0;

    bool finite() const { return kind == Kind::Finite; }
    // value usable as a lower bound; Infinite maps to nullopt
    std::optional<Rat> lower() const;
    bool at_least(Rat b) const;
};

// Laurent series in q^{1/s}. Exponents and precision are stored as integers in
// units of 1/s; prec is exclusive, nullopt means the series is exact.
class QSeries {
public:
    QSeries() = default;

    static QSeries zero_to(Rat prec);
    static QSeries one() { return constant(1); }
    static QSeries constant(const mpz_class& c);
    static QSeries monomial(const mpz_class& c, Rat e);
    static QSeries from_units(long long scale, long long offset, std::vector<mpz_class> coeffs,
                              std::optional<long long> prec_units);
    // q-polynomial with integer exponents starting at `offset`
    static QSeries from_ints(long long offset, const std::vector<long long>& coeffs,
                             std::optional<Rat> prec = std::nullopt);

    long long scale() const { return s_; }
    long long offset() const { return e0_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    std::optional<long long> prec_units() const { return prec_; }

    bool exact() const { return !prec_; }
    std::optional<Rat> prec() const;
    bool is_zero() const { return c_.empty(); }
    bool is_exact_zero() const { return c_.empty() && !prec_; }

    Degree delta() const;
    // lowest exponent, or the precision when zero to prec; nullopt for exact zero
    std::optional<Rat> low() const;
    Rat max_exponent() const;  // requires nonzero
    const mpz_class& leading_coeff() const;

    mpz_class coeff(Rat e) const;
    std::vector<std::pair<Rat, mpz_class>> terms() const;

    QSeries truncate(Rat n) const;
    QSeries truncate_opt(std::optional<Rat> n) const { return n ? truncate(*n) : *this; }
    QSeries shift(Rat e) const;
    QSeries rescaled(long long s) const;
    QSeries subst_qpow(long long m) const;
    QSeries mirror() const;
    QSeries scaled(const mpz_class& c) const;
    QSeries with_prec(std::optional<long long> prec_units) const;

    QSeries operator-() const;
    QSeries& operator+=(const QSeries& o);
    QSeries& operator-=(const QSeries& o);
    QSeries& operator*=(const QSeries& o);
    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
    friend QSeries operator*(const QSeries& a, const QSeries& b);

    bool operator==(const QSeries& o) const;
    bool operator!=(const QSeries& o) const { return !(*this == o); }

    // a and b agree on every exponent below n (both must be known there)
    friend bool agree_to(const QSeries& a, const QSeries& b, Rat n);

    std::string str() const;

    void normalize();

private:
    long long s_ = 1;
    long long e0_ = 0;
    std::vector<mpz_class> c_;
    std::optional<long long> prec_;
};

// Product computed only below exponent n (n = nullopt: full product).
QSeries mul(const QSeries& a, const QSeries& b, std::optional<Rat> n);

// Exact quotient a/b of exact series; b must have leading coefficient +-1.
// Throws when the remainder is nonzero.
QSeries divide_exact(const QSeries& a, const QSeries& b, const char* what = "inexact division");

// b with a*b = 1 + O(q^n). Leading coefficient must be +-1.
QSeries invert_unit(const QSeries& a, Rat n);

struct DegreeBound {
    std::function<Rat(long long)> bound;
    long long k0 = 0;
};

using TermGen = std::function<QSeries(long long k, Rat prec)>;

// Sum of term(k) for k >= k_begin, stopping at the first k >= k0 whose bound
// reaches n. Each term is checked against its declared bound.
QSeries sum_bounded(const TermGen& term, const DegreeBound& bound, Rat n, long long k_begin = 0,
                    long long k_limit = 1000000);

}  // namespace qh
