#pragma once

#include "qhabiro/series.hpp"

#include <map>
#include <optional>
#include <utility>

namespace qh {

using OptRat = std::optional<Rat>;

// Gaussian binomial G(n,k) in ordinary q-powers (n >= k >= 0), optionally
// truncated below exponent prec.
QSeries gaussian(long long n, long long k, OptRat prec = std::nullopt);

// Balanced quantities in v = q^{1/2}.
QSeries qint(long long n);
QSeries qbinom(long long n, long long k, OptRat prec = std::nullopt);
QSeries curly(long long n);
QSeries curly_poch(long long n, long long k, OptRat prec = std::nullopt);
QSeries curly_fact(long long k);
QSeries qfact(long long k);

// exact quotient a/[m]; throws `what` when [m] does not divide a
QSeries divide_by_qint(const QSeries& a, long long m, const char* what = "inexact division by q-integer");

// Closed-form lower degrees in q (not v); nullopt when the quantity vanishes.
std::optional<Rat> qbinom_delta(long long n, long long k);
std::optional<Rat> curly_poch_delta(long long n, long long k);

// (q^{a};q)_n; n = nullopt for the infinite product.
QSeries poch(Rat a_exp, std::optional<long long> n, OptRat prec = std::nullopt);
// (q;q)_n and its inverse; n = nullopt for n = infinity.
QSeries qpoch(std::optional<long long> n, OptRat prec = std::nullopt);
QSeries inv_qpoch(std::optional<long long> n, Rat prec);

int jacobi_symbol(long long a, long long n);

// x^u coefficients of the truncated theta function theta_i(x,q), |u| <= j
std::map<long long, QSeries> theta_trunc(long long i, long long j, Rat prec);

// coefficient of x^n in sum (-1)^n x^n q^{n(n-1)/2}: (sign, exponent)
std::pair<int, long long> jacobi_theta_coeff(long long n);

inline long long binom2(long long n) { return n * (n - 1) / 2; }

}  // namespace qh
