#pragma once

#include "qhabiro/transform.hpp"

#include <map>

namespace qh {

// An element of the ring of reduced inverted Habiro series: coefficients of
// sigma_l for l < 0 plus an optional sigma_0 term.
struct OmegaElement {
    CoeffSeq a;
    std::optional<LbcReport> lbc;
};

QSeries gamma(long long m, long long n, long long i, OptRat prec = std::nullopt);
std::optional<Rat> gamma_delta(long long m, long long n, long long i);

// coefficient of sigma_l (l <= 0) in a family, sigma_0 included
QSeries coeff_at(const CoeffSeq& a, long long l, OptRat prec);
std::optional<Rat> floor_at(const CoeffSeq& a, long long l);

// c_l of the product, l <= 0
QSeries omega_coeff(const CoeffSeq& a, const CoeffSeq& b, long long l, OptRat prec);

// lazy product family; its degree floor uses the sum of the two constants
CoeffSeq omega_product_seq(const CoeffSeq& a, const CoeffSeq& b);

struct OmegaProduct {
    std::map<long long, QSeries> c;  // l -> c_l for -depth <= l <= 0
    long long depth = 0;
    OptRat prec;
    CoeffSeq seq;
};

OmegaProduct omega_mul(const OmegaElement& a, const OmegaElement& b, long long depth, OptRat prec,
                       bool force = false, int jobs = 1);

// c_l obeys -l(l+3)/2 + c for every computed l
bool lbc_product_bound(const OmegaProduct& p, long long c);

// x-expansions around x = 0, keyed by x-power, powers above j_max dropped
using XSeries = std::map<long long, QSeries>;

XSeries sigma_x(long long n, long long j_max);
XSeries xmul(const XSeries& a, const XSeries& b, long long j_max);
XSeries x_expansion(const CoeffSeq& a, long long j_max);
bool x_agree(const XSeries& a, const XSeries& b, long long j_max, Rat prec);

bool verify_sigma_product(long long m, long long n, long long j_max, Rat prec);

}  // namespace qh
