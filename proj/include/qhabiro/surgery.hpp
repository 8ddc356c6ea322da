#pragma once

#include "qhabiro/residue.hpp"

#include <string>

namespace qh {

enum class SurgeryMethod { FK, Residues, IH };

struct SurgeryParams {
    long long p = -1;
    long long a = 0;
    Rat prec = 20;  // requested length of the normalized series
    SurgeryMethod method = SurgeryMethod::FK;
};

// Zhat up to sign and a rational power of q: value = sign * 2^{-pow2} * q^delta * series.
struct ZhatResult {
    Rat delta = 0;
    QSeries series;
    bool sign_flipped = false;
    int pow2 = 0;  // 1 when the literal half left odd coefficients behind
    long long terms = 0;
    std::string sign_convention() const;
};

// -u^2/p + w when u = a mod p
std::optional<Rat> laplace_monomial(long long u, Rat w, long long p, long long a);

// (1 - q^{-j}) sum_{mu} q^{j mu - mu^2/p}; mu = np + a with n = 0..j-1 for p > 0
// and n = 1..j for p < 0 (literal: n = 0..j-1 always)
QSeries surgery_poly(long long p, long long a, long long j, bool literal = false);

ZhatResult zhat_via_fk(const CoeffSeq& f, const SurgeryParams& sp);
ZhatResult zhat_via_residues(const CoeffSeq& a, const SurgeryParams& sp);
ZhatResult zhat_via_ih(const CoeffSeq& a, const SurgeryParams& sp);
ZhatResult zhat(const CoeffSeq& a, const CoeffSeq& f, const SurgeryParams& sp);

// sum over 1 <= k <= k_max of the inverted Habiro terms, no boundary term
QSeries ih_partial_sum(const CoeffSeq& a, long long p, long long a_label, long long k_max, Rat prec);

// both normalized results agree below prec (sign and power of two included)
bool zhat_agree(const ZhatResult& x, const ZhatResult& y, Rat prec);

QSeries park_poly_explicit(long long p, long long a, long long k);
// sum of the pole residues at x = q^{+-j}; exact Laurent polynomial
QSeries park_poly_residue(long long p, long long a, long long k);
// x^{-1} coefficient at x = 0 with the printed prefactor; a truncated series
QSeries park_poly_residue_literal(long long p, long long a, long long k, Rat prec);

}  // namespace qh
