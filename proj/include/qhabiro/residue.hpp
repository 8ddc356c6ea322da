#pragma once

#include "qhabiro/transform.hpp"

#include <map>

namespace qh {

// Residue of the normalized sigma with index -k-1 at x = q^j, kept symbolic:
// sign * q^exponent / ((q)_{d1} (q)_{d2}). The point at infinity is marked
// separately.
struct ResidueAtom {
    long long k = 0;
    long long j = 0;
    bool at_infinity = false;
    bool zero = false;
    int sign = 0;
    long long exponent = 0;
    long long d1 = 0, d2 = 0;

    QSeries to_series(Rat prec) const;
};

ResidueAtom residue_sigma(long long k, long long j);
ResidueAtom residue_sigma_infinity(long long k);

// certified lower bound on deg r_j for an LBC family
Rat res_floor(const CoeffSeq& a, long long j);

// r_j summed term by term, valid below prec
QSeries residue_j(const CoeffSeq& a, long long j, Rat prec);

struct ResidueFamily {
    long long window = 0;
    std::map<long long, QSeries> r;  // j in [-window, window]
    QSeries r_inf;
    Rat prec = 0;
    CoeffSeq source;

    // r_j to the given precision, recomputed when more is asked for
    QSeries at(long long j, Rat p) const;
};

ResidueFamily residue_family(const CoeffSeq& a, long long window, Rat prec, int jobs = 1);

// smallest window J with every |j| > J certified to vanish below prec
long long residue_window(const CoeffSeq& a, Rat prec);

// sum of all residues including infinity; zero when the residue theorem holds
QSeries residue_theorem_check(const CoeffSeq& a, Rat prec, int jobs = 1);

// f_k from the residues; throws "enlarge J" if the window is too small
QSeries f_from_residues(const ResidueFamily& rf, long long k, Rat prec);

// r_j from the f-coefficients through the theta identity
QSeries residues_from_f(const CoeffSeq& f, long long j, Rat prec);

enum class Trefoil { Left, Right };

// r_{j+1} recurrences for the trefoils on 0 <= j < window; for Right also
// the stabilization of (-1)^j q^{-binom(j+2,2)} r_j towards 1/(q)_inf^2
bool trefoil_recurrence_check(Trefoil kind, const CoeffSeq& a, long long window, Rat prec, std::string* why = nullptr);

// a_{-k-1} -> a_{-k-1} q^{km}
CoeffSeq descendant(const CoeffSeq& a, long long m);

enum class Branch { PlusHalf, MinusHalf };

// closed form of the branch residue at x = q^j
QSeries branch_residue_41(Branch b, long long j, Rat prec);
// same through the branch's coefficient family and the q^{-+j^2} prefactor
QSeries branch_residue_41_coeff(Branch b, long long j, Rat prec);
CoeffSeq branch_coefficients_41(Branch b);

enum class Parity { Even, Odd };

struct TailResult {
    QSeries normalized;
    QSeries target;
    long long agree_to = 0;  // first exponent where the two differ
};

// compares q^{-deg f_k} f_k, k = 2n or 2n+1, with its limiting theta quotient
TailResult tail_check(const CoeffSeq& f, Parity parity, long long n, Rat prec);
QSeries tail_target(Parity parity, Rat prec);

}  // namespace qh
