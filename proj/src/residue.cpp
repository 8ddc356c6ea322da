#include "qhabiro/residue.hpp"

#include "qhabiro/parallel.hpp"

#include <cmath>

namespace qh {

namespace {

long long lbc_of(const CoeffSeq& a) {
    if (!a.lbc_constant()) throw Error("residues need the lower bound condition; run lbc_check first");
    return *a.lbc_constant();
}

// 1/((q)_m (q)_n) below prec
QSeries inv_pair(long long m, long long n, Rat prec) {
    if (prec <= 0) return QSeries::zero_to(prec);
    return mul(inv_qpoch(m, prec), inv_qpoch(n, prec), prec);
}

Rat floor_or_lbc(const CoeffSeq& a, long long k, long long c) {
    auto f = a.floor(k);
    return f ? *f : lbc_profile(k) + Rat(c);
}

int sgn_pow(long long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

QSeries ResidueAtom::to_series(Rat prec) const {
    if (zero) return QSeries::zero_to(prec);
    if (at_infinity) return QSeries::constant(sign).truncate(prec);
    QSeries inv = inv_pair(d1, d2, prec - exponent);
    return inv.scaled(sign).shift(exponent);
}

ResidueAtom residue_sigma(long long k, long long j) {
    ResidueAtom r;
    r.k = k;
    r.j = j;
    if (k < 0) throw Error("residue_sigma needs k >= 0");
    if (std::abs(j) > k) {
        r.zero = true;
        return r;
    }
    r.sign = -sgn_pow(k + j);
    r.exponent = binom2(j + 1) + binom2(k + 1);
    r.d1 = k - j;
    r.d2 = k + j;
    return r;
}

ResidueAtom residue_sigma_infinity(long long k) {
    ResidueAtom r;
    r.k = k;
    r.at_infinity = true;
    if (k != 0) {
        r.zero = true;
        return r;
    }
    r.sign = 1;
    return r;
}

Rat res_floor(const CoeffSeq& a, long long j) {
    long long c = lbc_of(a);
    long long aj = std::abs(j);
    std::optional<Rat> best;
    // beyond the LBC line k + 1 + c nothing can go lower
    for (long long k = aj; !best || Rat(k + 1 + c) < *best; ++k) {
        if (a.max_index() && k > *a.max_index()) break;
        Rat v = floor_or_lbc(a, k, c) + Rat(binom2(k + 1));
        if (!best || v < *best) best = v;
    }
    // no coefficients at all: the residue vanishes identically
    if (!best) return Rat(1000000000);
    return *best + Rat(binom2(j + 1));
}

QSeries residue_j(const CoeffSeq& a, long long j, Rat prec) {
    long long c = lbc_of(a);
    long long aj = std::abs(j);
    Rat sj = binom2(j + 1);
    TermGen term = [&](long long k, Rat p) -> QSeries {
        if (a.max_index() && k > *a.max_index()) return {};
        Rat e = sj + Rat(binom2(k + 1));
        auto fl = a.floor(k);
        if (fl && *fl + e >= p) return QSeries::zero_to(p);
        QSeries ak = a.at(k, p - e);
        if (ak.is_exact_zero()) return {};
        if (ak.is_zero()) return QSeries::zero_to(p);
        QSeries t = mul(ak, inv_pair(k + j, k - j, p - e - *ak.low()), p - e);
        return t.scaled(-sgn_pow(k + j)).shift(e);
    };
    DegreeBound b{[c, sj](long long k) { return Rat(k + 1 + c) + sj; }, aj};
    return sum_bounded(term, b, prec, aj);
}

QSeries ResidueFamily::at(long long j, Rat p) const {
    auto it = r.find(j);
    if (it != r.end() && p <= prec) return it->second.truncate(p);
    return residue_j(source, j, p);
}

long long residue_window(const CoeffSeq& a, Rat prec) {
    long long w = 0;
    while (res_floor(a, w + 1) < prec || res_floor(a, -(w + 1)) < prec) ++w;
    return w;
}

ResidueFamily residue_family(const CoeffSeq& a, long long window, Rat prec, int jobs) {
    lbc_of(a);
    ResidueFamily rf;
    rf.window = window;
    rf.prec = prec;
    rf.source = a;
    std::vector<QSeries> vals(2 * window + 1);
    parallel_for(2 * window + 1, jobs, [&](long long t) { vals[t] = residue_j(a, t - window, prec); });
    for (long long t = 0; t <= 2 * window; ++t) rf.r[t - window] = vals[t];
    rf.r_inf = a.at(0, prec);
    return rf;
}

QSeries residue_theorem_check(const CoeffSeq& a, Rat prec, int jobs) {
    long long w = residue_window(a, prec);
    ResidueFamily rf = residue_family(a, w, prec, jobs);
    QSeries defect = rf.r_inf;
    for (const auto& kv : rf.r) defect += kv.second;
    return defect.truncate(prec);
}

QSeries f_from_residues(const ResidueFamily& rf, long long k, Rat prec) {
    long long c = lbc_of(rf.source);
    QSeries out = -rf.at(0, prec);
    for (long long j = 1;; ++j) {
        Rat lbc_line = Rat(binom2(j + 1) + j + 1 + c - j * (k + 1));
        if (j >= k && lbc_line >= prec) break;
        if (res_floor(rf.source, j) - Rat(j * (k + 1)) >= prec) continue;
        if (j > rf.window) throw Error("residue window too small for f_" + std::to_string(k) + ": enlarge J");
        QSeries rj = rf.at(j, prec + Rat(j * (k + 1)));
        out -= rj.shift(Rat(-j * (k + 1))) + rj.shift(Rat(j * k));
    }
    return out.truncate(prec);
}

QSeries residues_from_f(const CoeffSeq& f, long long j, Rat prec) {
    if (f.side() != Side::F) throw Error("residues_from_f expects GM coefficients");
    if (!f.floor(0)) throw Error("theta route requires LBC-grade input");
    long long aj = std::abs(j);
    Rat sj = binom2(j + 1);
    Rat inner = prec - sj;
    // lowest exponent of the theta factor 1 + sum_n (-1)^n q^{binom(n+1,2)+nk}(q^{nj}+q^{-nj})
    auto tmin = [aj](long long k) {
        long long best = 0;
        for (long long n = 1; n <= std::max(0LL, aj - k) + 1; ++n)
            best = std::min(best, binom2(n + 1) + n * (k - aj));
        return best;
    };
    TermGen term = [&](long long k, Rat p) -> QSeries {
        if (f.max_index() && k > *f.max_index())
            throw Error("theta route requires LBC-grade input (coefficient data ends)");
        long long e = binom2(k + 1);
        long long t = tmin(k);
        auto fl = f.floor(k);
        if (fl && *fl + e + t >= p) return QSeries::zero_to(p);
        QSeries fk = f.at(k, p - e - t);
        if (fk.is_exact_zero()) return {};
        if (fk.is_zero()) return QSeries::zero_to(p);
        Rat lim = p - e - *fk.low();
        QSeries theta = QSeries::one();
        for (long long n = 1;; ++n) {
            long long lo = binom2(n + 1) + n * (k - aj);
            if (n > aj - k && Rat(lo) >= lim) break;
            long long base = binom2(n + 1) + n * k;
            int s = sgn_pow(n);
            theta += QSeries::monomial(s, base + n * j) + QSeries::monomial(s, base - n * j);
        }
        return mul(fk, theta.truncate(lim), p - e).scaled(sgn_pow(k + j)).shift(e);
    };
    DegreeBound b{[&](long long k) { return *f.floor(k) + Rat(binom2(k + 1) + tmin(k)); }, 0};
    QSeries sum;
    try {
        sum = sum_bounded(term, b, inner, 0);
    } catch (const Error& e) {
        if (std::string(e.what()).find("degree bound") != std::string::npos)
            throw Error(std::string("theta route requires LBC-grade input: ") + e.what());
        throw;
    }
    if (sum.is_exact_zero()) return QSeries::zero_to(prec);
    Rat rel = inner - *sum.low();
    QSeries inv = inv_qpoch(std::nullopt, rel);
    QSeries inv3 = mul(mul(inv, inv, rel), inv, rel);
    return (-mul(sum, inv3, inner)).shift(sj);
}

bool trefoil_recurrence_check(Trefoil kind, const CoeffSeq& a, long long window, Rat prec, std::string* why) {
    if (window <= 0) return true;
    Rat big = std::max(prec + Rat(3 * window + 3), Rat(binom2(window + 2) + 2 * window + 2));
    std::vector<QSeries> r(window + 1);
    for (long long j = 0; j <= window; ++j) r[j] = residue_j(a, j, big);
    QSeries inv2;
    if (kind == Trefoil::Right) {
        QSeries inv = inv_qpoch(std::nullopt, big);
        inv2 = mul(inv, inv, big);
    }
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (long long j = 0; j + 1 <= window; ++j) {
        QSeries rhs;
        if (kind == Trefoil::Left) {
            rhs = -r[j].shift(3 * j + 2);
        } else {
            QSeries inh = (QSeries::monomial(1, -2 * j) - QSeries::monomial(1, 1)).shift(binom2(j + 1));
            rhs = -r[j].shift(-3 * j - 1) + mul(inh, inv2, big - 3 * j - 1).scaled(sgn_pow(j));
        }
        if (!agree_to(r[j + 1], rhs, prec)) return fail("recurrence fails at j=" + std::to_string(j));
    }
    if (kind == Trefoil::Right) {
        for (long long j = 0; j <= window; ++j) {
            QSeries s = r[j].shift(-binom2(j + 2)).scaled(sgn_pow(j));
            Rat depth = std::min(Rat(2 * j + 1), prec);
            if (!agree_to(s, inv2, depth)) return fail("no stabilization at j=" + std::to_string(j));
        }
    }
    return true;
}

CoeffSeq descendant(const CoeffSeq& a, long long m) {
    CoeffSeq d(Side::P,
               [a, m](long long k, OptRat prec) {
                   OptRat p;
                   if (prec) p = *prec - Rat(k * m);
                   return a.at(k, p).shift(Rat(k * m));
               },
               a.max_index());
    d.set_sigma0(a.sigma0());
    if (a.floor(0)) d.set_floor([a, m](long long k) { return *a.floor(k) + Rat(k * m); });
    // a negative shift pushes degrees below any LBC line
    if (m >= 0) d.set_lbc_constant(a.lbc_constant());
    return d;
}

CoeffSeq branch_coefficients_41(Branch b) {
    CoeffSeq c;
    if (b == Branch::PlusHalf) {
        c = CoeffSeq(Side::P, [](long long k, OptRat prec) {
            if (!prec) throw Error("branch coefficients are infinite series; give a precision");
            return inv_qpoch(k, *prec - Rat(k * k)).shift(Rat(k * k));
        });
        c.set_floor([](long long k) { return Rat(k * k); });
    } else {
        c = CoeffSeq(Side::P, [](long long k, OptRat prec) {
            if (!prec) throw Error("branch coefficients are infinite series; give a precision");
            return inv_qpoch(k, *prec + Rat(binom2(k))).shift(Rat(-binom2(k))).scaled(sgn_pow(k));
        });
        c.set_floor([](long long k) { return Rat(-binom2(k)); });
    }
    c.set_lbc_constant(-1);
    return c;
}

QSeries branch_residue_41_coeff(Branch b, long long j, Rat prec) {
    CoeffSeq c = branch_coefficients_41(b);
    Rat s = b == Branch::PlusHalf ? Rat(-j * j) : Rat(j * j);
    return residue_j(c, j, prec - s).shift(s);
}

QSeries branch_residue_41(Branch b, long long j, Rat prec) {
    long long aj = std::abs(j);
    auto expo = [b, j](long long k) -> long long {
        if (b == Branch::PlusHalf) return (3 * k * k + k - j * j + j) / 2;
        return k + j * (3 * j + 1) / 2;
    };
    TermGen term = [&](long long k, Rat p) -> QSeries {
        long long e = expo(k);
        Rat rel = p - Rat(e);
        if (rel <= 0) return QSeries::zero_to(p);
        QSeries inv = mul(inv_pair(k + j, k - j, rel), inv_qpoch(k, rel), rel);
        int s = b == Branch::PlusHalf ? -sgn_pow(k + j) : -sgn_pow(j);
        return inv.scaled(s).shift(Rat(e));
    };
    DegreeBound bd{[&](long long k) { return Rat(expo(k)); }, aj};
    return sum_bounded(term, bd, prec, aj);
}

QSeries tail_target(Parity parity, Rat prec) {
    long long lin = parity == Parity::Even ? 0 : 1;
    long long m_max = (long long)std::sqrt((double)qh::ceil(prec)) + 2;
    QSeries theta;
    for (long long m = -m_max - 1; m <= m_max; ++m) theta += QSeries::monomial(1, m * m + lin * m);
    return mul(theta.truncate(prec), inv_qpoch(std::nullopt, prec), prec);
}

TailResult tail_check(const CoeffSeq& f, Parity parity, long long n, Rat prec) {
    long long k = parity == Parity::Even ? 2 * n : 2 * n + 1;
    QSeries fk = f.at(k);
    TailResult out;
    if (fk.is_zero()) throw Error("tail of a vanishing coefficient");
    out.normalized = fk.shift(-*fk.low());
    out.target = tail_target(parity, prec);
    long long e = 0;
    while (Rat(e) < prec && out.normalized.coeff(e) == out.target.coeff(e)) ++e;
    out.agree_to = e;
    return out;
}

}  // namespace qh
