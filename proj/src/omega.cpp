#include "qhabiro/omega.hpp"

#include "qhabiro/parallel.hpp"

namespace qh {

std::optional<Rat> gamma_delta(long long m, long long n, long long i) {
    auto a = curly_poch_delta(m, i);
    auto b = curly_poch_delta(n, i);
    auto c = qbinom_delta(m + n + 1, i);
    if (!a || !b || !c) return std::nullopt;
    return *a + *b + *c;
}

QSeries gamma(long long m, long long n, long long i, OptRat prec) {
    auto d = gamma_delta(m, n, i);
    if (!d) return {};
    Rat da = *curly_poch_delta(m, i), db = *curly_poch_delta(n, i), dc = *qbinom_delta(m + n + 1, i);
    auto sub = [&](Rat other) -> OptRat {
        if (!prec) return std::nullopt;
        return *prec - other;
    };
    QSeries x = curly_poch(m, i, sub(db + dc));
    QSeries y = curly_poch(n, i, sub(da + dc));
    QSeries z = qbinom(m + n + 1, i, sub(da + db));
    return mul(mul(x, y, sub(dc)), z, prec);
}

QSeries coeff_at(const CoeffSeq& a, long long l, OptRat prec) {
    if (l > 0) throw Error("positive sigma indices are not supported");
    if (l == 0) return a.sigma0().truncate_opt(prec);
    return a.at(-l - 1, prec);
}

std::optional<Rat> floor_at(const CoeffSeq& a, long long l) {
    if (l == 0) {
        QSeries s = a.sigma0();
        if (s.is_zero()) return std::nullopt;
        return *s.low();
    }
    return a.floor(-l - 1);
}

namespace {

bool index_exists(const CoeffSeq& a, long long l) {
    if (l == 0) return !a.sigma0().is_exact_zero();
    return !a.max_index() || -l - 1 <= *a.max_index();
}

}  // namespace

QSeries omega_coeff(const CoeffSeq& a, const CoeffSeq& b, long long l, OptRat prec) {
    if (l > 0) throw Error("positive sigma indices are not supported");
    QSeries sum;
    if (prec) sum = QSeries::zero_to(*prec);
    for (long long m = l; m <= 0; ++m) {
        if (!index_exists(a, m)) continue;
        auto fa = floor_at(a, m);
        for (long long n = l - m; n <= 0; ++n) {
            if (!index_exists(b, n)) continue;
            long long i = m + n - l;
            auto gd = gamma_delta(m, n, i);
            if (!gd) continue;
            auto fb = floor_at(b, n);
            if (prec && fa && fb && *gd + *fa + *fb >= *prec) continue;
            OptRat pa, pb, pg;
            if (prec && fb) pa = *prec - *gd - *fb;
            QSeries am = coeff_at(a, m, pa);
            if (am.is_exact_zero()) continue;
            if (prec) pb = *prec - *gd - *am.low();
            QSeries bn = coeff_at(b, n, pb);
            if (bn.is_exact_zero()) continue;
            if (prec) pg = *prec - *am.low() - *bn.low();
            QSeries g = gamma(m, n, i, pg);
            OptRat pab;
            if (prec) pab = *prec - *g.low();
            sum += mul(g, mul(am, bn, pab), prec);
        }
    }
    return sum;
}

CoeffSeq omega_product_seq(const CoeffSeq& a, const CoeffSeq& b) {
    // products of finitely many sigmas still have infinitely many terms
    CoeffSeq c(Side::P, [a, b](long long k, OptRat prec) { return omega_coeff(a, b, -k - 1, prec); });
    c.set_sigma0(a.sigma0() * b.sigma0());
    if (a.lbc_constant() && b.lbc_constant()) {
        // sigma_0 times the other family shifts its constant by deg sigma_0
        long long ca = *a.lbc_constant(), cb = *b.lbc_constant();
        long long cc = ca + cb;
        auto low = [](const QSeries& s) {
            Rat d = *s.low();
            long long f = d.numerator() / d.denominator();
            return Rat(f) > d ? f - 1 : f;
        };
        if (!b.sigma0().is_zero()) cc = std::min(cc, ca + low(b.sigma0()));
        if (!a.sigma0().is_zero()) cc = std::min(cc, cb + low(a.sigma0()));
        c.set_lbc_constant(cc);
    }
    return c;
}

OmegaProduct omega_mul(const OmegaElement& a, const OmegaElement& b, long long depth, OptRat prec, bool force,
                       int jobs) {
    if (!force) {
        bool ok_a = a.lbc && a.lbc->best_constant;
        bool ok_b = b.lbc && b.lbc->best_constant;
        if (!ok_a && a.a.sigma0().is_zero()) throw Error("LBC required");
        if (!ok_b && b.a.sigma0().is_zero()) throw Error("LBC required");
    }
    OmegaProduct out;
    out.depth = depth;
    out.prec = prec;
    out.seq = omega_product_seq(a.a, b.a);
    std::vector<QSeries> vals(depth + 1);
    parallel_for(depth + 1, jobs, [&](long long t) {
        long long l = -t;
        vals[t] = l == 0 ? out.seq.sigma0().truncate_opt(prec) : out.seq.at(-l - 1, prec);
    });
    for (long long t = 0; t <= depth; ++t) out.c[-t] = vals[t];
    return out;
}

bool lbc_product_bound(const OmegaProduct& p, long long c) {
    for (const auto& [l, v] : p.c) {
        Rat bound = Rat(-l * (l + 3), 2) + Rat(c);
        if (!v.delta().at_least(bound)) return false;
    }
    return true;
}

XSeries sigma_x(long long n, long long j_max) {
    XSeries out;
    if (n >= 0) {
        out[0] = QSeries::one();
        for (long long i = 1; i <= n; ++i) {
            XSeries f;
            f[1] = QSeries::one();
            f[-1] = QSeries::one();
            f[0] = -(QSeries::monomial(1, i) + QSeries::monomial(1, -i));
            out = xmul(out, f, j_max + n);
        }
        for (auto it = out.begin(); it != out.end();)
            it = it->first > j_max ? out.erase(it) : std::next(it);
        return out;
    }
    long long k = -n - 1;
    QSeries run;
    for (long long t = 0; k + 1 + t <= j_max; ++t) {
        run += qbinom(2 * k + t, t);
        out[k + 1 + t] = run;
    }
    return out;
}

XSeries xmul(const XSeries& a, const XSeries& b, long long j_max) {
    XSeries out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            if (ea + eb > j_max) continue;
            out[ea + eb] += ca * cb;
        }
    return out;
}

XSeries x_expansion(const CoeffSeq& a, long long j_max) {
    XSeries out;
    if (!a.sigma0().is_zero()) out[0] = a.sigma0();
    for (long long k = 0; k + 1 <= j_max; ++k) {
        if (a.max_index() && k > *a.max_index()) break;
        QSeries ak = a.at(k);
        if (ak.is_exact_zero()) continue;
        for (const auto& [e, c] : sigma_x(-k - 1, j_max)) out[e] += c * ak;
    }
    return out;
}

bool x_agree(const XSeries& a, const XSeries& b, long long j_max, Rat prec) {
    std::map<long long, bool> keys;
    for (const auto& kv : a) keys[kv.first] = true;
    for (const auto& kv : b) keys[kv.first] = true;
    for (const auto& kv : keys) {
        long long e = kv.first;
        if (e > j_max) continue;
        auto ia = a.find(e);
        auto ib = b.find(e);
        QSeries va = ia == a.end() ? QSeries() : ia->second;
        QSeries vb = ib == b.end() ? QSeries() : ib->second;
        if (!agree_to(va, vb, prec)) return false;
    }
    return true;
}

bool verify_sigma_product(long long m, long long n, long long j_max, Rat prec) {
    XSeries lhs = xmul(sigma_x(m, j_max + std::max(0LL, n)), sigma_x(n, j_max + std::max(0LL, m)), j_max);
    XSeries rhs;
    for (long long i = 0;; ++i) {
        long long idx = m + n - i;
        if (idx < 0 && -idx > j_max) break;
        if (i > 4 * (std::abs(m) + std::abs(n)) + 4 * j_max + 8) break;
        QSeries g = gamma(m, n, i);
        if (g.is_zero()) continue;
        for (const auto& [e, c] : sigma_x(idx, j_max)) rhs[e] += g * c;
    }
    return x_agree(lhs, rhs, j_max, prec);
}

}  // namespace qh
