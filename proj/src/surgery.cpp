#include "qhabiro/surgery.hpp"

#include <map>

namespace qh {

namespace {

constexpr int kTrendWindow = 6;

int sgn_pow(long long e) { return (e % 2 == 0) ? 1 : -1; }

long long mod(long long x, long long m) {
    m = std::abs(m);
    long long r = x % m;
    return r < 0 ? r + m : r;
}

void check_params(long long p, long long a) {
    if (p == 0) throw Error("surgery coefficient must be nonzero");
    if (a < 0 || a >= std::abs(p)) throw Error("spin-c label must satisfy 0 <= a < |p|");
}

// Watches per-term degree bounds. Converged once the last few terms all sit at
// or above the target; diverged when they keep dropping below it.
class Trend {
public:
    enum class State { Running, Converged, Diverged };

    State push(Rat b, Rat target) {
        v_.push_back(b);
        size_t n = v_.size();
        if (n >= kTrendWindow) {
            bool high = true;
            for (size_t i = n - kTrendWindow; i < n; ++i) high = high && v_[i] >= target;
            if (high) return State::Converged;
        }
        if (n > kTrendWindow) {
            bool falling = v_.back() < target;
            for (size_t i = n - kTrendWindow; i < n; ++i) falling = falling && v_[i] < v_[i - 1];
            if (falling) return State::Diverged;
        }
        return State::Running;
    }

private:
    std::vector<Rat> v_;
};

[[noreturn]] void divergent(const char* route, long long p, long long a) {
    throw Error(std::string("divergent or undecidable for these parameters (") + route +
                ", p=" + std::to_string(p) + ", a=" + std::to_string(a) + ")");
}

long long term_cap(Rat P) { return 64 + 4 * std::max<long long>(0, qh::ceil(P)); }

ZhatResult finish(const QSeries& s, Rat n, bool halve, long long terms) {
    ZhatResult z;
    z.terms = terms;
    z.delta = *s.low();
    QSeries t = s.truncate(z.delta + n).shift(-z.delta);
    if (t.scale() != 1) throw Error("surgery series mixes fractional exponent classes");
    if (halve) {
        bool even = true;
        for (const auto& c : t.coeffs()) even = even && mpz_even_p(c.get_mpz_t());
        if (even) {
            std::vector<mpz_class> h;
            for (const auto& c : t.coeffs()) h.push_back(c / 2);
            t = QSeries::from_units(t.scale(), t.offset(), std::move(h), t.prec_units());
        } else {
            z.pow2 = 1;
        }
    }
    if (!t.is_zero() && t.leading_coeff() < 0) {
        t = -t;
        z.sign_flipped = true;
    }
    z.series = t;
    return z;
}

struct Raw {
    QSeries s;
    long long terms = 0;
};

template <class F>
ZhatResult drive(F raw, Rat n, bool halve) {
    Rat P = n;
    for (int it = 0; it < 8; ++it) {
        Raw r = raw(P);
        if (!r.s.is_zero()) {
            Rat d = *r.s.low();
            if (P >= d + n) return finish(r.s, n, halve, r.terms);
            P = d + n;
            continue;
        }
        P += n;
    }
    throw Error("surgery series vanishes to every computed precision");
}

// zero past the end of finite data
QSeries coef(const CoeffSeq& s, long long k, Rat prec) {
    if (k < 0 || (s.max_index() && k > *s.max_index())) return {};
    return s.at(k, prec);
}

// Twice the contribution of the constant sigma_0, which only reaches x^0 and x^{+-1}.
// Odd when a single one of +-1 lands in the class of a.
QSeries sigma0_term2(const CoeffSeq& s, long long p, long long a, Rat prec) {
    if (s.sigma0().is_zero()) return QSeries::zero_to(prec);
    int w = 0;
    std::optional<Rat> e;
    for (long long u : {1LL, -1LL}) {
        auto x = laplace_monomial(u, 0, p, a);
        if (x) {
            ++w;
            e = x;
        }
    }
    QSeries t = a == 0 ? QSeries::constant(-2) : QSeries();
    if (w) t += QSeries::monomial(w, *e);
    return mul(s.sigma0(), t, prec);
}

Rat floor_or_lbc(const CoeffSeq& a, long long k) {
    auto f = a.floor(k);
    if (f) return *f;
    if (!a.lbc_constant()) throw Error("LBC required for the inverted Habiro route");
    return lbc_profile(k) + Rat(*a.lbc_constant());
}

}  // namespace

std::string ZhatResult::sign_convention() const {
    std::string s = "equality up to sign and q-power; q^" + rat_str(delta) + " factored out";
    if (sign_flipped) s += ", sign flipped";
    if (pow2) s += ", series holds 2*Zhat";
    return s;
}

std::optional<Rat> laplace_monomial(long long u, Rat w, long long p, long long a) {
    if (p == 0) throw Error("surgery coefficient must be nonzero");
    if (mod(u - a, p) != 0) return std::nullopt;
    return Rat(-u * u, p) + w;
}

QSeries surgery_poly(long long p, long long a, long long j, bool literal) {
    QSeries sum;
    long long lo = (p > 0 || literal) ? 0 : 1;
    for (long long n = lo; n < lo + j; ++n) {
        long long mu = n * p + a;
        sum += QSeries::monomial(1, Rat(j * mu) - Rat(mu * mu, p));
    }
    return sum * (QSeries::one() - QSeries::monomial(1, -j));
}

ZhatResult zhat_via_fk(const CoeffSeq& f, const SurgeryParams& sp) {
    check_params(sp.p, sp.a);
    long long p = sp.p, a = sp.a;
    auto raw = [&](Rat P) {
        Raw out;
        out.s = QSeries::zero_to(P);
        Trend trend;
        for (long long k = 0;; ++k) {
            if (k > term_cap(P)) divergent("fk", p, a);
            int w = 0;
            std::optional<Rat> e;
            for (long long u : {k, -k}) {
                auto x = laplace_monomial(u, 0, p, a);
                if (x) {
                    ++w;
                    e = x;
                }
            }
            if (!w) continue;
            Rat need = P - *e;
            QSeries d = coef(f, k - 1, need) - coef(f, k, need);
            if (!d.is_exact_zero()) out.s += d.truncate(need).shift(*e).scaled(w);
            ++out.terms;
            Rat b = d.is_exact_zero() ? P : std::min(P, *d.low() + *e);
            auto st = trend.push(b, P);
            if (st == Trend::State::Converged) break;
            if (st == Trend::State::Diverged) divergent("fk", p, a);
        }
        return out;
    };
    return drive(raw, sp.prec, true);
}

ZhatResult zhat_via_residues(const CoeffSeq& a_seq, const SurgeryParams& sp) {
    check_params(sp.p, sp.a);
    long long p = sp.p, a = sp.a;
    int sg = p > 0 ? 1 : -1;
    auto raw = [&](Rat P) {
        Raw out;
        out.s = a == 0 ? -coef(a_seq, 0, P) : QSeries::zero_to(P);
        Trend trend;
        for (long long j = 1;; ++j) {
            if (j > term_cap(P)) divergent("residues", p, a);
            QSeries L = surgery_poly(p, a, j);
            Rat m = *L.low();
            Rat b = res_floor(a_seq, j) + m;
            if (b < P) {
                QSeries rj = residue_j(a_seq, j, P - m);
                out.s += mul(rj, L, P).scaled(sg);
                ++out.terms;
            }
            auto st = trend.push(std::min(b, P), P);
            if (st == Trend::State::Converged) break;
            if (st == Trend::State::Diverged) divergent("residues", p, a);
        }
        out.s = out.s.scaled(2) + sigma0_term2(a_seq, p, a, P);
        return out;
    };
    return drive(raw, sp.prec, true);
}

namespace {

// Sum over k of a_k * sum_{j=1..k} atom(k,j) * L_j, stopping on the trend or at k_max.
Raw ih_sum(const CoeffSeq& a_seq, long long p, long long a, Rat P, std::optional<long long> k_max) {
    int sg = p > 0 ? 1 : -1;
    Raw out;
    out.s = QSeries::zero_to(P);
    std::vector<QSeries> L(1);
    std::vector<Rat> m(1);
    std::optional<Rat> min_j;
    Trend trend;
    for (long long k = 1;; ++k) {
        if (k_max && k > *k_max) break;
        if (!k_max && k > term_cap(P)) divergent("ih", p, a);
        if (a_seq.max_index() && k > *a_seq.max_index()) break;
        L.push_back(surgery_poly(p, a, k));
        m.push_back(*L.back().low());
        Rat cand = Rat(binom2(k + 1)) + m.back();
        if (!min_j || cand < *min_j) min_j = cand;
        Rat shift = Rat(binom2(k + 1)) + *min_j;
        Rat b = floor_or_lbc(a_seq, k) + shift;
        if (b < P) {
            QSeries ak = a_seq.at(k, P - shift);
            if (!ak.is_zero()) {
                Rat rel = P - *ak.low();
                QSeries inner = QSeries::zero_to(rel);
                for (long long j = 1; j <= k; ++j) inner += mul(residue_sigma(k, j).to_series(rel - m[j]), L[j], rel);
                out.s += mul(ak, inner, P).scaled(sg);
            }
            ++out.terms;
        }
        if (!k_max) {
            auto st = trend.push(std::min(b, P), P);
            if (st == Trend::State::Converged) break;
            if (st == Trend::State::Diverged) divergent("ih", p, a);
        }
    }
    return out;
}

}  // namespace

QSeries ih_partial_sum(const CoeffSeq& a_seq, long long p, long long a, long long k_max, Rat prec) {
    check_params(p, a);
    if (k_max <= 0) return QSeries();
    return ih_sum(a_seq, p, a, prec, k_max).s;
}

ZhatResult zhat_via_ih(const CoeffSeq& a_seq, const SurgeryParams& sp) {
    check_params(sp.p, sp.a);
    if (!a_seq.lbc_constant()) throw Error("LBC required for the inverted Habiro route");
    long long p = sp.p, a = sp.a;
    auto raw = [&](Rat P) {
        Raw out = ih_sum(a_seq, p, a, P, std::nullopt);
        if (a == 0) out.s -= coef(a_seq, 0, P);
        out.s = out.s.scaled(2) + sigma0_term2(a_seq, p, a, P);
        return out;
    };
    return drive(raw, sp.prec, true);
}

ZhatResult zhat(const CoeffSeq& a, const CoeffSeq& f, const SurgeryParams& sp) {
    switch (sp.method) {
        case SurgeryMethod::FK: return zhat_via_fk(f, sp);
        case SurgeryMethod::Residues: return zhat_via_residues(a, sp);
        case SurgeryMethod::IH: return zhat_via_ih(a, sp);
    }
    throw Error("unknown surgery method");
}

bool zhat_agree(const ZhatResult& x, const ZhatResult& y, Rat prec) {
    return x.pow2 == y.pow2 && agree_to(x.series, y.series, prec);
}

QSeries park_poly_explicit(long long p, long long a, long long k) {
    if (p <= 0) throw Error("Park polynomials need p > 0");
    check_params(p, a);
    if (k < 0) throw Error("Park polynomials need k >= 0");
    if (k == 0) return {};
    QSeries sum;
    for (long long j = 1; j <= k; ++j) {
        QSeries inner;
        for (long long n = 0; n < j; ++n) {
            long long mu = n * p + a;
            inner += QSeries::monomial(1, Rat(mu * mu, p) - Rat(j * mu));
        }
        QSeries t = (QSeries::one() - QSeries::monomial(1, -j)) * gaussian(2 * k, k + j) * inner;
        sum += t.shift(Rat(binom2(j + 1) - binom2(k))).scaled(sgn_pow(k + j));
    }
    QSeries x = -sum.shift(Rat(a * (p - a), p));
    if (x.scale() != 1) throw Error("fractional exponent did not cancel");
    return divide_exact(x, qpoch(k), "Park polynomial is not a Laurent polynomial");
}

QSeries park_poly_residue(long long p, long long a, long long k) {
    if (p <= 0) throw Error("Park polynomials need p > 0");
    check_params(p, a);
    if (k < 0) throw Error("Park polynomials need k >= 0");
    if (k == 0) return {};
    // (q^j - q^{-j}) prod_{i != j} (q^j + q^{-j} - q^i - q^{-i}) = sign q^e prod_m (1 - q^m)
    struct Den {
        int sign = 1;
        long long e = 0;
        std::map<long long, int> m;
    };
    std::vector<Den> dens(k + 1);
    std::map<long long, int> common;
    for (long long j = 1; j <= k; ++j) {
        Den& d = dens[j];
        d.sign = -1;
        d.e = -j;
        d.m[2 * j]++;
        for (long long i = 1; i <= k; ++i) {
            if (i == j) continue;
            if (i > j) {
                d.e += j;
                d.m[i - j]++;
            } else {
                d.sign = -d.sign;
                d.e += i;
                d.m[j - i]++;
            }
            d.sign = -d.sign;
            d.e -= i + j;
            d.m[i + j]++;
        }
        for (const auto& [m, c] : d.m) common[m] = std::max(common[m], c);
    }
    auto one_minus = [](long long m) { return QSeries::one() - QSeries::monomial(1, m); };
    QSeries num;
    for (long long j = 1; j <= k; ++j) {
        // theta_odd at q^j collapses to the window 0 < w <= jp, w = a mod p
        QSeries w;
        for (long long t = (a == 0 ? p : a); t <= j * p; t += p) w += QSeries::monomial(1, Rat(t * t, p) - Rat(j * t));
        QSeries t = w.shift(-dens[j].e).scaled(dens[j].sign);
        for (const auto& [m, c] : common) {
            int have = dens[j].m.count(m) ? dens[j].m.at(m) : 0;
            for (int r = have; r < c; ++r) t *= one_minus(m);
        }
        num += t;
    }
    QSeries pref = poch(k + 1, k);
    QSeries x = -(num * pref).shift(Rat(a * (p - a), p) - Rat(k * k));
    if (x.scale() != 1) throw Error("fractional exponent did not cancel");
    QSeries den = QSeries::one();
    for (const auto& [m, c] : common)
        for (int r = 0; r < c; ++r) den *= one_minus(m);
    return divide_exact(x, den, "Park residue is not a Laurent polynomial");
}

QSeries park_poly_residue_literal(long long p, long long a, long long k, Rat prec) {
    if (p <= 0) throw Error("Park polynomials need p > 0");
    check_params(p, a);
    Rat pref_e = Rat(-k * k) - Rat(a * (p - k), p);
    QSeries pref = poch(k + 1, k);
    Rat inner = prec - pref_e;
    // x^k prod_i 1/((1 - x q^i)(1 - x q^{-i})) = x^k sum_m h_m x^m
    // x^{-1} coefficient against theta: u = -1 - k - m, weight q^{u^2/p}
    std::vector<QSeries> h;
    QSeries out = QSeries::zero_to(inner);
    for (long long m = 0;; ++m) {
        Rat lo = Rat((k + 1 + m) * (k + 1 + m), p) - Rat(m * k);
        if (m > 2 * k * p && lo >= inner) break;
        // h_m built incrementally: product over the 2k geometric factors
        if (k == 0) {
            h.assign(1, m == 0 ? QSeries::one() : QSeries());
        } else {
            h.clear();
            std::vector<QSeries> cur(m + 1);
            cur[0] = QSeries::one();
            for (long long i = 1; i <= k; ++i)
                for (long long s : {i, -i})
                    for (long long t = 1; t <= m; ++t) cur[t] += cur[t - 1].shift(s);
            h = cur;
        }
        long long u = -1 - k - m;
        if (mod(u - a, p) != 0) continue;
        QSeries hm = h.size() > (size_t)m ? h[m] : QSeries();
        out += hm.shift(Rat(u * u, p)).truncate(inner);
    }
    return mul(out, pref, inner).shift(pref_e);
}

}  // namespace qh
