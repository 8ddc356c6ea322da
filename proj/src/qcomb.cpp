#include "qhabiro/qcomb.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <shared_mutex>

namespace qh {

namespace {

QSeries from_int_array(std::vector<mpz_class> p, OptRat prec) {
    QSeries r = QSeries::from_units(1, 0, std::move(p), std::nullopt);
    return r.truncate_opt(prec);
}

long long length_below(Rat prec) { return std::max<long long>(0, ceil(prec)); }


// exact Gaussian binomials are reused heavily by the transforms
struct GaussCache {
    std::shared_mutex mu;
    std::map<std::pair<long long, long long>, QSeries> table;
};

GaussCache& gauss_cache() {
    static GaussCache c;
    return c;
}

QSeries gaussian_raw(long long n, long long k, OptRat prec);

}  // namespace

QSeries gaussian(long long n, long long k, OptRat prec) {
    if (k < 0 || k > n) return {};
    k = std::min(k, n - k);
    if (prec || n > 256) return gaussian_raw(n, k, prec);
    auto& c = gauss_cache();
    {
        std::shared_lock lk(c.mu);
        auto it = c.table.find({n, k});
        if (it != c.table.end()) return it->second;
    }
    QSeries r = gaussian_raw(n, k, prec);
    std::unique_lock lk(c.mu);
    c.table.emplace(std::make_pair(n, k), r);
    return r;
}

namespace {

QSeries gaussian_raw(long long n, long long k, OptRat prec) {
    long long len = k * n + 1;
    if (prec) {
        long long lp = length_below(*prec);
        if (lp == 0) return QSeries::zero_to(*prec);
        len = std::min(len, lp);
    }
    std::vector<mpz_class> p(len);
    p[0] = 1;
    for (long long j = 0; j < k; ++j) {
        long long m = n - j;
        for (long long e = len - 1; e >= m; --e)
            if (p[e - m] != 0) p[e] -= p[e - m];
        long long d = j + 1;
        for (long long e = d; e < len; ++e)
            if (p[e - d] != 0) p[e] += p[e - d];
    }
    QSeries r = QSeries::from_units(1, 0, std::move(p), std::nullopt);
    if (prec) r = r.truncate(*prec);
    return r;
}

}  // namespace

QSeries qbinom(long long n, long long k, OptRat prec) {
    if (k < 0) return {};
    if (n >= 0) {
        if (k > n) return {};
        Rat sh(-k * (n - k), 2);
        OptRat gp;
        if (prec) gp = *prec - sh;
        return gaussian(n, k, gp).shift(sh);
    }
    QSeries r = qbinom(-n + k - 1, k, prec);
    return (k % 2) ? -r : r;
}

std::optional<Rat> qbinom_delta(long long n, long long k) {
    if (k < 0) return std::nullopt;
    if (n >= 0) {
        if (k > n) return std::nullopt;
        return Rat(-k * (n - k), 2);
    }
    return Rat(k * (n + 1), 2);
}

QSeries qint(long long n) { return qbinom(n, 1); }

QSeries curly(long long n) {
    if (n == 0) return {};
    return QSeries::monomial(1, Rat(n, 2)) - QSeries::monomial(1, Rat(-n, 2));
}

std::optional<Rat> curly_poch_delta(long long n, long long k) {
    if (k < 0) return std::nullopt;
    if (k > 0 && n - k + 1 <= 0 && n >= 0) return std::nullopt;
    Rat d = 0;
    for (long long t = 0; t < k; ++t) d -= Rat(std::llabs(n - t), 2);
    return d;
}

QSeries curly_poch(long long n, long long k, OptRat prec) {
    auto d = curly_poch_delta(n, k);
    if (!d) return {};
    Rat rem = *d;
    QSeries acc = QSeries::one();
    for (long long t = 0; t < k; ++t) {
        long long m = n - t;
        rem += Rat(std::llabs(m), 2);
        OptRat p;
        if (prec) p = *prec - rem;
        acc = mul(acc, curly(m), p);
    }
    return acc.truncate_opt(prec);
}

QSeries divide_by_qint(const QSeries& a, long long m, const char* what) {
    if (m == 0) throw Error("division by [0]");
    if (m < 0) return -divide_by_qint(a, -m, what);
    if (!a.exact()) throw Error("divide_by_qint needs an exact series");
    if (a.is_zero() || m == 1) return a;
    // a/[m] = q^{(m-1)/2} a (1-q)/(1-q^m)
    QSeries t = a * (QSeries::one() - QSeries::monomial(1, 1));
    long long s = t.scale();
    long long step = m * s;
    const auto& c = t.coeffs();
    long long len = (long long)c.size();
    if (len <= step) throw Error(what);
    std::vector<mpz_class> quo(len - step);
    for (long long e = 0; e < len - step; ++e) {
        quo[e] = c[e];
        if (e >= step) quo[e] += quo[e - step];
    }
    for (long long e = len - step; e < len; ++e) {
        mpz_class r = c[e];
        if (e >= step) r += quo[e - step];
        if (r != 0) throw Error(what);
    }
    return QSeries::from_units(s, t.offset(), std::move(quo), std::nullopt).shift(Rat(m - 1, 2));
}

QSeries curly_fact(long long k) { return curly_poch(k, k); }

QSeries qfact(long long k) {
    QSeries r = QSeries::one();
    for (long long i = 2; i <= k; ++i) r *= qint(i);
    return r;
}

QSeries poch(Rat a_exp, std::optional<long long> n, OptRat prec) {
    if (!n) {
        if (a_exp <= 0) throw Error("divergent Pochhammer");
        if (!prec) throw Error("infinite Pochhammer needs a precision");
    }
    QSeries acc = QSeries::one();
    for (long long j = 0; !n || j < *n; ++j) {
        Rat e = a_exp + j;
        if (prec && e >= *prec && e > 0) break;
        acc = mul(acc, QSeries::one() - QSeries::monomial(1, e), prec);
    }
    return acc.truncate_opt(prec);
}

QSeries qpoch(std::optional<long long> n, OptRat prec) {
    if (!prec) {
        if (!n) throw Error("infinite Pochhammer needs a precision");
        return poch(1, n);
    }
    long long len = length_below(*prec);
    if (len == 0) return QSeries::zero_to(*prec);
    std::vector<mpz_class> p(len);
    p[0] = 1;
    long long top = n ? std::min(*n, len - 1) : len - 1;
    for (long long i = 1; i <= top; ++i)
        for (long long e = len - 1; e >= i; --e)
            if (p[e - i] != 0) p[e] -= p[e - i];
    return from_int_array(std::move(p), prec);
}

QSeries inv_qpoch(std::optional<long long> n, Rat prec) {
    long long len = length_below(prec);
    if (len == 0) return QSeries::zero_to(prec);
    std::vector<mpz_class> p(len);
    p[0] = 1;
    long long top = n ? std::min(*n, len - 1) : len - 1;
    for (long long i = 1; i <= top; ++i)
        for (long long e = i; e < len; ++e)
            if (p[e - i] != 0) p[e] += p[e - i];
    return from_int_array(std::move(p), prec);
}

int jacobi_symbol(long long a, long long n) {
    if (n <= 0 || n % 2 == 0) throw Error("Jacobi symbol needs an odd positive modulus");
    a %= n;
    if (a < 0) a += n;
    int r = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long long m = n % 8;
            if (m == 3 || m == 5) r = -r;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) r = -r;
        a %= n;
    }
    return n == 1 ? r : 0;
}

std::map<long long, QSeries> theta_trunc(long long i, long long j, Rat prec) {
    std::map<long long, QSeries> out;
    long long base = binom2(i + 1);
    int s0 = (i % 2) ? -1 : 1;
    for (long long u = -j; u <= j; ++u) {
        long long n = std::llabs(u);
        long long e = base;
        int s = s0;
        if (n > 0) {
            e += binom2(n + 1) + n * i;
            if (n % 2) s = -s;
        }
        out[u] = QSeries::monomial(s, e).truncate(prec);
    }
    return out;
}

std::pair<int, long long> jacobi_theta_coeff(long long n) {
    return {(n % 2 == 0) ? 1 : -1, n * (n - 1) / 2};
}

}  // namespace qh
