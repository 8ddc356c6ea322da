#include "qhabiro/transform.hpp"

#include <algorithm>
#include <mutex>

namespace qh {

CoeffSeq::CoeffSeq(Side side, Gen gen, std::optional<long long> max_index)
    : side_(side), gen_(std::move(gen)), max_index_(max_index), memo_(std::make_shared<Memo>()) {}

QSeries CoeffSeq::at(long long k, OptRat prec) const {
    if (k < 0) throw Error("negative coefficient index");
    if (max_index_ && k > *max_index_) throw Error("index beyond provided data");
    if (!gen_) throw Error("empty coefficient sequence");
    auto good = [&](const QSeries& s) {
        if (s.exact()) return true;
        return prec && *s.prec() >= *prec;
    };
    {
        std::shared_lock lk(memo_->mu);
        auto it = memo_->cache.find(k);
        if (it != memo_->cache.end() && good(it->second)) return it->second;
    }
    QSeries v = gen_(k, prec);
    std::unique_lock lk(memo_->mu);
    auto it = memo_->cache.find(k);
    if (it == memo_->cache.end()) {
        memo_->cache.emplace(k, v);
    } else if (!it->second.exact() && (v.exact() || *v.prec() > *it->second.prec())) {
        it->second = v;
    }
    return v;
}

std::optional<Rat> CoeffSeq::floor(long long k) const {
    if (floor_) return floor_(k);
    if (lbc_c_ && side_ == Side::P) return lbc_profile(k) + Rat(*lbc_c_);
    return std::nullopt;
}

CoeffSeq& CoeffSeq::set_lbc_constant(std::optional<long long> c) {
    lbc_c_ = c;
    return *this;
}

Rat lbc_profile(long long k) { return Rat(-(k + 1) * (k - 2), 2); }

std::function<Rat(long long)> lbc_floor(long long c) {
    return [c](long long k) { return lbc_profile(k) + Rat(c); };
}

CoeffSeq sequence_from_list(Side side, std::vector<QSeries> coeffs) {
    auto data = std::make_shared<std::vector<QSeries>>(std::move(coeffs));
    long long n = (long long)data->size();
    return CoeffSeq(side, [data](long long k, OptRat prec) { return (*data)[k].truncate_opt(prec); },
                    n - 1);
}

std::vector<QSeries> sigma_tilde_x_expansion(long long k, long long j_max) {
    std::vector<QSeries> out;
    for (long long j = 0; j <= j_max; ++j) out.push_back(qbinom(2 * k + j, j));
    return out;
}

namespace {

// Dense Laurent polynomial with integral exponents, for the exact block
// transforms below.
struct Poly {
    long long off = 0;
    std::vector<mpz_class> c;
};

std::optional<Poly> to_poly(const QSeries& s) {
    if (!s.exact() || s.scale() != 1) return std::nullopt;
    return Poly{s.offset(), s.coeffs()};
}

QSeries from_poly(Poly p) { return QSeries::from_units(1, p.off, std::move(p.c), std::nullopt); }

// d += sign * q^m * s
void add_shifted(Poly& d, const Poly& s, long long m, int sign) {
    if (s.c.empty()) return;
    long long lo = s.off + m, hi = lo + (long long)s.c.size();
    if (d.c.empty()) {
        d.off = lo;
        d.c.assign(s.c.size(), mpz_class());
    } else {
        if (lo < d.off) {
            d.c.insert(d.c.begin(), (size_t)(d.off - lo), mpz_class());
            d.off = lo;
        }
        if (hi > d.off + (long long)d.c.size()) d.c.resize(hi - d.off);
    }
    mpz_class* out = d.c.data() + (lo - d.off);
    for (size_t i = 0; i < s.c.size(); ++i) {
        mpz_srcptr x = s.c[i].get_mpz_t();
        if (mpz_sgn(x) == 0) continue;
        if (sign > 0) mpz_add(out[i].get_mpz_t(), out[i].get_mpz_t(), x);
        else mpz_sub(out[i].get_mpz_t(), out[i].get_mpz_t(), x);
    }
}

// g(x) -> g(x) / (1 - q^m x) on x^0..x^{n-1}
void divide_linear(std::vector<Poly>& g, long long m) {
    for (size_t i = 1; i < g.size(); ++i) add_shifted(g[i], g[i - 1], m, 1);
}

// g(x) -> g(x) (1 - q^m x)
void multiply_linear(std::vector<Poly>& g, long long m) {
    for (size_t i = g.size(); i-- > 1;) add_shifted(g[i], g[i - 1], m, -1);
}

// All of f_0..f_n at once from
// f(x) = sum_k a_k x^k / prod_{|l| <= k} (1 - q^l x), nested Horner style.
std::optional<std::vector<QSeries>> f_block(const CoeffSeq& a, long long n) {
    std::vector<Poly> g;
    for (long long k = n; k >= 0; --k) {
        if (!g.empty()) {
            divide_linear(g, k + 1);
            divide_linear(g, -(k + 1));
            g.insert(g.begin(), Poly{});
        } else {
            g.emplace_back();
        }
        auto ak = to_poly(a.at(k));
        if (!ak) return std::nullopt;
        add_shifted(g[0], *ak, 0, 1);
    }
    divide_linear(g, 0);
    std::vector<QSeries> out;
    for (auto& p : g) out.push_back(from_poly(std::move(p)));
    out[0] += a.sigma0();
    return out;
}

// inverse of f_block: peel off a_k = G(0), then G <- (G - a_k) (1 - q^{k+1} x)(1 - q^{-k-1} x) / x
std::optional<std::vector<QSeries>> a_block(const CoeffSeq& f, long long n) {
    std::vector<Poly> g;
    for (long long i = 0; i <= n; ++i) {
        auto fi = to_poly(f.at(i));
        if (!fi) return std::nullopt;
        g.push_back(std::move(*fi));
    }
    multiply_linear(g, 0);
    std::vector<QSeries> out;
    for (long long k = 0; k <= n; ++k) {
        out.push_back(from_poly(std::move(g.front())));
        g.erase(g.begin());
        multiply_linear(g, k + 1);
        multiply_linear(g, -(k + 1));
    }
    return out;
}

// shared result of a block computation, filled on first exact request
struct Block {
    std::mutex mu;
    bool tried = false;
    std::optional<std::vector<QSeries>> vals;
};

}  // namespace

CoeffSeq f_from_a(const CoeffSeq& a, std::optional<long long> max_index) {
    if (a.side() != Side::P) throw Error("f_from_a expects inverted Habiro coefficients");
    std::optional<long long> top = max_index;
    if (a.max_index()) top = top ? std::min(*top, *a.max_index()) : a.max_index();
    auto block = std::make_shared<Block>();
    auto gen = [a, top, block](long long i, OptRat prec) {
        if (!prec && top) {
            std::lock_guard lk(block->mu);
            if (!block->tried) {
                block->tried = true;
                block->vals = f_block(a, *top);
            }
            if (block->vals) return (*block->vals)[i];
        }
        QSeries sum;
        if (i == 0) sum = a.sigma0().truncate_opt(prec);
        if (prec) sum += QSeries::zero_to(*prec);
        for (long long k = 0; k <= i; ++k) {
            Rat bd = *qbinom_delta(k + i, 2 * k);
            auto fl = a.floor(k);
            if (prec && fl && bd + *fl >= *prec) continue;
            OptRat need;
            if (prec) need = *prec - bd;
            QSeries ak = a.at(k, need);
            if (ak.is_exact_zero()) continue;
            OptRat bp;
            if (prec) bp = *prec - *ak.low();
            sum += mul(qbinom(k + i, 2 * k, bp), ak, prec);
        }
        return sum;
    };
    CoeffSeq f(Side::F, gen, top);
    if (a.lbc_constant()) {
        long long c = *a.lbc_constant();
        // sigma_0 only feeds f_0
        std::optional<Rat> s0;
        if (!a.sigma0().is_zero()) s0 = *a.sigma0().low();
        f.set_floor([c, s0](long long i) {
            Rat b = fk_degree_floor(i, c);
            return i == 0 && s0 ? std::min(b, *s0) : b;
        });
    }
    return f;
}

namespace {

struct InvCache {
    std::shared_mutex mu;
    std::map<std::pair<long long, long long>, QSeries> table;
};

InvCache& inv_cache() {
    static InvCache c;
    return c;
}

Rat inverse_coeff_delta(long long k, long long i) {
    return *qbinom_delta(2 * k, k - i) + *qbinom_delta(2 * i + 1, 1) - *qbinom_delta(k + i + 1, 1);
}

}  // namespace

QSeries inverse_transform_coeff(long long k, long long i) {
    if (i < 0 || i > k) return {};
    auto& c = inv_cache();
    {
        std::shared_lock lk(c.mu);
        auto it = c.table.find({k, i});
        if (it != c.table.end()) return it->second;
    }
    QSeries num = qbinom(2 * k, k - i) * qint(2 * i + 1);
    QSeries r = divide_by_qint(num, k + i + 1, "transform integrality violated");
    if ((k + i) % 2) r = -r;
    std::unique_lock lk(c.mu);
    c.table.emplace(std::make_pair(k, i), r);
    return r;
}

CoeffSeq a_from_f(const CoeffSeq& f, std::optional<long long> max_index) {
    if (f.side() != Side::F) throw Error("a_from_f expects GM coefficients");
    std::optional<long long> top = max_index;
    if (f.max_index()) top = top ? std::min(*top, *f.max_index()) : f.max_index();
    auto block = std::make_shared<Block>();
    auto gen = [f, top, block](long long k, OptRat prec) {
        if (!prec && top) {
            std::lock_guard lk(block->mu);
            if (!block->tried) {
                block->tried = true;
                block->vals = a_block(f, *top);
            }
            if (block->vals) return (*block->vals)[k];
        }
        QSeries sum;
        if (prec) sum = QSeries::zero_to(*prec);
        for (long long i = 0; i <= k; ++i) {
            Rat bd = inverse_coeff_delta(k, i);
            auto fl = f.floor(i);
            if (prec && fl && bd + *fl >= *prec) continue;
            OptRat need;
            if (prec) need = *prec - bd;
            QSeries fi = f.at(i, need);
            if (fi.is_exact_zero()) continue;
            sum += mul(inverse_transform_coeff(k, i), fi, prec);
        }
        return sum;
    };
    return CoeffSeq(Side::P, gen, top);
}

LbcReport lbc_check(const CoeffSeq& a, long long k_max, OptRat prec) {
    LbcReport rep;
    rep.checked_range = k_max;
    for (long long k = 0; k <= k_max; ++k) {
        if (a.max_index() && k > *a.max_index()) break;
        QSeries ak = a.at(k, prec);
        Degree d = ak.delta();
        if (d.kind == Degree::Kind::Infinite) continue;
        if (d.kind == Degree::Kind::AtLeast) rep.indeterminate.push_back(k);
        Rat c = d.value - lbc_profile(k);
        if (!rep.best_constant || c < *rep.best_constant) rep.best_constant = c;
    }
    return rep;
}

Rat fk_degree_floor(long long i, long long c) { return Rat(-binom2(i) + c + 1); }

bool fk_degree_check(const CoeffSeq& f, long long c, long long k_max, OptRat prec) {
    for (long long i = 0; i <= k_max; ++i) {
        if (f.max_index() && i > *f.max_index()) break;
        Rat b = fk_degree_floor(i, c);
        QSeries fi = f.at(i, prec);
        if (!fi.delta().at_least(b)) return false;
    }
    return true;
}

}  // namespace qh
