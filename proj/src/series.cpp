#include "qhabiro/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qh {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

long long floor(Rat r) { return floor_div(r.numerator(), r.denominator()); }
long long ceil(Rat r) { return ceil_div(r.numerator(), r.denominator()); }

std::string rat_str(Rat r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::optional<Rat> Degree::lower() const {
    if (kind == Kind::Infinite) return std::nullopt;
    return value;
}

bool Degree::at_least(Rat b) const { return kind == Kind::Infinite || value >= b; }

namespace {

long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

// units of exponent r at scale s; r*s must be integral
long long units(Rat r, long long s) {
    Rat u = r * Rat(s);
    if (u.denominator() != 1) throw Error("exponent not on grid");
    return u.numerator();
}

}  // namespace

QSeries QSeries::zero_to(Rat prec) {
    QSeries r;
    r.s_ = prec.denominator();
    r.prec_ = prec.numerator();
    r.normalize();
    return r;
}

QSeries QSeries::constant(const mpz_class& c) {
    QSeries r;
    if (c != 0) r.c_.push_back(c);
    return r;
}

QSeries QSeries::monomial(const mpz_class& c, Rat e) {
    QSeries r;
    if (c == 0) return r;
    r.s_ = e.denominator();
    r.e0_ = e.numerator();
    r.c_.push_back(c);
    return r;
}

QSeries QSeries::from_units(long long scale, long long offset, std::vector<mpz_class> coeffs,
                            std::optional<long long> prec_units) {
    if (scale <= 0) throw Error("scale must be positive");
    QSeries r;
    r.s_ = scale;
    r.e0_ = offset;
    r.c_ = std::move(coeffs);
    r.prec_ = prec_units;
    if (r.prec_) {
        long long keep = std::max<long long>(0, *r.prec_ - r.e0_);
        if ((long long)r.c_.size() > keep) r.c_.resize(keep);
    }
    r.normalize();
    return r;
}

QSeries QSeries::from_ints(long long offset, const std::vector<long long>& coeffs, std::optional<Rat> prec) {
    std::vector<mpz_class> c;
    c.reserve(coeffs.size());
    for (long long x : coeffs) c.emplace_back(static_cast<long>(x));
    QSeries r = from_units(1, offset, std::move(c), std::nullopt);
    return prec ? r.truncate(*prec) : r;
}

void QSeries::normalize() {
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        e0_ = 0;
    } else {
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + lead);
            e0_ += (long long)lead;
        }
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    long long g = s_;
    if (prec_) g = std::gcd(g, *prec_);
    if (!c_.empty()) {
        g = std::gcd(g, e0_);
        for (size_t i = 1; i < c_.size() && g > 1; ++i)
            if (c_[i] != 0) g = std::gcd(g, (long long)i);
    }
    if (g > 1) {
        s_ /= g;
        e0_ /= g;
        if (prec_) *prec_ /= g;
        if (!c_.empty()) {
            std::vector<mpz_class> n((c_.size() - 1) / g + 1);
            for (size_t i = 0; i < c_.size(); i += g) n[i / g] = std::move(c_[i]);
            c_ = std::move(n);
        }
    }
}

std::optional<Rat> QSeries::prec() const {
    if (!prec_) return std::nullopt;
    return Rat(*prec_, s_);
}

Degree QSeries::delta() const {
    if (c_.empty()) {
        if (!prec_) return {Degree::Kind::Infinite, 0};
        return {Degree::Kind::AtLeast, Rat(*prec_, s_)};
    }
    return {Degree::Kind::Finite, Rat(e0_, s_)};
}

std::optional<Rat> QSeries::low() const {
    if (!c_.empty()) return Rat(e0_, s_);
    if (prec_) return Rat(*prec_, s_);
    return std::nullopt;
}

Rat QSeries::max_exponent() const {
    if (c_.empty()) throw Error("max_exponent of zero series");
    return Rat(e0_ + (long long)c_.size() - 1, s_);
}

const mpz_class& QSeries::leading_coeff() const {
    if (c_.empty()) throw Error("leading coefficient of zero series");
    return c_.front();
}

mpz_class QSeries::coeff(Rat e) const {
    if (prec_ && e >= Rat(*prec_, s_)) throw Error("coefficient beyond precision");
    Rat u = e * Rat(s_);
    if (u.denominator() != 1) return 0;
    long long i = u.numerator() - e0_;
    if (i < 0 || i >= (long long)c_.size()) return 0;
    return c_[i];
}

std::vector<std::pair<Rat, mpz_class>> QSeries::terms() const {
    std::vector<std::pair<Rat, mpz_class>> out;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) out.emplace_back(Rat(e0_ + (long long)i, s_), c_[i]);
    return out;
}

QSeries QSeries::rescaled(long long s) const {
    if (s % s_ != 0) throw Error("rescale to non-multiple scale");
    long long m = s / s_;
    if (m == 1) return *this;
    QSeries r;
    r.s_ = s;
    r.e0_ = e0_ * m;
    if (prec_) r.prec_ = *prec_ * m;
    if (!c_.empty()) {
        r.c_.resize((c_.size() - 1) * m + 1);
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i * m] = c_[i];
    }
    return r;
}

QSeries QSeries::truncate(Rat n) const {
    long long s = lcm_ll(s_, n.denominator());
    QSeries r = rescaled(s);
    long long nu = units(n, s);
    if (!r.prec_ || *r.prec_ > nu) r.prec_ = nu;
    long long keep = std::max<long long>(0, *r.prec_ - r.e0_);
    if ((long long)r.c_.size() > keep) r.c_.resize(keep);
    r.normalize();
    return r;
}

QSeries QSeries::with_prec(std::optional<long long> prec_units) const {
    QSeries r = *this;
    r.prec_ = prec_units;
    if (r.prec_) {
        long long keep = std::max<long long>(0, *r.prec_ - r.e0_);
        if ((long long)r.c_.size() > keep) r.c_.resize(keep);
    }
    r.normalize();
    return r;
}

QSeries QSeries::shift(Rat e) const {
    if (e == 0) return *this;
    if (c_.empty() && !prec_) return *this;
    long long s = lcm_ll(s_, e.denominator());
    QSeries r = rescaled(s);
    long long d = units(e, s);
    r.e0_ += d;
    if (r.prec_) *r.prec_ += d;
    if (r.c_.empty()) r.e0_ = 0;
    r.normalize();
    return r;
}

QSeries QSeries::subst_qpow(long long m) const {
    if (m <= 0) throw Error("subst_qpow needs a positive power");
    QSeries r;
    r.s_ = s_;
    r.e0_ = c_.empty() ? 0 : e0_ * m;
    if (prec_) r.prec_ = *prec_ * m;
    if (!c_.empty()) {
        r.c_.resize((c_.size() - 1) * m + 1);
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i * m] = c_[i];
    }
    r.normalize();
    return r;
}

QSeries QSeries::mirror() const {
    if (prec_) throw Error("mirror requires exact polynomial");
    QSeries r;
    r.s_ = s_;
    if (c_.empty()) return r;
    r.e0_ = -(e0_ + (long long)c_.size() - 1);
    r.c_.assign(c_.rbegin(), c_.rend());
    r.normalize();
    return r;
}

QSeries QSeries::scaled(const mpz_class& c) const {
    if (c == 0) return prec_ ? zero_to(Rat(*prec_, s_)) : QSeries();
    QSeries r = *this;
    for (auto& x : r.c_) x *= c;
    return r;
}

QSeries QSeries::operator-() const {
    QSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

QSeries& QSeries::operator+=(const QSeries& o) {
    if (o.c_.empty() && !o.prec_) return *this;
    if (c_.empty() && !prec_) return *this = o;
    if (s_ == o.s_ && !c_.empty() && !o.c_.empty() && this != &o) {
        // same grid: add in place, widening the buffer only when needed
        std::optional<long long> p = prec_;
        if (o.prec_) p = p ? std::min(*p, *o.prec_) : o.prec_;
        long long lo = std::min(e0_, o.e0_);
        long long hi = std::max(e0_ + (long long)c_.size(), o.e0_ + (long long)o.c_.size());
        if (p) hi = std::min(hi, *p);
        if (hi <= lo) {
            c_.clear();
            e0_ = 0;
            prec_ = p;
            normalize();
            return *this;
        }
        if (lo < e0_) c_.insert(c_.begin(), (size_t)(e0_ - lo), mpz_class());
        e0_ = lo;
        c_.resize(hi - lo);
        for (size_t i = 0; i < o.c_.size(); ++i) {
            long long e = o.e0_ + (long long)i;
            if (e >= hi) break;
            if (mpz_sgn(o.c_[i].get_mpz_t()) != 0) c_[e - lo] += o.c_[i];
        }
        prec_ = p;
        normalize();
        return *this;
    }
    long long s = lcm_ll(s_, o.s_);
    QSeries a = rescaled(s);
    QSeries b = o.rescaled(s);
    std::optional<long long> p;
    if (a.prec_ && b.prec_) p = std::min(*a.prec_, *b.prec_);
    else if (a.prec_) p = a.prec_;
    else p = b.prec_;
    if (a.c_.empty() && b.c_.empty()) {
        a.prec_ = p;
        a.e0_ = 0;
        a.normalize();
        return *this = a;
    }
    long long lo, hi;  // hi exclusive
    if (a.c_.empty()) lo = b.e0_;
    else if (b.c_.empty()) lo = a.e0_;
    else lo = std::min(a.e0_, b.e0_);
    hi = std::max(a.c_.empty() ? lo : a.e0_ + (long long)a.c_.size(),
                  b.c_.empty() ? lo : b.e0_ + (long long)b.c_.size());
    if (p) hi = std::min(hi, *p);
    QSeries r;
    r.s_ = s;
    r.prec_ = p;
    if (hi > lo) {
        r.e0_ = lo;
        r.c_.resize(hi - lo);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            long long e = a.e0_ + (long long)i;
            if (e >= hi) break;
            r.c_[e - lo] = std::move(a.c_[i]);
        }
        for (size_t i = 0; i < b.c_.size(); ++i) {
            long long e = b.e0_ + (long long)i;
            if (e >= hi) break;
            r.c_[e - lo] += b.c_[i];
        }
    }
    r.normalize();
    return *this = std::move(r);
}

QSeries& QSeries::operator-=(const QSeries& o) { return *this += -o; }

QSeries& QSeries::operator*=(const QSeries& o) { return *this = mul(*this, o, std::nullopt); }



namespace {

// Polynomials longer than this on both sides are multiplied by packing the
// coefficients into one big integer and letting GMP do the work.
constexpr long long kKroneckerCutoff = 48;

size_t max_bits(const mpz_class* c, long long n) {
    size_t b = 0;
    for (long long i = 0; i < n; ++i)
        if (mpz_sgn(c[i].get_mpz_t()) != 0) b = std::max(b, mpz_sizeinbase(c[i].get_mpz_t(), 2));
    return b;
}

mpz_class pack(const mpz_class* c, long long n, size_t limbs, int sign) {
    std::vector<mp_limb_t> buf((size_t)n * limbs, 0);
    for (long long i = 0; i < n; ++i) {
        mpz_srcptr x = c[i].get_mpz_t();
        if (mpz_sgn(x) != sign) continue;
        size_t sz = mpz_size(x);
        const mp_limb_t* l = mpz_limbs_read(x);
        std::copy(l, l + sz, buf.begin() + (size_t)i * limbs);
    }
    size_t top = buf.size();
    while (top > 0 && buf[top - 1] == 0) --top;
    mpz_class r;
    if (top == 0) return r;
    mp_limb_t* w = mpz_limbs_write(r.get_mpz_t(), top);
    std::copy(buf.begin(), buf.begin() + top, w);
    mpz_limbs_finish(r.get_mpz_t(), top);
    return r;
}

std::vector<mpz_class> kronecker_mul(const mpz_class* a, long long la, const mpz_class* b, long long lb) {
    size_t bits = max_bits(a, la) + max_bits(b, lb) + 64 - __builtin_clzll((unsigned long long)std::min(la, lb)) + 2;
    size_t limbs = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
    mpz_class pa = pack(a, la, limbs, 1) - pack(a, la, limbs, -1);
    mpz_class pb = pack(b, lb, limbs, 1) - pack(b, lb, limbs, -1);
    mpz_class r = pa * pb;
    bool neg = r < 0;
    if (neg) r = -r;
    long long n = la + lb - 1;
    std::vector<mpz_class> out(n);
    size_t sz = mpz_size(r.get_mpz_t());
    const mp_limb_t* l = mpz_limbs_read(r.get_mpz_t());
    mpz_class full;
    mpz_ui_pow_ui(full.get_mpz_t(), 2, limbs * GMP_NUMB_BITS);
    mpz_class half = full / 2;
    int carry = 0;
    for (long long i = 0; i < n; ++i) {
        size_t lo = (size_t)i * limbs;
        size_t cnt = lo >= sz ? 0 : std::min(limbs, sz - lo);
        mpz_class v;
        if (cnt > 0) {
            size_t used = cnt;
            while (used > 0 && l[lo + used - 1] == 0) --used;
            if (used > 0) {
                mp_limb_t* w = mpz_limbs_write(v.get_mpz_t(), used);
                std::copy(l + lo, l + lo + used, w);
                mpz_limbs_finish(v.get_mpz_t(), used);
            }
        }
        if (carry) v += 1;
        // a carried-in digit may reach the full base, so compare rather than test the top bit
        if (v >= half) {
            v -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        out[i] = neg ? mpz_class(-v) : v;
    }
    return out;
}

}  // namespace

QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b, std::nullopt); }

QSeries mul(const QSeries& a0, const QSeries& b0, std::optional<Rat> n) {
    if (a0.is_exact_zero() || b0.is_exact_zero()) return QSeries();
    long long s = lcm_ll(a0.scale(), b0.scale());
    if (n) s = lcm_ll(s, n->denominator());
    QSeries a_tmp, b_tmp;
    const QSeries& a = a0.scale() == s ? a0 : (a_tmp = a0.rescaled(s));
    const QSeries& b = b0.scale() == s ? b0 : (b_tmp = b0.rescaled(s));
    auto low_units = [](const QSeries& x) -> long long {
        return x.coeffs().empty() ? *x.prec_units() : x.offset();
    };
    std::optional<long long> p;
    auto lower = [&](long long v) { p = p ? std::min(*p, v) : v; };
    if (a.prec_units()) lower(*a.prec_units() + low_units(b));
    if (b.prec_units()) lower(*b.prec_units() + low_units(a));
    if (n) lower(units(*n, s));
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    if (ca.empty() || cb.empty()) return QSeries::from_units(s, 0, {}, p);
    long long off = a.offset() + b.offset();
    long long len = (long long)(ca.size() + cb.size() - 1);
    if (p) len = std::min(len, *p - off);
    if (len <= 0) return QSeries::from_units(s, 0, {}, p);
    long long la_eff = std::min<long long>((long long)ca.size(), len);
    long long lb_eff = std::min<long long>((long long)cb.size(), len);
    if (std::min(la_eff, lb_eff) >= kKroneckerCutoff) {
        std::vector<mpz_class> r = kronecker_mul(ca.data(), la_eff, cb.data(), lb_eff);
        r.resize(std::min<long long>(len, (long long)r.size()));
        return QSeries::from_units(s, off, std::move(r), p);
    }
    std::vector<mpz_class> r(len);
    long long lb = (long long)cb.size();
    for (long long i = 0; i < (long long)ca.size() && i < len; ++i) {
        if (ca[i] == 0) continue;
        mpz_srcptr x = ca[i].get_mpz_t();
        long long jmax = std::min(lb, len - i);
        for (long long j = 0; j < jmax; ++j) {
            mpz_srcptr y = cb[j].get_mpz_t();
            if (mpz_sgn(y) == 0) continue;
            mpz_addmul(r[i + j].get_mpz_t(), x, y);
        }
    }
    return QSeries::from_units(s, off, std::move(r), p);
}

bool QSeries::operator==(const QSeries& o) const {
    return s_ == o.s_ && e0_ == o.e0_ && prec_ == o.prec_ && c_ == o.c_;
}

bool agree_to(const QSeries& a, const QSeries& b, Rat n) {
    auto pa = a.prec();
    auto pb = b.prec();
    if ((pa && *pa < n) || (pb && *pb < n)) return false;
    return (a.truncate(n) - b.truncate(n)).is_zero();
}

namespace {

std::string exp_str(Rat e) {
    if (e.denominator() == 1) return std::to_string(e.numerator());
    return "(" + rat_str(e) + ")";
}

}  // namespace

std::string QSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms()) {
        mpz_class a = abs(c);
        bool neg = c < 0;
        if (first) os << (neg ? "-" : "");
        else os << (neg ? " - " : " + ");
        first = false;
        if (e == 0) {
            os << a.get_str();
            continue;
        }
        if (a != 1) os << a.get_str() << "*";
        os << "q";
        if (e != 1) os << "^" << exp_str(e);
    }
    if (prec_) {
        if (!first) os << " + ";
        os << "O(q^" << exp_str(Rat(*prec_, s_)) << ")";
    } else if (first) {
        os << "0";
    }
    return os.str();
}

QSeries divide_exact(const QSeries& a0, const QSeries& b0, const char* what) {
    if (!a0.exact() || !b0.exact()) throw Error("divide_exact needs exact series");
    if (b0.is_zero()) throw Error("division by zero series");
    if (a0.is_zero()) return {};
    const mpz_class& lead = b0.coeffs().front();
    if (lead != 1 && lead != -1) throw Error("divisor leading coefficient is not a unit");
    long long s = std::lcm(a0.scale(), b0.scale());
    QSeries a = a0.rescaled(s);
    QSeries b = b0.rescaled(s);
    const auto& cb = b.coeffs();
    std::vector<mpz_class> rem = a.coeffs();
    long long la = (long long)rem.size(), lb = (long long)cb.size();
    if (la < lb) throw Error(what);
    long long lq = la - lb + 1;
    std::vector<mpz_class> quo(lq);
    int c = lead > 0 ? 1 : -1;
    for (long long i = 0; i < lq; ++i) {
        if (rem[i] == 0) continue;
        quo[i] = c > 0 ? rem[i] : mpz_class(-rem[i]);
        mpz_srcptr qi = quo[i].get_mpz_t();
        for (long long j = 0; j < lb; ++j)
            if (cb[j] != 0) mpz_submul(rem[i + j].get_mpz_t(), qi, cb[j].get_mpz_t());
    }
    for (long long i = lq; i < la; ++i)
        if (rem[i] != 0) throw Error(what);
    return QSeries::from_units(s, a.offset() - b.offset(), std::move(quo), std::nullopt);
}

QSeries invert_unit(const QSeries& a, Rat n) {
    if (a.is_zero()) throw Error("not invertible: zero series");
    const mpz_class& lead = a.coeffs().front();
    if (lead != 1 && lead != -1) throw Error("not invertible over integers");
    long long s = std::lcm(a.scale(), n.denominator());
    QSeries x = a.rescaled(s);
    long long d = x.offset();
    long long rel = units(n, s) + d;
    if (x.prec_units()) rel = std::min(rel, *x.prec_units() - d);
    if (rel <= 0) return QSeries::from_units(s, 0, {}, -d + rel);
    const auto& u = x.coeffs();
    long long lu = (long long)u.size();
    int c = lead > 0 ? 1 : -1;
    std::vector<mpz_class> b(rel);
    b[0] = c;
    mpz_class acc;
    for (long long k = 1; k < rel; ++k) {
        acc = 0;
        long long imax = std::min(k, lu - 1);
        for (long long i = 1; i <= imax; ++i) {
            if (u[i] == 0) continue;
            mpz_addmul(acc.get_mpz_t(), u[i].get_mpz_t(), b[k - i].get_mpz_t());
        }
        if (c > 0) b[k] = -acc;
        else b[k] = acc;
    }
    return QSeries::from_units(s, -d, std::move(b), -d + rel);
}

QSeries sum_bounded(const TermGen& term, const DegreeBound& bound, Rat n, long long k_begin, long long k_limit) {
    QSeries total = QSeries::zero_to(n);
    std::optional<Rat> prev;
    for (long long k = k_begin;; ++k) {
        if (k - k_begin > k_limit) throw Error("summation did not terminate within the term limit");
        Rat b = bound.bound(k);
        if (k > bound.k0 && prev && b < *prev)
            throw Error("degree bound not monotone at k=" + std::to_string(k));
        if (k >= bound.k0) prev = b;
        if (k >= bound.k0 && b >= n) break;
        QSeries t = term(k, n);
        if (!t.delta().at_least(b)) throw Error("degree bound violated at k=" + std::to_string(k));
        total += t.truncate(n);
    }
    return total;
}

}  // namespace qh
