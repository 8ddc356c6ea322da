#include "qhabiro/asympt.hpp"

#include "qhabiro/parallel.hpp"

#include <cmath>

namespace qh {

namespace {

Real pi() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

Real from_mpz(const mpz_class& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

long long pos_mod(long long x, long long m) {
    long long r = x % m;
    return r < 0 ? r + m : r;
}

unsigned working_bits() { return boost::multiprecision::detail::digits10_2_2(Real::default_precision()); }

ComplexHP eval_poly_impl(const QSeries& poly, long long N) {
    if (!poly.exact()) throw Error("root-of-unity evaluation needs an exact polynomial");
    if (poly.is_zero()) return {};
    unsigned need = bits_needed(poly);
    if (working_bits() < need)
        throw Error("insufficient bits for this polynomial; use at least " + std::to_string(need));
    long long den = poly.scale() * N;
    ComplexHP z = ComplexHP::root(1, den);
    ComplexHP acc;
    const auto& c = poly.coeffs();
    for (size_t i = c.size(); i-- > 0;) acc = acc * z + ComplexHP(from_mpz(c[i]));
    return acc * ComplexHP::root(pos_mod(poly.offset(), den), den);
}

ComplexHP eval_f41_impl(long long n, long long N) {
    if (n < 0 || N < 1) throw Error("need n >= 0 and N >= 1");
    long long top = std::min(N - 1, 2 * n);
    // P[m] = (z; z)_m for m < N, never zero
    std::vector<ComplexHP> P(top + 1);
    P[0] = ComplexHP(Real(1));
    for (long long m = 1; m <= top; ++m) P[m] = P[m - 1] * (ComplexHP(Real(1)) - ComplexHP::root(m % N, N));
    ComplexHP sum;
    for (long long k = 0; k <= n; ++k) {
        long long a = n + k, b = 2 * k;
        long long A = a / N, a0 = a % N, B = b / N, b0 = b % N;
        if (b0 > a0 || B > A) continue;
        mpz_class bin;
        mpz_bin_uiui(bin.get_mpz_t(), (unsigned long)A, (unsigned long)B);
        ComplexHP g = P[a0] / (P[b0] * P[a0 - b0]) * from_mpz(bin);
        // balanced binomial carries q^{-b(a-b)/2} = q^{-k(n-k)}
        sum = sum + g * ComplexHP::root(pos_mod(-k * (n - k), N), N);
    }
    return sum;
}

bool is_f41(const Registry& reg, const std::string& knot) { return reg.get(knot).f_closed_form == "builtin:4_1"; }

ComplexHP eval_f_impl(const Registry& reg, const std::string& knot, long long n, long long N) {
    if (is_f41(reg, knot)) return eval_f41_impl(n, N);
    return eval_poly_impl(f_poly_exact(reg, knot, n), N);
}

}  // namespace

unsigned bits_to_digits(unsigned bits) { return (unsigned)std::ceil(bits * 0.30102999566398120) + 1; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
    if (bits < 64) throw Error("bits must be at least 64");
    Real::default_precision(bits_to_digits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

ComplexHP ComplexHP::root(long long num, long long den) {
    num = pos_mod(num, den);
    if (num == 0) return {Real(1), Real(0)};
    if (2 * num == den) return {Real(-1), Real(0)};
    Real t = 2 * pi() * num / den;
    return {cos(t), sin(t)};
}

Real ComplexHP::abs() const { return sqrt(re * re + im * im); }

ComplexHP operator+(const ComplexHP& a, const ComplexHP& b) { return {a.re + b.re, a.im + b.im}; }
ComplexHP operator-(const ComplexHP& a, const ComplexHP& b) { return {a.re - b.re, a.im - b.im}; }
ComplexHP operator*(const ComplexHP& a, const ComplexHP& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
ComplexHP operator*(const ComplexHP& a, const Real& b) { return {a.re * b, a.im * b}; }
ComplexHP operator/(const ComplexHP& a, const ComplexHP& b) {
    Real d = b.re * b.re + b.im * b.im;
    if (d == 0) throw Error("division by zero");
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

QSeries f_poly_exact(const Registry& reg, const std::string& knot, long long n) {
    if (n < 0) throw Error("need n >= 0");
    CoeffSeq f = reg.f_seq(knot);
    if (f.max_index() && n > *f.max_index()) return {};
    return f.at(n);
}

unsigned bits_needed(const QSeries& poly) {
    mpz_class s = 0;
    for (const auto& c : poly.coeffs()) s += abs(c);
    return 64 + (s == 0 ? 0 : (unsigned)mpz_sizeinbase(s.get_mpz_t(), 2));
}

ComplexHP eval_root_of_unity(const QSeries& poly, long long N, unsigned bits) {
    if (N < 1) throw Error("root of unity order must be positive");
    PrecisionScope ps(bits);
    return eval_poly_impl(poly, N);
}

ComplexHP eval_f41(long long n, long long N, unsigned bits) {
    PrecisionScope ps(bits);
    return eval_f41_impl(n, N);
}

ComplexHP eval_f(const Registry& reg, const std::string& knot, long long n, long long N, unsigned bits) {
    PrecisionScope ps(bits);
    return eval_f_impl(reg, knot, n, N);
}

Real vol_41() {
    // Cl_2(t) = t - t log t + sum_k zeta(2k) / (k (2k+1)) t^{2k+1} / (2 pi)^{2k}
    Real t = pi() / 3;
    Real r = t / (2 * pi());
    Real r2 = r * r;
    Real sum = t - t * log(t);
    Real pw = t;
    Real eps = ldexp(Real(1), -(int)working_bits() - 8);
    for (unsigned long k = 1;; ++k) {
        pw *= r2;
        Real z;
        mpfr_zeta_ui(z.backend().data(), 2 * k, MPFR_RNDN);
        Real term = z * pw / (Real(k) * (2 * k + 1));
        sum += term;
        if (term < eps) break;
    }
    return 2 * sum;
}

PeriodResult periodicity_check(const Registry& reg, const std::string& knot, long long n_max, unsigned bits,
                               const Real& tol, int jobs) {
    if (n_max < 2) throw Error("n_max must be at least 2");
    PrecisionScope ps(bits);
    std::vector<ComplexHP> v(n_max + 1);
    reg.f_seq(knot);
    parallel_for(n_max, jobs, [&](long long i) { v[i + 1] = eval_f_impl(reg, knot, i + 1, i + 1); });
    PeriodResult out;
    for (long long n = 1; n <= n_max; ++n) out.imag_max = std::max(out.imag_max, Real(abs(v[n].im)));
    for (long long T = 1; 2 * T <= n_max; ++T) {
        bool ok = true;
        for (long long n = 1; ok && n + T <= n_max; ++n) ok = (v[n + T] - v[n]).abs() < tol;
        if (!ok) continue;
        out.found = true;
        out.period = T;
        out.phase = 1;
        for (long long n = 1; n <= T; ++n) out.values.push_back(v[n].re);
        out.multiset = out.values;
        std::sort(out.multiset.begin(), out.multiset.end());
        return out;
    }
    return out;
}

Real richardson(const std::vector<long long>& n, const std::vector<Real>& v, int order) {
    if (order < 0) throw Error("order must be non-negative");
    if (n.size() != v.size()) throw Error("index and value lists differ in length");
    if ((long long)v.size() < order + 1) throw Error("Richardson needs at least order+1 points");
    size_t s = v.size() - order - 1;
    std::vector<Real> x, T;
    for (size_t i = s; i < v.size(); ++i) {
        x.push_back(Real(1) / Real(n[i]));
        T.push_back(v[i]);
    }
    for (int m = 1; m <= order; ++m)
        for (int i = 0; i + m <= order; ++i) T[i] = (x[i + m] * T[i] - x[i] * T[i + 1]) / (x[i + m] - x[i]);
    return T[0];
}

Real richardson(const std::vector<Real>& v, int order) {
    std::vector<long long> n(v.size());
    for (size_t i = 0; i < n.size(); ++i) n[i] = (long long)i + 1;
    return richardson(n, v, order);
}

GrowthResult growth_rate(const Registry& reg, const std::string& knot, const std::vector<long long>& n_list,
                         unsigned bits, int jobs) {
    if (n_list.empty()) throw Error("empty n list");
    for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw Error("n list must be increasing");
    if (n_list.front() < 1) throw Error("n must be positive");
    PrecisionScope ps(bits);
    std::vector<ComplexHP> v(n_list.size());
    reg.f_seq(knot);
    parallel_for((long long)n_list.size(), jobs,
                 [&](long long i) { v[i] = eval_f_impl(reg, knot, n_list[i], 2 * n_list[i]); });
    GrowthResult out;
    Real floor = ldexp(Real(1), -(int)bits / 2);
    size_t zeros = 0;
    for (const auto& x : v) zeros += x.abs() < floor;
    if (zeros == v.size()) {
        out.trivial = true;
        return out;
    }
    if (zeros) {
        out.flagged = true;
        return out;
    }
    std::vector<Real> g;
    for (size_t i = 0; i < v.size(); ++i) {
        g.push_back(pi() / n_list[i] * log(v[i].abs()));
        out.raw.emplace_back(n_list[i], g.back());
    }
    int top = (int)std::min<size_t>(g.size() - 1, 8);
    for (int o = 0; o <= top; ++o) out.orders.push_back(richardson(n_list, g, o));
    out.estimate = out.orders.back();
    size_t m = out.orders.size();
    if (m >= 3 && abs(out.orders[m - 1] - out.orders[m - 2]) > abs(out.orders[m - 2] - out.orders[m - 3]))
        out.flagged = true;
    return out;
}

namespace {

std::vector<mpq_class> to_plain(const PerturbSeries& s) {
    std::vector<mpq_class> b(s.c.size());
    mpz_class fact = 1;
    for (size_t k = 0; k < s.c.size(); ++k) {
        if (k) fact *= (unsigned long)k;
        b[k] = s.c[k] / fact;
    }
    return b;
}

PerturbSeries from_plain(const std::vector<mpq_class>& b, std::string prefactor) {
    PerturbSeries s;
    s.prefactor = std::move(prefactor);
    mpz_class fact = 1;
    for (size_t k = 0; k < b.size(); ++k) {
        if (k) fact *= (unsigned long)k;
        mpq_class c = b[k] * fact;
        c.canonicalize();
        s.c.push_back(c);
    }
    return s;
}

std::string join_prefactor(const std::string& a, const std::string& b) {
    if (a.empty() || a == "1") return b;
    if (b.empty() || b == "1") return a;
    return a + "*" + b;
}

void need_unit(const PerturbSeries& s) {
    if (s.c.empty() || s.c[0] != 1) throw Error("series must start with c_0 = 1");
}

}  // namespace

PerturbSeries phi_j_data() {
    PerturbSeries s;
    s.prefactor = "3^(-1/4)";
    s.c = {mpq_class(1), mpq_class(11), mpq_class(697), mpq_class(724351, 5)};
    return s;
}

PerturbSeries phi_f_data() {
    PerturbSeries s;
    s.prefactor = "3^(-1/2)";
    s.c = {mpq_class(1),
           mpq_class(4),
           mpq_class(304),
           mpq_class(290912, 5),
           mpq_class(107155712, 5),
           mpq_class(91298182144, 7),
           mpq_class(mpz_class("416634955237376"), 35),
           mpq_class(mpz_class("76199853915803648"), 5)};
    for (auto& c : s.c) c.canonicalize();
    return s;
}

PerturbSeries series_mul(const PerturbSeries& s, const PerturbSeries& t) {
    size_t n = std::min(s.c.size(), t.c.size());
    auto a = to_plain(s), b = to_plain(t);
    std::vector<mpq_class> r(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
    return from_plain(r, join_prefactor(s.prefactor, t.prefactor));
}

PerturbSeries series_inv(const PerturbSeries& s) {
    need_unit(s);
    auto a = to_plain(s);
    std::vector<mpq_class> r(a.size(), 0);
    r[0] = 1;
    for (size_t k = 1; k < a.size(); ++k) {
        mpq_class acc = 0;
        for (size_t i = 1; i <= k; ++i) acc += a[i] * r[k - i];
        r[k] = -acc;
    }
    return from_plain(r, s.prefactor.empty() || s.prefactor == "1" ? s.prefactor : "(" + s.prefactor + ")^-1");
}

PerturbSeries series_sqrt(const PerturbSeries& s) {
    need_unit(s);
    auto a = to_plain(s);
    std::vector<mpq_class> r(a.size(), 0);
    r[0] = 1;
    for (size_t k = 1; k < a.size(); ++k) {
        mpq_class acc = a[k];
        for (size_t i = 1; i < k; ++i) acc -= r[i] * r[k - i];
        r[k] = acc / 2;
    }
    return from_plain(r, s.prefactor.empty() || s.prefactor == "1" ? s.prefactor : "(" + s.prefactor + ")^(1/2)");
}

PerturbSeries series_sqrt_inv(const PerturbSeries& s) { return series_inv(series_sqrt(s)); }

std::vector<mpz_class> phi_quotient_check(int depth) {
    PerturbSeries j = phi_j_data();
    if (depth < 0 || depth > j.depth()) throw Error("quotient depth limited by the four known Phi^J coefficients");
    j.c.resize(depth + 1);
    PerturbSeries f = phi_f_data();
    f.c.resize(depth + 1);
    // the prefactors 3^(-1/4) and sqrt(3^(-1/2)) cancel
    PerturbSeries q = series_mul(PerturbSeries{j.c, "1"}, series_sqrt_inv(PerturbSeries{f.c, "1"}));
    std::vector<mpz_class> out;
    for (size_t k = 0; k < q.c.size(); ++k) {
        if (q.c[k].get_den() != 1)
            throw Error("non-integer quotient coefficient at k=" + std::to_string(k) + ": " + q.c[k].get_str());
        out.push_back(q.c[k].get_num());
    }
    return out;
}

namespace {

// Solves sum_k b_k x_i^k = y_i by elimination with partial pivoting.
std::vector<Real> solve_vandermonde(const std::vector<Real>& x, const std::vector<Real>& y) {
    size_t n = x.size();
    std::vector<std::vector<Real>> A(n, std::vector<Real>(n + 1));
    for (size_t i = 0; i < n; ++i) {
        Real p = 1;
        for (size_t k = 0; k < n; ++k) {
            A[i][k] = p;
            p *= x[i];
        }
        A[i][n] = y[i];
    }
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (size_t r = c + 1; r < n; ++r) {
            Real f = A[r][c] / A[c][c];
            for (size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<Real> b(n);
    for (size_t i = n; i-- > 0;) {
        Real s = A[i][n];
        for (size_t k = i + 1; k < n; ++k) s -= A[i][k] * b[k];
        b[i] = s / A[i][i];
    }
    return b;
}

std::vector<Real> fit_c(const std::vector<long long>& ns, const std::vector<Real>& s, long long n_ref, int depth) {
    std::vector<Real> x;
    for (long long n : ns) x.push_back(Real(n_ref) / Real(n));
    std::vector<Real> b = solve_vandermonde(x, s);
    Real kappa = 2 * pi() / (72 * sqrt(Real(3)));
    std::vector<Real> c;
    Real fact = 1;
    Real scale = 1;
    for (int k = 0; k <= depth && k < (int)b.size(); ++k) {
        if (k) {
            fact *= k;
            scale *= kappa / Real(n_ref);
        }
        c.push_back(b[k] * fact / scale);
    }
    return c;
}

}  // namespace

PhiFit extract_phi(const Registry& reg, const std::string& knot, int depth, long long n_max, unsigned bits, int jobs) {
    constexpr int kFitOrder = 20;
    constexpr int kAltOrder = 12;
    if (depth < 0 || depth > 3) throw Error("depth must lie in 0..3");
    long long step = std::max<long long>(1, n_max / (2 * kFitOrder));
    if (n_max - kFitOrder * step < 8) throw Error("n_max too small for the fit; use at least 48");
    PrecisionScope ps(bits);
    std::vector<long long> ns;
    for (int i = kFitOrder; i >= 0; --i) ns.push_back(n_max - i * step);
    std::vector<ComplexHP> v(ns.size());
    reg.f_seq(knot);
    parallel_for((long long)ns.size(), jobs, [&](long long i) { v[i] = eval_f_impl(reg, knot, ns[i], 2 * ns[i]); });
    Real vol = vol_41();
    std::vector<Real> s;
    for (size_t i = 0; i < ns.size(); ++i) s.push_back(v[i].re * exp(-Real(ns[i]) * vol / pi()) * sqrt(Real(3)));
    PhiFit out;
    out.points = (long long)ns.size();
    out.c = fit_c(ns, s, n_max, depth);
    std::vector<long long> ns_alt(ns.end() - (kAltOrder + 1), ns.end());
    std::vector<Real> s_alt(s.end() - (kAltOrder + 1), s.end());
    out.c_alt = fit_c(ns_alt, s_alt, n_max, depth);
    for (size_t k = 0; k < out.c.size(); ++k) {
        Real mag = std::max(Real(1), Real(abs(out.c[k])));
        if (abs(out.c[k] - out.c_alt[k]) > mag / 1000) out.flagged = true;
    }
    return out;
}

std::vector<SampleRow> sample_rows(const Registry& reg, const std::string& knot, const std::vector<long long>& ns,
                                   unsigned bits, int jobs) {
    PrecisionScope ps(bits);
    std::vector<ComplexHP> v(ns.size());
    reg.f_seq(knot);
    parallel_for((long long)ns.size(), jobs, [&](long long i) { v[i] = eval_f_impl(reg, knot, ns[i], 2 * ns[i]); });
    Real vol = vol_41();
    std::vector<SampleRow> rows;
    for (size_t i = 0; i < ns.size(); ++i)
        rows.push_back({ns[i], v[i], v[i].abs(), v[i].re * exp(-Real(ns[i]) * vol / pi()) * sqrt(Real(3))});
    return rows;
}

}  // namespace qh
