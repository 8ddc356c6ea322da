// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and time
// budgets are fixed here; a criterion that overruns its budget fails.

#include "qhabiro/asympt.hpp"
#include "qhabiro/knots.hpp"
#include "qhabiro/omega.hpp"
#include "qhabiro/qcomb.hpp"
#include "qhabiro/residue.hpp"
#include "qhabiro/surgery.hpp"
#include "qhabiro/transform.hpp"

#include "../tables.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace qh;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    bool slow;
    std::function<Outcome()> run;
};

const Registry& reg() {
    static Registry r = Registry::with_builtins();
    return r;
}

const char* kKnots[] = {"3_1l", "3_1r", "4_1"};

Outcome fail(const std::string& why) { return {false, why}; }

std::string head(const QSeries& d) {
    std::string s = d.str();
    return s.size() > 120 ? s.substr(0, 120) + "..." : s;
}

// truncated series agree exactly and both are known below prec
bool same_to(const QSeries& x, const QSeries& y, Rat prec) {
    QSeries d = x.truncate(prec) - y.truncate(prec);
    if (!d.is_zero()) return false;
    return (!x.prec() || *x.prec() >= prec) && (!y.prec() || *y.prec() >= prec);
}

Outcome c1_tables() {
    Rat prec = 30;
    auto check = [&](const char* knot, const std::vector<ResidueRow>& rows) -> Outcome {
        ResidueFamily rf = residue_family(reg().a_seq(knot), 4, prec);
        for (const auto& row : rows) {
            const QSeries& r = rf.r.at(row.j);
            for (size_t i = 0; i < row.coeffs.size(); ++i) {
                Rat e(row.offset + (long long)i);
                if (r.prec() && *r.prec() <= e) return fail(std::string(knot) + " r_" + std::to_string(row.j) + " too short");
                if (r.coeff(e) != mpz_class(std::to_string(row.coeffs[i])))
                    return fail(std::string(knot) + " r_" + std::to_string(row.j) + " at q^" + rat_str(e));
            }
        }
        return {};
    };
    Outcome o = check("3_1r", trefoil_right_rows());
    if (!o.pass) return o;
    o = check("4_1", figure_eight_rows());
    if (o.pass) o.detail = "20 rows, 200 coefficients";
    return o;
}

Outcome c2_residue_theorem() {
    Rat prec = 50;
    for (const char* k : kKnots) {
        QSeries d = residue_theorem_check(reg().a_seq(k), prec);
        if (!d.is_zero()) return fail(std::string(k) + " defect " + head(d));
        if (d.prec() && *d.prec() < prec) return fail(std::string(k) + " defect known only to O(q^" + rat_str(*d.prec()) + ")");
    }
    return {true, "defect 0 to O(q^50) for 3_1l 3_1r 4_1"};
}

Outcome theta_route(const std::string& label, const CoeffSeq& a, const CoeffSeq& f, Rat prec) {
    long long w = residue_window(a, prec);
    ResidueFamily rf = residue_family(a, w, prec);
    for (long long j = -w; j <= w; ++j) {
        QSeries t = residues_from_f(f, j, prec);
        if (!same_to(t, rf.r.at(j), prec))
            return fail(label + " j=" + std::to_string(j) + ": " + head(t - rf.r.at(j)));
    }
    return {true, label + " J=" + std::to_string(w)};
}

Outcome c3_theta() {
    Rat prec = 50;
    std::string info;
    for (const char* k : kKnots) {
        Outcome o = theta_route(k, reg().a_seq(k), reg().f_seq(k), prec);
        if (!o.pass) return o;
        info += o.detail + " ";
    }
    CoeffSeq l = reg().a_seq("3_1l"), r = reg().a_seq("3_1r");
    OmegaProduct p = omega_mul({l, lbc_check(l, 30)}, {r, lbc_check(r, 30)}, 30, prec);
    Outcome o = theta_route("3_1l#3_1r", p.seq, f_from_a(p.seq), prec);
    if (!o.pass) return o;
    return {true, info + o.detail};
}

QSeries random_poly(std::mt19937_64& rng, int lo_min, int lo_max) {
    std::uniform_int_distribution<int> coef(-5, 5), lo(lo_min, lo_max), len(1, 6);
    std::vector<long long> c(len(rng));
    for (auto& x : c) x = coef(rng);
    return QSeries::from_ints(lo(rng), c);
}

Outcome c4_round_trip() {
    const long long top = 50;
    auto both_ways = [&](const std::string& label, const CoeffSeq& a, const CoeffSeq& f) -> Outcome {
        CoeffSeq a2 = a_from_f(f_from_a(a, top), top);
        CoeffSeq f2 = f_from_a(a_from_f(f, top), top);
        for (long long k = 0; k <= top; ++k) {
            if (a2.at(k) != a.at(k)) return fail(label + " a_{-" + std::to_string(k + 1) + "}");
            if (f2.at(k) != f.at(k)) return fail(label + " f_" + std::to_string(k));
        }
        return {};
    };
    for (const char* k : kKnots) {
        Outcome o = both_ways(k, reg().a_seq(k), reg().f_seq(k));
        if (!o.pass) return o;
    }
    std::mt19937_64 rng(20240601);
    for (int t = 0; t < 200; ++t) {
        std::vector<QSeries> as, fs;
        for (long long k = 0; k <= top; ++k) {
            as.push_back(random_poly(rng, -10, 10));
            fs.push_back(random_poly(rng, -10, 10));
        }
        Outcome o = both_ways("random #" + std::to_string(t), sequence_from_list(Side::P, as),
                              sequence_from_list(Side::F, fs));
        if (!o.pass) return o;
    }
    return {true, "3 builtins and 200 random sequences, both directions, indices 0..50"};
}

Outcome c5_sigma_products() {
    int n_ok = 0;
    for (long long m = -6; m <= 0; ++m)
        for (long long n = -6; n <= 0; ++n) {
            if (!verify_sigma_product(m, n, 10, 40))
                return fail("m=" + std::to_string(m) + " n=" + std::to_string(n));
            ++n_ok;
        }
    return {true, std::to_string(n_ok) + " pairs"};
}

// random family obeying the lower bound condition with constant c
OmegaElement random_lbc(std::mt19937_64& rng, long long depth) {
    std::uniform_int_distribution<int> cc(-2, 2);
    long long c = cc(rng);
    std::vector<QSeries> as;
    for (long long k = 0; k < depth; ++k) {
        Rat lo = lbc_profile(k) + Rat(c);
        int base = (int)boost::rational_cast<long long>(lo);
        as.push_back(random_poly(rng, base, base + 3));
    }
    CoeffSeq a = sequence_from_list(Side::P, as);
    a.set_sigma0(random_poly(rng, 0, 3));
    a.set_lbc_constant(c);
    return {a, lbc_check(a, depth)};
}

bool same_product(const OmegaProduct& x, const OmegaProduct& y, Rat prec, std::string* where) {
    for (const auto& [l, v] : x.c) {
        if (!same_to(v, y.c.at(l), prec)) {
            *where = "l=" + std::to_string(l);
            return false;
        }
    }
    return true;
}

Outcome c6_ring_laws() {
    const long long depth = 8;
    const Rat prec = 30;
    std::mt19937_64 rng(7);
    std::string where;
    const int triples = 50;
    for (int t = 0; t < triples; ++t) {
        OmegaElement x = random_lbc(rng, depth), y = random_lbc(rng, depth), z = random_lbc(rng, depth);
        OmegaProduct xy = omega_mul(x, y, depth, prec), yx = omega_mul(y, x, depth, prec);
        if (!same_product(xy, yx, prec, &where)) return fail("commutativity, triple " + std::to_string(t) + " " + where);
        OmegaProduct yz = omega_mul(y, z, depth, prec);
        OmegaElement exy{xy.seq, lbc_check(xy.seq, depth, prec)};
        OmegaElement eyz{yz.seq, lbc_check(yz.seq, depth, prec)};
        OmegaProduct left = omega_mul(exy, z, depth, prec), right = omega_mul(x, eyz, depth, prec);
        if (!same_product(left, right, prec, &where))
            return fail("associativity, triple " + std::to_string(t) + " " + where);
    }
    CoeffSeq l = reg().a_seq("3_1l"), r = reg().a_seq("3_1r");
    OmegaElement el{l, lbc_check(l, 30)}, er{r, lbc_check(r, 30)};
    if (!lbc_product_bound(omega_mul(el, el, depth, prec), -4)) return fail("3_1l#3_1l misses C=-4");
    if (!lbc_product_bound(omega_mul(er, er, depth, prec), 0)) return fail("3_1r#3_1r misses C=0");
    return {true, std::to_string(triples) + " random triples; bounds C=-4 and C=0 hold"};
}

Outcome c7_surgery() {
    const Rat prec = 40;
    int agree = 0, total = 0;
    std::vector<std::string> bad;
    for (const char* k : kKnots)
        for (long long p : {-1, -2, -3})
            for (long long a = 0; a < -p; ++a) {
                ++total;
                std::ostringstream tag;
                tag << k << " p=" << p << " a=" << a;
                try {
                    SurgeryParams sp;
                    sp.p = p;
                    sp.a = a;
                    sp.prec = prec;
                    sp.method = SurgeryMethod::FK;
                    ZhatResult zf = zhat(reg().a_seq(k), reg().f_seq(k), sp);
                    sp.method = SurgeryMethod::Residues;
                    ZhatResult zr = zhat(reg().a_seq(k), reg().f_seq(k), sp);
                    sp.method = SurgeryMethod::IH;
                    ZhatResult zi = zhat(reg().a_seq(k), reg().f_seq(k), sp);
                    if (zhat_agree(zf, zr, prec) && zhat_agree(zr, zi, prec))
                        ++agree;
                    else
                        bad.push_back(tag.str() + " (routes differ)");
                } catch (const std::exception& e) {
                    bad.push_back(tag.str() + " (" + e.what() + ")");
                }
            }
    std::string detail = std::to_string(agree) + "/" + std::to_string(total) + " agree";
    for (const auto& b : bad) detail += "; " + b;
    return {bad.empty(), detail};
}

Outcome c8_park() {
    int n = 0;
    for (long long p = 1; p <= 3; ++p)
        for (long long a = 0; a < p; ++a) {
            for (long long k = 1; k <= 10; ++k) {
                QSeries e = park_poly_explicit(p, a, k), r = park_poly_residue(p, a, k);
                std::string tag = "p=" + std::to_string(p) + " a=" + std::to_string(a) + " k=" + std::to_string(k);
                if (e != r) return fail(tag + " explicit and residue differ");
                if (e.prec() || e.scale() != 1) return fail(tag + " not a Laurent polynomial");
                ++n;
            }
            std::cerr << "  park k=0 p=" << p << " a=" << a << ": explicit " << park_poly_explicit(p, a, 0).str()
                      << ", residue " << park_poly_residue(p, a, 0).str() << "\n";
        }
    return {true, std::to_string(n) + " polynomials"};
}

Outcome c9_lbc() {
    LbcReport r = lbc_check(reg().a_seq("3_1r"), 30), l = lbc_check(reg().a_seq("3_1l"), 30);
    if (!r.best_constant || *r.best_constant != 0) return fail("3_1r constant");
    if (!l.best_constant || *l.best_constant != -2) return fail("3_1l constant");
    return {true, "3_1r C=0, 3_1l C=-2"};
}

Outcome c10_recurrences() {
    std::string why;
    if (!trefoil_recurrence_check(Trefoil::Left, reg().a_seq("3_1l"), 6, 40, &why)) return fail("3_1l: " + why);
    if (!trefoil_recurrence_check(Trefoil::Right, reg().a_seq("3_1r"), 6, 40, &why)) return fail("3_1r: " + why);
    return {true, "both recurrences, j=0..5"};
}

Outcome c11_tails() {
    std::string info;
    for (Parity par : {Parity::Even, Parity::Odd}) {
        TailResult t = tail_check(reg().f_seq("4_1"), par, 10, 40);
        std::string k = par == Parity::Even ? "k=20" : "k=21";
        if (t.agree_to < 8) return fail(k + " first differs at q^" + std::to_string(t.agree_to));
        info += k + " agrees to q^" + std::to_string(t.agree_to) + " ";
    }
    return {true, info};
}

Outcome c12_branch() {
    const Rat prec = 40;
    CoeffSeq a = reg().a_seq("4_1");
    for (long long j = -3; j <= 3; ++j) {
        QSeries plus = branch_residue_41(Branch::PlusHalf, j, prec);
        QSeries r = residue_j(a, j, prec);
        QSeries want = mul(r, inv_qpoch(std::nullopt, prec - *r.low()), prec);
        if (!same_to(plus, want, prec)) return fail("j=" + std::to_string(j) + ": " + head(plus - want));
    }
    return {true, "|j| <= 3"};
}

std::string real_str(const Real& x, int digits = 15) { return x.str(digits, std::ios_base::fixed); }

Outcome c13_period() {
    PrecisionScope ps(256);
    PeriodResult r = periodicity_check(reg(), "4_1", 100, 256, Real("1e-9"));
    if (!r.found) return fail("no period up to n=100");
    std::string got = "period " + std::to_string(r.period) + " values {";
    for (size_t i = 0; i < r.multiset.size(); ++i) got += (i ? ", " : "") + real_str(r.multiset[i], 12);
    got += "}";
    if (r.period != 5) return fail(got);
    std::vector<Real> want = {(3 - sqrt(Real(5))) / 2, Real(1), Real(1), Real(2), Real(2)};
    for (int i = 0; i < 5; ++i)
        if (abs(r.multiset[i] - want[i]) > Real("1e-9")) return fail(got + " expected {(3-sqrt5)/2, 1, 1, 2, 2}");
    return {true, got};
}

Outcome c14_growth() {
    PrecisionScope ps(256);
    GrowthResult g = growth_rate(reg(), "4_1", {150, 160, 170, 180, 190, 200}, 256);
    Real err = abs(g.estimate - vol_41());
    std::string info = "estimate " + real_str(g.estimate) + ", vol " + real_str(vol_41()) + ", error " +
                       err.str(3, std::ios_base::scientific);
    return {err < Real("1e-3"), info};
}

Outcome c15_phi() {
    PhiFit f = extract_phi(reg(), "4_1", 3, 400, 512);
    PrecisionScope ps(512);
    Real e1 = abs(f.c[1] / 4 - 1), e2 = abs(f.c[2] / 304 - 1);
    std::string info = "c1 " + real_str(f.c[1], 6) + " c2 " + real_str(f.c[2], 4) + (f.flagged ? " (unstable fit)" : "");
    return {e1 < Real("0.01") && e2 < Real("0.02"), info};
}

Outcome c16_quotient() {
    std::vector<mpz_class> q = phi_quotient_check(3);
    std::vector<mpz_class> want = {1, 9, 513, 109593};
    std::string got;
    for (const auto& v : q) got += (got.empty() ? "" : ", ") + v.get_str();
    return {q == want, "(" + got + ")"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    std::vector<int> only;
    bool skip_slow = false, slow_only = false;
    app.add_option("--only", only, "run just these criteria")->delimiter(',');
    app.add_flag("--skip-slow", skip_slow, "leave out the slow criteria");
    app.add_flag("--slow-only", slow_only, "run only the slow criteria");
    CLI11_PARSE(app, argc, argv);

    std::vector<Criterion> all = {
        {1, "residue tables", 10, false, c1_tables},
        {2, "residue theorem identities", 30, false, c2_residue_theorem},
        {3, "theta route", 60, false, c3_theta},
        {4, "transform round trip", 60, false, c4_round_trip},
        {5, "sigma products", 120, false, c5_sigma_products},
        {6, "ring laws", 60, false, c6_ring_laws},
        {7, "surgery cross-route", 300, false, c7_surgery},
        {8, "park polynomials", 120, false, c8_park},
        {9, "lbc constants", 1, false, c9_lbc},
        {10, "trefoil recurrences", 10, false, c10_recurrences},
        {11, "tails", 30, false, c11_tails},
        {12, "nonabelian branch", 30, false, c12_branch},
        {13, "periodicity", 120, false, c13_period},
        {14, "volume growth", 600, false, c14_growth},
        {15, "phi extraction", 1800, true, c15_phi},
        {16, "quotient integrality", 1, false, c16_quotient},
    };

    std::set<int> pick(only.begin(), only.end());
    int failed = 0;
    for (const auto& c : all) {
        if (!pick.empty() && !pick.count(c.id)) continue;
        if (skip_slow && c.slow) continue;
        if (slow_only && !c.slow) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("error: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over budget";
        }
        if (!o.pass) ++failed;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << secs << " s / "
             << c.budget_s << " s)";
        if (!o.detail.empty()) line << ": " << o.detail;
        std::cout << line.str() << std::endl;
    }
    return failed ? 1 : 0;
}
