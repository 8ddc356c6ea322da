#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhabiro/asympt.hpp"

using namespace qh;

namespace {

const Registry& reg() {
    static Registry r = Registry::with_builtins();
    return r;
}

double d(const Real& x) { return x.convert_to<double>(); }

}  // namespace

TEST_CASE("evaluation at roots of unity") {
    PrecisionScope ps(256);
    CHECK(d((eval_root_of_unity(QSeries::one(), 7, 128) - ComplexHP(Real(1))).abs()) < 1e-30);
    ComplexHP two = eval_root_of_unity(QSeries::from_ints(0, {1, -1}), 2, 128);
    CHECK(d((two - ComplexHP(Real(2))).abs()) < 1e-30);
    QSeries f3 = f_poly_exact(reg(), "4_1", 3);
    CHECK(d((eval_root_of_unity(f3, 3, 128) - ComplexHP(Real(1))).abs()) < 1e-20);
    CHECK(d((eval_f41(3, 3, 128) - ComplexHP(Real(1))).abs()) < 1e-20);
    CHECK(f_poly_exact(reg(), "4_1", 2) == QSeries::from_ints(-1, {1, 3, 1}));
    // half-integer exponents: q^{1/2} at N = 2 is i
    ComplexHP h = eval_root_of_unity(QSeries::monomial(1, Rat(1, 2)), 2, 128);
    CHECK(d(abs(h.re)) < 1e-30);
    CHECK(d(h.im) == doctest::Approx(1));
    QSeries big = QSeries::from_ints(0, {1, 0, 0}).scaled(mpz_class(1) << 200);
    CHECK_THROWS_WITH(eval_root_of_unity(big, 5, 128), doctest::Contains("use at least"));
}

TEST_CASE("fast evaluation matches the exact polynomial") {
    PrecisionScope ps(256);
    for (long long n = 0; n <= 12; ++n) {
        QSeries f = f_poly_exact(reg(), "4_1", n);
        for (long long N : {1LL, 2LL, 3LL, n + 1, 2 * n + 1, 2 * n + 2, 3 * n + 5}) {
            INFO("n=" << n << " N=" << N);
            ComplexHP a = eval_root_of_unity(f, N, 256), b = eval_f41(n, N, 256);
            CHECK(d((a - b).abs()) < 1e-40);
        }
    }
}

TEST_CASE("figure-eight volume") {
    PrecisionScope ps(256);
    CHECK(d(abs(vol_41() - Real("2.0298832128193072500424051085490405718833786150605995840349782135531949525"))) <
          1e-60);
}

TEST_CASE("Richardson extrapolation") {
    PrecisionScope ps(256);
    std::vector<Real> v, w;
    for (int n = 1; n <= 10; ++n) {
        v.push_back(1 + Real(1) / n);
        w.push_back(1 + Real(1) / n + Real(2) / (n * n) + Real(6) / (n * n * n));
    }
    CHECK(d(abs(richardson(v, 3) - 1)) < 1e-9);
    CHECK(d(abs(richardson(w, 3) - 1)) < 1e-40);
    CHECK(d(abs(richardson(v, 0) - v.back())) == 0);
    CHECK_THROWS(richardson(std::vector<Real>{Real(1)}, 2));
}

TEST_CASE("periodicity of f_n at zeta_n") {
    Real tol("1e-9");
    PeriodResult p = periodicity_check(reg(), "4_1", 50, 256, tol);
    REQUIRE(p.found);
    CHECK(p.period == 5);
    PeriodResult q = periodicity_check(reg(), "4_1", 100, 256, tol);
    CHECK(q.period == 5);
    CHECK(d(p.imag_max) < 1e-30);
    // computed cycle starting at n = 1
    std::vector<double> want = {2, 1, 1, 2, (3 + std::sqrt(5.0)) / 2};
    for (int i = 0; i < 5; ++i) CHECK(d(p.values[i]) == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("growth rate") {
    std::vector<long long> ns = {150, 160, 170, 180, 190, 200};
    GrowthResult g = growth_rate(reg(), "4_1", ns, 256);
    CHECK(d(g.estimate) == doctest::Approx(2.0298832128193).epsilon(1e-6));
    std::vector<long long> half = {75, 80, 85, 90, 95, 100};
    GrowthResult h = growth_rate(reg(), "4_1", half, 256);
    CHECK(d(abs(h.estimate - g.estimate)) < 1e-2);
    GrowthResult u = growth_rate(reg(), "unknot", {5, 6, 7}, 128);
    CHECK(u.trivial);
    CHECK(d(u.estimate) == 0);
}

TEST_CASE("perturbative series") {
    PerturbSeries one{{mpq_class(1), mpq_class(0), mpq_class(0)}, ""};
    CHECK(series_sqrt(one).c == one.c);
    PerturbSeries f = phi_f_data();
    CHECK(series_sqrt(f).c[1] == 2);
    PerturbSeries prod = series_mul(f, series_inv(f));
    CHECK(prod.c[0] == 1);
    for (size_t k = 1; k < prod.c.size(); ++k) CHECK(prod.c[k] == 0);
    PerturbSeries s = series_sqrt(f);
    PerturbSeries sq = series_mul(s, s);
    CHECK(sq.c == f.c);
    CHECK_THROWS(series_sqrt(PerturbSeries{{mpq_class(2)}, ""}));
    auto q = phi_quotient_check(3);
    REQUIRE(q.size() == 4);
    CHECK(q[0] == 1);
    CHECK(q[1] == 9);
    CHECK(q[2] == 513);
    CHECK(q[3] == 109593);
    for (const auto& c : q) CHECK(c % 8 == 1);
    CHECK_THROWS(phi_quotient_check(4));
}

TEST_CASE("perturbative coefficients from the numerics") {
    PhiFit fit = extract_phi(reg(), "4_1", 2, 240, 384);
    CHECK(d(fit.c[0]) == doctest::Approx(1).epsilon(1e-6));
    CHECK(d(fit.c[1]) == doctest::Approx(4).epsilon(1e-4));
    CHECK(d(fit.c[2]) == doctest::Approx(304).epsilon(1e-3));
}
