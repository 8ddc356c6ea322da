#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhabiro/knots.hpp"
#include "qhabiro/surgery.hpp"

using namespace qh;

namespace {

const Registry& reg() {
    static Registry r = Registry::with_builtins();
    return r;
}

SurgeryParams params(long long p, long long a, Rat prec, SurgeryMethod m) {
    SurgeryParams sp;
    sp.p = p;
    sp.a = a;
    sp.prec = prec;
    sp.method = m;
    return sp;
}

ZhatResult run(const char* knot, const SurgeryParams& sp) {
    return zhat(reg().a_seq(knot), reg().f_seq(knot), sp);
}

}  // namespace

TEST_CASE("laplace monomials") {
    auto x = laplace_monomial(2, 0, -1, 0);
    REQUIRE(x);
    CHECK((*x == 4));
    CHECK_FALSE(laplace_monomial(1, 0, 2, 0));
    auto y = laplace_monomial(3, Rat(1, 2), 3, 0);
    REQUIRE(y);
    CHECK((*y == Rat(-5, 2)));
    auto z = laplace_monomial(-1, 0, 3, 2);
    REQUIRE(z);
    CHECK((*z == Rat(-1, 3)));
}

TEST_CASE("surgery polynomials") {
    QSeries l = surgery_poly(2, 1, 1);
    CHECK(l == QSeries::monomial(1, Rat(1, 2)) - QSeries::monomial(1, Rat(-1, 2)));
    CHECK(surgery_poly(-1, 0, 1) == QSeries::one() - QSeries::monomial(1, -1));
    CHECK(surgery_poly(-2, 1, 2, true) != surgery_poly(-2, 1, 2));
}

TEST_CASE("unknot smoke value") {
    for (auto m : {SurgeryMethod::Residues, SurgeryMethod::IH}) {
        ZhatResult z = run("unknot", params(-1, 0, 2, m));
        CHECK(z.series == QSeries::from_ints(0, {1, -1}, Rat(2)));
        CHECK(z.pow2 == 0);
    }
    // only one of x^{+-1} lands in the class, so all routes keep 2*Zhat
    ZhatResult f = run("unknot", params(3, 1, 4, SurgeryMethod::FK));
    CHECK(f.pow2 == 1);
    for (auto m : {SurgeryMethod::Residues, SurgeryMethod::IH}) CHECK(zhat_agree(f, run("unknot", params(3, 1, 4, m)), 4));
}

TEST_CASE("routes agree") {
    for (const char* k : {"3_1l", "4_1"}) {
        for (long long p : {-1, -2, -3}) {
            INFO(k << " p=" << p);
            for (long long a = 0; a < -p; ++a) {
                ZhatResult f = run(k, params(p, a, 12, SurgeryMethod::FK));
                ZhatResult r = run(k, params(p, a, 12, SurgeryMethod::Residues));
                ZhatResult h = run(k, params(p, a, 12, SurgeryMethod::IH));
                CHECK(zhat_agree(f, r, 12));
                CHECK(zhat_agree(r, h, 12));
            }
        }
    }
    for (long long p : {-1, -2}) {
        INFO("3_1r p=" << p);
        ZhatResult r = run("3_1r", params(p, 0, 8, SurgeryMethod::Residues));
        ZhatResult h = run("3_1r", params(p, 0, 8, SurgeryMethod::IH));
        CHECK(zhat_agree(r, h, 8));
    }
}

TEST_CASE("divergence is reported") {
    CHECK_THROWS_WITH(run("4_1", params(5, 0, 10, SurgeryMethod::FK)),
                      doctest::Contains("divergent or undecidable for these parameters"));
    CHECK_THROWS_WITH(run("3_1r", params(-3, 0, 10, SurgeryMethod::Residues)),
                      doctest::Contains("divergent or undecidable for these parameters"));
    CHECK_THROWS(run("4_1", params(0, 0, 10, SurgeryMethod::FK)));
    CHECK_THROWS(run("4_1", params(2, 2, 10, SurgeryMethod::FK)));
}

TEST_CASE("partial sums") {
    CoeffSeq a = reg().a_seq("4_1");
    CHECK(ih_partial_sum(a, -1, 0, 0, 10).is_exact_zero());
    QSeries s3 = ih_partial_sum(a, -1, 0, 3, 40);
    QSeries s4 = ih_partial_sum(a, -1, 0, 4, 40);
    CHECK_FALSE(s3.is_zero());
    CHECK(s3 != s4);
}

TEST_CASE("park polynomials") {
    for (long long k = 0; k < 5; ++k) CHECK(park_poly_explicit(1, 0, k) == (k ? QSeries::one() : QSeries()));
    CHECK(park_poly_explicit(2, 1, 2) == QSeries::from_ints(-1, {1, 1}));
    CHECK(park_poly_explicit(3, 1, 2) == QSeries::from_ints(-2, {1, 1, 1}));
    CHECK(park_poly_explicit(2, 0, 2) == QSeries::from_ints(-2, {1, 0, 1}));
    CHECK(park_poly_explicit(3, 2, 3) == QSeries::from_ints(-6, {1, 1, 2, 1, 2, 1, 1}));
    for (long long p = 1; p <= 3; ++p)
        for (long long a = 0; a < p; ++a)
            for (long long k = 1; k <= 10; ++k) {
                INFO("p=" << p << " a=" << a << " k=" << k);
                CHECK(park_poly_explicit(p, a, k) == park_poly_residue(p, a, k));
            }
    CHECK_THROWS(park_poly_explicit(-2, 0, 2));
}
