#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhabiro/knots.hpp"

#include <random>

using namespace qh;

namespace {

QSeries P(long long off, std::vector<long long> c, OptRat prec = std::nullopt) {
    return QSeries::from_ints(off, c, prec);
}

QSeries q(Rat e) { return QSeries::monomial(1, e); }

}  // namespace

TEST_CASE("series arithmetic") {
    CHECK((P(0, {1, -1}) + q(1)) == QSeries::one());
    CHECK((P(-1, {1, 1, 1}) * P(-1, {1, 1, 1})) == P(-2, {1, 2, 3, 2, 1}));
    QSeries half = QSeries::from_ints(0, {1, 1}, Rat(2)) + q(Rat(1, 2));
    CHECK(half.scale() == 2);
    CHECK(half.coeff(Rat(1, 2)) == 1);
    CHECK(half.coeff(1) == 1);
    CHECK((*half.prec() == 2));

    QSeries geo = P(0, {1, 1, 1, 1, 1, 1}, Rat(6));
    QSeries one = P(0, {1, -1}) * geo;
    CHECK(one == QSeries::one().truncate(6));
    CHECK((*(q(2) * q(3)).low() == 5));
    CHECK(QSeries().delta().kind == Degree::Kind::Infinite);
}

TEST_CASE("long products match schoolbook") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<long long> x(60 + trial), y(50 + 2 * trial);
        // runs of -1 and +1 force borrows and carries through every packed digit
        for (auto& v : x) v = (rng() % 3) - 1;
        for (auto& v : y) v = trial % 2 ? (long long)(rng() % 2001) - 1000 : -1;
        QSeries a = QSeries::from_ints(-3, x), b = QSeries::from_ints(2, y);
        std::vector<long long> want(x.size() + y.size() - 1, 0);
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j) want[i + j] += x[i] * y[j];
        CHECK(a * b == QSeries::from_ints(-1, want));
    }
}

TEST_CASE("series inversion and printing") {
    CHECK(invert_unit(P(0, {1, -1}), 4) == P(0, {1, 1, 1, 1}, Rat(4)));
    CHECK(inv_qpoch(std::nullopt, 6) == P(0, {1, 1, 2, 3, 5, 7}, Rat(6)));
    CHECK_THROWS_WITH(invert_unit(P(0, {2, 1}), 4), doctest::Contains("not invertible over integers"));
    CHECK(P(-1, {3, 1, 2}, Rat(10)).str() == "3*q^-1 + 1 + 2*q + O(q^10)");
    CHECK(q(Rat(1, 2)).str() == "q^(1/2)");
}

TEST_CASE("series substitution and mirror") {
    CHECK(P(0, {1, 1}).subst_qpow(2) == P(0, {1, 0, 1}));
    CHECK(q(Rat(1, 2)).subst_qpow(2) == q(1));
    CHECK(q(Rat(1, 2)).subst_qpow(2).scale() == 1);
    QSeries x = P(-2, {1, 0, 3, -1});
    CHECK(x.mirror().mirror() == x);
    CHECK_THROWS_WITH(P(0, {1}, Rat(3)).mirror(), doctest::Contains("mirror requires exact polynomial"));
}

TEST_CASE("bounded sums") {
    TermGen t = [](long long k, Rat) { return QSeries::monomial(1, k); };
    DegreeBound b{[](long long k) { return Rat(k); }, 0};
    CHECK(sum_bounded(t, b, 3) == P(0, {1, 1, 1}, Rat(3)));
    TermGen bad = [](long long k, Rat) { return QSeries::monomial(1, k - 1); };
    CHECK_THROWS_WITH(sum_bounded(bad, b, 3), doctest::Contains("degree bound violated at k"));
}

TEST_CASE("q-analogs") {
    CHECK(qint(0).is_zero());
    CHECK(qint(3) == P(-1, {1, 1, 1}));
    CHECK(qbinom(4, 2) == P(-2, {1, 1, 2, 1, 1}));
    CHECK(qbinom(2, 3).is_zero());
    CHECK(qbinom(-1, 2) == QSeries::one());
    CHECK(curly_poch(0, 1).is_zero());
    // {2}_2 in v = q^{1/2}
    QSeries c22 = curly_poch(2, 2);
    CHECK(c22 == q(Rat(3, 2)) - q(Rat(1, 2)) - q(Rat(-1, 2)) + q(Rat(-3, 2)));
    CHECK((*curly_poch_delta(3, 2) == Rat(-5, 2)));
    CHECK(qpoch(3) == P(0, {1, -1, -1, 0, 1, 1, -1}));
    CHECK(qpoch(0) == QSeries::one());
    CHECK(qpoch(std::nullopt, Rat(6)) == P(0, {1, -1, -1, 0, 0, 1}, Rat(6)));
    CHECK_THROWS_WITH(poch(0, std::nullopt, Rat(5)), doctest::Contains("divergent Pochhammer"));
    CHECK(jacobi_symbol(3, 5) == -1);
    CHECK(jacobi_symbol(3, 3) == 0);
    CHECK(jacobi_symbol(3, 1) == 1);
    CHECK_THROWS(jacobi_symbol(3, 4));
    auto th0 = theta_trunc(0, 2, 10);
    CHECK(th0[0].truncate(10) == QSeries::one().truncate(10));
    CHECK(th0[1].truncate(10) == (-q(1)).truncate(10));
    auto th1 = theta_trunc(1, 2, 10);
    CHECK(th1[0] == (-q(1)).truncate(10));
    CHECK(jacobi_theta_coeff(0) == std::pair<int, long long>(1, 0));
    CHECK(jacobi_theta_coeff(2) == std::pair<int, long long>(1, 1));
    CHECK(jacobi_theta_coeff(-1) == std::pair<int, long long>(-1, 1));
}

TEST_CASE("sigma expansions and transforms") {
    auto e0 = sigma_tilde_x_expansion(0, 5);
    for (const auto& x : e0) CHECK(x == QSeries::one());
    CHECK(sigma_tilde_x_expansion(1, 1)[1] == P(-1, {1, 1, 1}));
    CHECK(sigma_tilde_x_expansion(2, 0)[0] == QSeries::one());

    Registry reg = Registry::with_builtins();
    CHECK(reg.a_coeff("3_1r", 0) == -q(1));
    CHECK(reg.f_coeff("4_1", 2) == P(-1, {1, 3, 1}));
    CHECK(reg.f_coeff("3_1l", 1).is_zero());
    CHECK(reg.f_coeff("3_1l", 0) == -q(-1));
    CHECK(f_from_a(reg.a_seq("4_1")).at(2) == P(-1, {1, 3, 1}));

    CoeffSeq f41(Side::F, [](long long k, OptRat p) { return f_closed_41(k, p); });
    CoeffSeq a41 = a_from_f(f41);
    for (long long k = 0; k <= 8; ++k) CHECK(a41.at(k) == QSeries::one());
    CoeffSeq zero(Side::F, [](long long, OptRat) { return QSeries(); });
    CHECK(a_from_f(zero).at(3).is_zero());
}

TEST_CASE("lower bound condition") {
    Registry reg = Registry::with_builtins();
    CHECK((*lbc_check(reg.a_seq("3_1r"), 20).best_constant == 0));
    CHECK((*lbc_check(reg.a_seq("3_1l"), 20).best_constant == -2));
    CHECK((*lbc_check(reg.a_seq("4_1"), 20).best_constant == -1));
    CHECK(fk_degree_check(reg.f_seq("3_1r"), 0, 15));
    CHECK(fk_degree_check(reg.f_seq("4_1"), -1, 15));
    CoeffSeq zero(Side::F, [](long long, OptRat) { return QSeries(); });
    CHECK(fk_degree_check(zero, 0, 15));
    for (long long n = 0; n <= 12; ++n) CHECK((*reg.f_coeff("4_1", n).low() == -(n * n / 4)));
}

TEST_CASE("omega ring") {
    CHECK(gamma(-3, 4, 0) == QSeries::one());
    CHECK(gamma(-1, -1, 1) == P(-1, {-1, 2, -1}));
    CHECK(gamma(1, 5, 2).is_zero());
    CHECK(verify_sigma_product(0, -4, 6, 20));
    CHECK(verify_sigma_product(-1, -1, 6, 40));
    CHECK(verify_sigma_product(-3, 2, 6, 40));

    Registry reg = Registry::with_builtins();
    OmegaElement u{reg.a_seq("unknot"), std::nullopt};
    OmegaElement f8{reg.a_seq("4_1"), lbc_check(reg.a_seq("4_1"), 20)};
    auto prod = omega_mul(u, f8, 6, std::nullopt);
    for (long long l = -6; l < 0; ++l) CHECK(prod.c[l] == QSeries::one());
    OmegaElement bare{reg.a_seq("4_1"), std::nullopt};
    CHECK_THROWS_WITH(omega_mul(bare, bare, 3, Rat(10)), doctest::Contains("LBC required"));

    OmegaElement l{reg.a_seq("3_1l"), lbc_check(reg.a_seq("3_1l"), 20)};
    OmegaElement r{reg.a_seq("3_1r"), lbc_check(reg.a_seq("3_1r"), 20)};
    CHECK(lbc_product_bound(omega_mul(l, l, 8, Rat(30)), -4));
    CHECK(lbc_product_bound(omega_mul(r, r, 8, Rat(30)), 0));
}

TEST_CASE("registry loading") {
    Registry reg = Registry::with_builtins();
    json fig8 = json::parse(R"({"name": "fig8", "generator": {"kind": "monomial", "sign": {"alpha": 0, "beta": 0},
        "exponent": {"c2": 0, "c1": 0, "c0": 0}}, "f_closed_form": "builtin:4_1"})");
    reg.load_json(fig8);
    for (long long k = 0; k < 6; ++k) CHECK(reg.f_coeff("fig8", k) == reg.f_coeff("4_1", k));

    json bad = json::parse(R"({"name": "bad", "generator": {"kind": "monomial", "sign": {"alpha": 0, "beta": 0},
        "exponent": {"c2": "1/5", "c1": 0, "c0": 0}}})");
    try {
        reg.load_json(bad);
        FAIL("expected integrality error");
    } catch (const LoadError& e) {
        CHECK(e.code == "integrality");
    }

    json cyc = json::parse(R"([{"name": "x", "generator": {"kind": "composite", "summands": ["y"]}},
        {"name": "y", "generator": {"kind": "composite", "summands": ["x"]}}])");
    try {
        reg.load_json(cyc);
        FAIL("expected cycle error");
    } catch (const LoadError& e) {
        CHECK(e.code == "cycle");
    }

    try {
        reg.load_json(json::parse(R"({"generator": {}})"));
        FAIL("expected schema error");
    } catch (const LoadError& e) {
        CHECK(e.code == "schema");
    }

    json lst = json::object();
    lst["name"] = "five";
    lst["generator"]["kind"] = "list";
    lst["generator"]["coeffs"] = json::array();
    for (int i = 0; i < 5; ++i) lst["generator"]["coeffs"].push_back(to_json(QSeries::one()));
    reg.load_json(lst);
    CHECK_THROWS_WITH(reg.a_coeff("five", 7), doctest::Contains("index beyond provided data"));
}

TEST_CASE("mirrors") {
    Registry reg = Registry::with_builtins();
    reg.add(reg.mirror("3_1l", "m"));
    for (long long k = 0; k <= 10; ++k) CHECK(reg.a_coeff("m", k) == reg.a_coeff("3_1r", k));
    reg.add(reg.mirror("m", "mm"));
    for (long long k = 0; k <= 10; ++k) CHECK(reg.a_coeff("mm", k) == reg.a_coeff("3_1l", k));
    reg.add(reg.mirror("4_1", "m41"));
    for (long long k = 0; k <= 10; ++k) CHECK(reg.a_coeff("m41", k) == QSeries::one());
}

TEST_CASE("json round trip") {
    QSeries s = P(-1, {3, 0, -2}, Rat(7)) + q(Rat(1, 2));
    json j = to_json(s);
    CHECK(series_from_json(j) == s);
    CHECK(to_json(series_from_json(j)).dump() == j.dump());
}

TEST_CASE("transform round trip on random polynomial sequences") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-3, 3), deg(-8, 8);
    for (int t = 0; t < 10; ++t) {
        std::vector<QSeries> data;
        for (int k = 0; k < 8; ++k) {
            int lo = deg(rng), len = 1 + std::abs(deg(rng)) % 4;
            std::vector<long long> c(len);
            for (auto& x : c) x = coef(rng);
            data.push_back(P(lo, c));
        }
        CoeffSeq a = sequence_from_list(Side::P, data);
        CoeffSeq back = a_from_f(f_from_a(a, 7), 7);
        for (int k = 0; k < 8; ++k) CHECK(back.at(k) == data[k]);
    }
}

TEST_CASE("block transforms match the termwise sums") {
    Registry reg = Registry::with_builtins();
    for (const char* k : {"3_1l", "4_1"}) {
        CoeffSeq a = reg.a_seq(k), f = reg.f_seq(k);
        CoeffSeq fb = f_from_a(a, 15), ft = f_from_a(a);
        CoeffSeq ab = a_from_f(f, 15), at = a_from_f(f);
        for (long long i = 0; i <= 15; ++i) {
            CHECK(fb.at(i) == ft.at(i));
            CHECK(ab.at(i) == at.at(i));
        }
    }
    CoeffSeq u = reg.a_seq("unknot");
    CHECK(f_from_a(u, 3).at(0) == f_from_a(u).at(0));
}
