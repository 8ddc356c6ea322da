#include "qhabiro/verify.hpp"

#include "qhabiro/qcomb.hpp"
#include "qhabiro/residue.hpp"

namespace qh {

namespace {

VerifyResult ok(Rat prec) { return {true, prec, ""}; }

VerifyResult fail(Rat prec, std::string why) { return {false, prec, std::move(why)}; }

std::string first_defect(const QSeries& d) {
    if (d.is_zero()) return "";
    return "defect starts at q^" + rat_str(*d.low()) + ": " + d.str();
}

VerifyResult defect_zero(const CoeffSeq& a, Rat prec, int jobs) {
    QSeries d = residue_theorem_check(a, prec, jobs);
    if (!d.is_zero()) return fail(prec, first_defect(d));
    return ok(prec);
}

const char* kKnots[] = {"3_1l", "3_1r", "4_1"};

VerifyResult symmetry(const Registry& reg, Rat prec) {
    for (const char* k : kKnots) {
        CoeffSeq a = reg.a_seq(k);
        for (long long j = 1; j <= 4; ++j) {
            QSeries d = residue_j(a, -j, prec) - residue_j(a, j, prec + j).shift(-j);
            if (!d.is_zero()) return fail(prec, std::string(k) + " j=" + std::to_string(j) + ": " + first_defect(d));
        }
    }
    return ok(prec);
}

VerifyResult theta(const Registry& reg, Rat prec) {
    for (const char* k : kKnots) {
        for (long long j = -3; j <= 3; ++j) {
            QSeries d = residues_from_f(reg.f_seq(k), j, prec) - residue_j(reg.a_seq(k), j, prec);
            if (!d.is_zero()) return fail(prec, std::string(k) + " j=" + std::to_string(j) + ": " + first_defect(d));
        }
    }
    return ok(prec);
}

VerifyResult recurrence(const Registry& reg, Trefoil t, Rat prec) {
    std::string why;
    const char* k = t == Trefoil::Left ? "3_1l" : "3_1r";
    if (!trefoil_recurrence_check(t, reg.a_seq(k), 5, prec, &why)) return fail(prec, why);
    return ok(prec);
}

VerifyResult tails(const Registry& reg, Parity parity, Rat prec) {
    long long n = 10;  // k = 20 or 21
    TailResult r = tail_check(reg.f_seq("4_1"), parity, n, prec);
    // eight displayed coefficients are the claim; deeper agreement is a bonus
    if (r.agree_to < 8)
        return fail(Rat(r.agree_to), "first disagreement at q^" + std::to_string(r.agree_to));
    return ok(Rat(r.agree_to));
}

VerifyResult branch(const Registry& reg, Rat prec) {
    for (long long j = -3; j <= 3; ++j) {
        QSeries plus = branch_residue_41(Branch::PlusHalf, j, prec);
        QSeries r = residue_j(reg.a_seq("4_1"), j, prec);
        QSeries d = plus - mul(r, inv_qpoch(std::nullopt, prec - *r.low()), prec);
        if (!d.is_zero()) return fail(prec, "j=" + std::to_string(j) + ": " + first_defect(d));
    }
    return ok(prec);
}

VerifyResult descendant_g0(const Registry& reg, Rat prec) {
    CoeffSeq a = reg.a_seq("4_1");
    for (long long m = 0; m <= 3; ++m) {
        // G_0^{(m)} = -sum_k (-1)^k q^{binom(k+1,2) + km} / (q)_k^2
        QSeries g = QSeries::zero_to(prec);
        for (long long k = 0; Rat(binom2(k + 1) + k * m) < prec; ++k) {
            Rat e = binom2(k + 1) + k * m;
            QSeries inv = inv_qpoch(k, prec - e);
            g += mul(inv, inv, prec - e).shift(e).scaled(k % 2 ? 1 : -1);
        }
        QSeries d = residue_j(descendant(a, m), 0, prec) - g;
        if (!d.is_zero()) return fail(prec, "m=" + std::to_string(m) + ": " + first_defect(d));
    }
    return ok(prec);
}

}  // namespace

std::string VerifyResult::message() const {
    if (ok) return "OK: defect 0 to O(q^" + rat_str(prec) + ")";
    return "FAIL: " + detail;
}

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names = {
        "pentagonal", "hecke-rogers", "fig8-sum", "residue-symmetry", "theta-route", "trefoil-recurrence-l",
        "trefoil-recurrence-r", "tails-even", "tails-odd", "branch-half", "descendant-g0"};
    return names;
}

VerifyResult run_identity(const std::string& name, const Registry& reg, Rat prec, int jobs) {
    if (name == "pentagonal") return defect_zero(reg.a_seq("3_1l"), prec, jobs);
    if (name == "hecke-rogers") return defect_zero(reg.a_seq("3_1r"), prec, jobs);
    if (name == "fig8-sum") return defect_zero(reg.a_seq("4_1"), prec, jobs);
    if (name == "residue-symmetry") return symmetry(reg, prec);
    if (name == "theta-route") return theta(reg, prec);
    if (name == "trefoil-recurrence-l") return recurrence(reg, Trefoil::Left, prec);
    if (name == "trefoil-recurrence-r") return recurrence(reg, Trefoil::Right, prec);
    if (name == "tails-even") return tails(reg, Parity::Even, prec);
    if (name == "tails-odd") return tails(reg, Parity::Odd, prec);
    if (name == "branch-half") return branch(reg, prec);
    if (name == "descendant-g0") return descendant_g0(reg, prec);
    throw Error("unknown identity: " + name);
}

}  // namespace qh
