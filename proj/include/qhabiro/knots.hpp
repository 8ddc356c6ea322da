#pragma once

#include "qhabiro/json_io.hpp"
#include "qhabiro/omega.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace qh {

// Generator a_{-k-1} = (-1)^{alpha k + beta} q^{c2 k^2 + c1 k + c0}
struct MonomialGen {
    long long alpha = 0, beta = 0;
    Rat c2 = 0, c1 = 0, c0 = 0;

    Rat exponent(long long k) const { return c2 * k * k + c1 * k + c0; }
    int sign(long long k) const { return ((alpha * k + beta) % 2 == 0) ? 1 : -1; }
};

struct KnotSpec {
    enum class Kind { Builtin, Monomial, List, Composite };
    std::string name;
    Kind kind = Kind::Monomial;
    MonomialGen mono;
    std::vector<QSeries> list;
    std::vector<std::string> summands;
    QSeries sigma0;
    std::string f_closed_form;  // "builtin:<name>" or empty
    std::string chirality;
    std::string crossing;
};

// Failures while reading knot files carry a stable code.
struct LoadError : Error {
    std::string code;
    LoadError(std::string c, const std::string& msg) : Error(msg), code(std::move(c)) {}
};

class Registry {
public:
    // registry holding 3_1l, 3_1r, 4_1 and unknot
    static Registry with_builtins();

    void add(KnotSpec spec);
    void load_json(const json& j);
    void load_file(const std::string& path);

    bool has(const std::string& name) const { return specs_.count(name) > 0; }
    const KnotSpec& get(const std::string& name) const;
    std::vector<std::string> names() const;

    CoeffSeq a_seq(const std::string& name) const;
    CoeffSeq f_seq(const std::string& name) const;
    QSeries a_coeff(const std::string& name, long long k, OptRat prec = std::nullopt) const;
    QSeries f_coeff(const std::string& name, long long k, OptRat prec = std::nullopt) const;

    // q -> q^{-1} on every coefficient; needs an exact generator
    KnotSpec mirror(const std::string& name, const std::string& new_name = "") const;

private:
    CoeffSeq build_a(const KnotSpec& s, int depth) const;
    std::map<std::string, KnotSpec> specs_;
    mutable std::map<std::string, CoeffSeq> a_cache_;
    mutable std::map<std::string, CoeffSeq> f_cache_;
    mutable std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
};

// closed forms of GM coefficients for the built-in knots
QSeries f_closed_41(long long n, OptRat prec = std::nullopt);
QSeries f_closed_trefoil_left(long long k);
QSeries f_closed_trefoil_right(long long k);

// smallest constant c with deg a_{-k-1} >= lbc_profile(k) + c for all k, when
// the generator satisfies the lower bound condition
std::optional<long long> monomial_lbc_constant(const MonomialGen& g);

}  // namespace qh
