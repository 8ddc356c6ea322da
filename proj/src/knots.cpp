#include "qhabiro/knots.hpp"

#include <fstream>
#include <mutex>
#include <set>

namespace qh {

namespace {

constexpr long long kIntegralityWindow = 64;
constexpr long long kClosedFormCheck = 8;

KnotSpec monomial_spec(const std::string& name, MonomialGen g, const std::string& closed, const std::string& chir) {
    KnotSpec s;
    s.name = name;
    s.kind = KnotSpec::Kind::Builtin;
    s.mono = g;
    s.f_closed_form = closed;
    s.chirality = chir;
    s.crossing = name.substr(0, 3);
    return s;
}

void check_monomial(const KnotSpec& s) {
    for (long long k = 0; k <= kIntegralityWindow; ++k)
        if (s.mono.exponent(k).denominator() != 1)
            throw LoadError("integrality", "knot " + s.name + ": exponent not integral at k=" + std::to_string(k));
}

}  // namespace

std::optional<long long> monomial_lbc_constant(const MonomialGen& g) {
    Rat a = g.c2 + Rat(1, 2);
    Rat b = g.c1 - Rat(1, 2);
    if (a < 0 || (a == 0 && b < 0)) return std::nullopt;
    long long top = 64;
    if (a > 0) top = std::max<long long>(top, ceil(-b / (2 * a)) + 2);
    std::optional<Rat> best;
    for (long long k = 0; k <= top; ++k) {
        Rat v = g.exponent(k) - lbc_profile(k);
        if (!best || v < *best) best = v;
    }
    return qh::floor(*best);
}

QSeries f_closed_41(long long n, OptRat prec) {
    QSeries sum;
    if (prec) sum = QSeries::zero_to(*prec);
    for (long long i = 0; i <= n; ++i) sum += qbinom(n + i, 2 * i, prec);
    return sum;
}

QSeries f_closed_trefoil_left(long long k) {
    int j = jacobi_symbol(3, 2 * k + 1);
    if (j == 0) return {};
    return QSeries::monomial(-j, Rat(-k * (k + 1), 6) - 1);
}

QSeries f_closed_trefoil_right(long long k) {
    int j = jacobi_symbol(3, 2 * k + 1);
    if (j == 0) return {};
    return QSeries::monomial(-j, Rat(k * (k + 1), 6) + 1);
}

Registry Registry::with_builtins() {
    Registry r;
    r.add(monomial_spec("3_1l", {1, 1, Rat(1, 2), Rat(-1, 2), Rat(-1)}, "builtin:3_1l", "left"));
    r.add(monomial_spec("3_1r", {1, 1, Rat(-1, 2), Rat(1, 2), Rat(1)}, "builtin:3_1r", "right"));
    r.add(monomial_spec("4_1", {0, 0, 0, 0, 0}, "builtin:4_1", "amphichiral"));
    KnotSpec u;
    u.name = "unknot";
    u.kind = KnotSpec::Kind::List;
    u.sigma0 = QSeries::one();
    u.chirality = "amphichiral";
    u.crossing = "0_1";
    r.add(u);
    return r;
}

void Registry::add(KnotSpec spec) {
    if (spec.kind == KnotSpec::Kind::Monomial || spec.kind == KnotSpec::Kind::Builtin) check_monomial(spec);
    std::lock_guard lk(*mu_);
    a_cache_.erase(spec.name);
    f_cache_.erase(spec.name);
    specs_[spec.name] = std::move(spec);
}

const KnotSpec& Registry::get(const std::string& name) const {
    auto it = specs_.find(name);
    if (it == specs_.end()) throw Error("unknown knot: " + name);
    return it->second;
}

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    for (const auto& kv : specs_) out.push_back(kv.first);
    return out;
}

CoeffSeq Registry::build_a(const KnotSpec& s, int depth) const {
    if (depth > 64) throw LoadError("cycle", "composite nesting too deep at " + s.name);
    switch (s.kind) {
        case KnotSpec::Kind::Builtin:
        case KnotSpec::Kind::Monomial: {
            MonomialGen g = s.mono;
            CoeffSeq c(Side::P, [g](long long k, OptRat prec) {
                return QSeries::monomial(g.sign(k), g.exponent(k)).truncate_opt(prec);
            });
            c.set_floor([g](long long k) { return g.exponent(k); });
            c.set_lbc_constant(monomial_lbc_constant(g));
            return c;
        }
        case KnotSpec::Kind::List: {
            // an empty list is the single exact zero, which keeps the data finite
            CoeffSeq c = sequence_from_list(Side::P, s.list.empty() ? std::vector<QSeries>{QSeries()} : s.list);
            c.set_sigma0(s.sigma0);
            std::optional<Rat> best;
            bool known = true;
            for (size_t k = 0; k < s.list.size(); ++k) {
                auto lo = s.list[k].delta().lower();
                if (!lo) continue;
                if (!s.list[k].delta().finite()) known = false;
                Rat v = *lo - lbc_profile((long long)k);
                if (!best || v < *best) best = v;
            }
            if (known) c.set_lbc_constant(best ? qh::floor(*best) : 0);
            auto data = s.list;
            c.set_floor([data](long long k) -> Rat {
                if (k < (long long)data.size()) {
                    auto lo = data[k].delta().lower();
                    if (lo) return *lo;
                }
                return Rat(1000000000);
            });
            return c;
        }
        case KnotSpec::Kind::Composite: {
            if (s.summands.empty()) throw LoadError("schema", "composite knot without summands: " + s.name);
            CoeffSeq acc;
            for (const auto& name : s.summands) {
                CoeffSeq part = build_a(get(name), depth + 1);
                acc = acc.valid() ? omega_product_seq(acc, part) : part;
            }
            return acc;
        }
    }
    throw Error("unreachable knot kind");
}

CoeffSeq Registry::a_seq(const std::string& name) const {
    const KnotSpec& s = get(name);
    {
        std::lock_guard lk(*mu_);
        auto it = a_cache_.find(name);
        if (it != a_cache_.end()) return it->second;
    }
    CoeffSeq c = build_a(s, 0);
    std::lock_guard lk(*mu_);
    return a_cache_.emplace(name, c).first->second;
}

CoeffSeq Registry::f_seq(const std::string& name) const {
    const KnotSpec& s = get(name);
    {
        std::lock_guard lk(*mu_);
        auto it = f_cache_.find(name);
        if (it != f_cache_.end()) return it->second;
    }
    CoeffSeq a = a_seq(name);
    CoeffSeq f = f_from_a(a);
    if (!s.f_closed_form.empty()) {
        CoeffSeq::Gen gen;
        if (s.f_closed_form == "builtin:4_1") gen = [](long long k, OptRat prec) { return f_closed_41(k, prec); };
        else if (s.f_closed_form == "builtin:3_1l")
            gen = [](long long k, OptRat prec) { return f_closed_trefoil_left(k).truncate_opt(prec); };
        else if (s.f_closed_form == "builtin:3_1r")
            gen = [](long long k, OptRat prec) { return f_closed_trefoil_right(k).truncate_opt(prec); };
        else throw Error("unknown closed form: " + s.f_closed_form);
        CoeffSeq closed(Side::F, gen);
        for (long long k = 0; k < kClosedFormCheck; ++k)
            if (closed.at(k) != f.at(k)) throw Error("closed form inconsistent for " + name + " at k=" + std::to_string(k));
        if (a.lbc_constant()) {
            long long c = *a.lbc_constant();
            closed.set_floor([c](long long i) { return fk_degree_floor(i, c); });
        }
        f = closed;
    }
    std::lock_guard lk(*mu_);
    return f_cache_.emplace(name, f).first->second;
}

QSeries Registry::a_coeff(const std::string& name, long long k, OptRat prec) const { return a_seq(name).at(k, prec); }

QSeries Registry::f_coeff(const std::string& name, long long k, OptRat prec) const { return f_seq(name).at(k, prec); }

KnotSpec Registry::mirror(const std::string& name, const std::string& new_name) const {
    KnotSpec s = get(name);
    KnotSpec m = s;
    m.name = new_name.empty() ? name + "_mirror" : new_name;
    m.f_closed_form.clear();
    if (s.f_closed_form == "builtin:3_1l") m.f_closed_form = "builtin:3_1r";
    if (s.f_closed_form == "builtin:3_1r") m.f_closed_form = "builtin:3_1l";
    if (s.f_closed_form == "builtin:4_1") m.f_closed_form = "builtin:4_1";
    if (s.chirality == "left") m.chirality = "right";
    else if (s.chirality == "right") m.chirality = "left";
    switch (s.kind) {
        case KnotSpec::Kind::Builtin:
        case KnotSpec::Kind::Monomial:
            m.kind = KnotSpec::Kind::Monomial;
            m.mono.c2 = -s.mono.c2;
            m.mono.c1 = -s.mono.c1;
            m.mono.c0 = -s.mono.c0;
            break;
        case KnotSpec::Kind::List:
            m.list.clear();
            for (const auto& x : s.list) m.list.push_back(x.mirror());
            m.sigma0 = s.sigma0.mirror();
            break;
        case KnotSpec::Kind::Composite:
            throw Error("mirror of a composite knot: mirror its summands instead");
    }
    return m;
}

namespace {

KnotSpec parse_spec(const json& j) {
    auto schema = [](const std::string& msg) { return LoadError("schema", msg); };
    if (!j.is_object()) throw schema("knot entry must be an object");
    if (!j.contains("name") || !j["name"].is_string()) throw schema("knot entry needs a string name");
    KnotSpec s;
    s.name = j["name"].get<std::string>();
    if (j.contains("convention")) {
        const auto& c = j["convention"];
        if (!c.is_object()) throw schema("convention must be an object");
        if (c.value("x_half_shift", false))
            throw LoadError("convention", "knot " + s.name +
                                              ": data shifted by x^{1/2} must be converted before loading");
    }
    if (j.contains("f_closed_form")) s.f_closed_form = j["f_closed_form"].get<std::string>();
    if (!j.contains("generator") || !j["generator"].is_object()) throw schema("knot " + s.name + ": missing generator");
    const auto& g = j["generator"];
    std::string kind = g.value("kind", "");
    try {
        if (kind == "monomial") {
            s.kind = KnotSpec::Kind::Monomial;
            const auto& sg = g.at("sign");
            s.mono.alpha = sg.at("alpha").get<long long>();
            s.mono.beta = sg.at("beta").get<long long>();
            const auto& ex = g.at("exponent");
            s.mono.c2 = rat_from_json(ex.at("c2"));
            s.mono.c1 = rat_from_json(ex.at("c1"));
            s.mono.c0 = rat_from_json(ex.at("c0"));
        } else if (kind == "list") {
            s.kind = KnotSpec::Kind::List;
            for (const auto& x : g.at("coeffs")) s.list.push_back(series_from_json(x));
            if (g.contains("sigma0")) s.sigma0 = series_from_json(g["sigma0"]);
        } else if (kind == "composite") {
            s.kind = KnotSpec::Kind::Composite;
            for (const auto& x : g.at("summands")) s.summands.push_back(x.get<std::string>());
        } else {
            throw schema("knot " + s.name + ": unknown generator kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw schema("knot " + s.name + ": " + e.what());
    } catch (const LoadError&) {
        throw;
    } catch (const Error& e) {
        throw schema("knot " + s.name + ": " + e.what());
    }
    return s;
}

}  // namespace

void Registry::load_json(const json& j) {
    std::vector<KnotSpec> batch;
    if (j.is_array()) {
        for (const auto& x : j) batch.push_back(parse_spec(x));
    } else {
        batch.push_back(parse_spec(j));
    }
    std::map<std::string, const KnotSpec*> all;
    for (const auto& kv : specs_) all[kv.first] = &kv.second;
    for (const auto& s : batch) all[s.name] = &s;
    for (const auto& s : batch) {
        if (s.kind == KnotSpec::Kind::Monomial) check_monomial(s);
        for (const auto& n : s.summands)
            if (!all.count(n)) throw LoadError("schema", "knot " + s.name + ": unknown summand " + n);
    }
    // depth-first search for composite cycles
    std::map<std::string, int> state;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        if (state[n] == 2) return;
        if (state[n] == 1) throw LoadError("cycle", "cyclic composite through " + n);
        state[n] = 1;
        for (const auto& m : all.at(n)->summands) visit(m);
        state[n] = 2;
    };
    for (const auto& s : batch) visit(s.name);
    for (auto& s : batch) add(std::move(s));
}

void Registry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("io", "cannot open knot file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw LoadError("schema", "knot file " + path + ": " + e.what());
    }
    load_json(j);
}

}  // namespace qh
