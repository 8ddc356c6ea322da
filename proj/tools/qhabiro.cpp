#include "qhabiro/asympt.hpp"
#include "qhabiro/residue.hpp"
#include "qhabiro/surgery.hpp"
#include "qhabiro/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace qh;

namespace {

struct Config {
    bool json_out = false;
    int jobs = 1;
    bool verbose = false;
    std::vector<std::string> load;
};

Config cfg;

void progress(const std::string& msg) {
    if (cfg.verbose) std::cerr << msg << std::endl;
}

const CLI::Validator kRational(
    [](std::string& s) -> std::string {
        try {
            if (rat_from_json(json(s)) < 1) return "precision must be at least 1";
        } catch (const std::exception& e) {
            return e.what();
        }
        return "";
    },
    "RAT");

Rat parse_prec(const std::string& s) { return rat_from_json(json(s)); }

void add_prec(CLI::App* sub, std::string& target) {
    sub->add_option("--prec", target, "truncation order N, series are exact below q^N")
        ->envname("QHABIRO_PREC")
        ->check(kRational)
        ->capture_default_str();
}

Registry make_registry() {
    Registry r = Registry::with_builtins();
    for (const auto& path : cfg.load) {
        progress("loading " + path);
        r.load_file(path);
    }
    return r;
}

void emit(const json& j, const std::string& text) {
    if (cfg.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

std::string real_str(const Real& x, int digits = 30) { return x.str(digits); }

json real_json(const Real& x) { return real_str(x); }

// knot
struct KnotArgs {
    std::string name;
    bool list = false;
    long long k_max = 4;
    std::string prec = "20";
};

void run_knot(const KnotArgs& a) {
    Registry reg = make_registry();
    if (a.list || a.name.empty()) {
        json j = reg.names();
        std::string t;
        for (const auto& n : reg.names()) t += n + "\n";
        emit(j, t);
        return;
    }
    Rat p = parse_prec(a.prec);
    const KnotSpec& s = reg.get(a.name);
    CoeffSeq as = reg.a_seq(a.name);
    json j;
    j["name"] = s.name;
    j["chirality"] = s.chirality;
    j["crossing"] = s.crossing;
    j["lbc_constant"] = as.lbc_constant() ? json(*as.lbc_constant()) : json(nullptr);
    std::string t = "knot " + s.name + "\n";
    t += "lbc constant: " + (as.lbc_constant() ? std::to_string(*as.lbc_constant()) : std::string("none")) + "\n";
    json ja = json::array(), jf = json::array();
    for (long long k = 0; k <= a.k_max; ++k) {
        QSeries x = reg.a_coeff(a.name, k, p);
        QSeries y = reg.f_coeff(a.name, k, p);
        ja.push_back(to_json(x));
        jf.push_back(to_json(y));
        t += "a_" + std::to_string(-k - 1) + " = " + x.str() + "\n";
        t += "f_" + std::to_string(k) + " = " + y.str() + "\n";
    }
    j["a"] = ja;
    j["f"] = jf;
    emit(j, t);
}

// transform
struct TransformArgs {
    std::string knot;
    std::string to = "f";
    long long k_max = 5;
    std::string prec = "20";
};

void run_transform(const TransformArgs& a) {
    Registry reg = make_registry();
    Rat p = parse_prec(a.prec);
    CoeffSeq out = a.to == "f" ? f_from_a(reg.a_seq(a.knot)) : a_from_f(reg.f_seq(a.knot));
    json j = json::array();
    std::string t;
    for (long long k = 0; k <= a.k_max; ++k) {
        if (out.max_index() && k > *out.max_index()) break;
        QSeries x = out.at(k, p);
        j.push_back(to_json(x));
        std::string label = a.to == "f" ? "f_" + std::to_string(k) : "a_" + std::to_string(-k - 1);
        t += label + " = " + x.str() + "\n";
    }
    emit(j, t);
}

// residues
struct ResidueArgs {
    std::string knot;
    std::optional<long long> j;
    std::optional<long long> window;
    std::string prec = "20";
};

void run_residues(const ResidueArgs& a) {
    Registry reg = make_registry();
    Rat p = parse_prec(a.prec);
    CoeffSeq as = reg.a_seq(a.knot);
    if (a.j) {
        QSeries r = residue_j(as, *a.j, p);
        emit(to_json(r), "r_" + std::to_string(*a.j) + " = " + r.str() + "\n");
        return;
    }
    long long w = a.window ? *a.window : residue_window(as, p);
    progress("residue window " + std::to_string(w));
    ResidueFamily rf = residue_family(as, w, p, cfg.jobs);
    json j;
    json rs;
    std::string t;
    for (const auto& [jj, r] : rf.r) {
        rs[std::to_string(jj)] = to_json(r);
        t += "r_" + std::to_string(jj) + " = " + r.str() + "\n";
    }
    j["window"] = w;
    j["r"] = rs;
    j["r_inf"] = to_json(rf.r_inf);
    t += "r_inf = " + rf.r_inf.str() + "\n";
    emit(j, t);
}

// verify
struct VerifyArgs {
    std::string name;
    std::string prec = "20";
};

int run_verify(const VerifyArgs& a) {
    Registry reg = make_registry();
    VerifyResult r = run_identity(a.name, reg, parse_prec(a.prec), cfg.jobs);
    json j;
    j["identity"] = a.name;
    j["ok"] = r.ok;
    j["prec"] = rat_to_json(r.prec);
    if (!r.ok) j["detail"] = r.detail;
    emit(j, r.message() + "\n");
    return r.ok ? 0 : 2;
}

// surgery
struct SurgeryArgs {
    std::string knot;
    long long p = -1;
    long long a = 0;
    std::string method = "fk";
    std::string prec = "20";
};

void run_surgery(const SurgeryArgs& s) {
    Registry reg = make_registry();
    SurgeryParams sp;
    sp.p = s.p;
    sp.a = s.a;
    sp.prec = parse_prec(s.prec);
    sp.method = s.method == "fk" ? SurgeryMethod::FK : s.method == "residues" ? SurgeryMethod::Residues : SurgeryMethod::IH;
    progress("surgery on " + s.knot + " via " + s.method);
    ZhatResult z = zhat(reg.a_seq(s.knot), reg.f_seq(s.knot), sp);
    json j;
    j["knot"] = s.knot;
    j["p"] = s.p;
    j["a"] = s.a;
    j["method"] = s.method;
    j["delta"] = rat_to_json(z.delta);
    j["pow2"] = z.pow2;
    j["sign_flipped"] = z.sign_flipped;
    j["series"] = to_json(z.series);
    std::string t = "Zhat = " + std::string(z.pow2 ? "2^-1 * " : "") + "q^(" + rat_str(z.delta) + ") * (" +
                    z.series.str() + ")\n" + z.sign_convention() + "\n";
    emit(j, t);
}

// park-poly
struct ParkArgs {
    long long p = 1;
    long long a = 0;
    long long k = 1;
    std::string method = "explicit";
};

void run_park(const ParkArgs& a) {
    if (a.k == 0)
        std::cerr << "note: k=0 gives the empty sum; the literal residue at x=0 is "
                  << park_poly_residue_literal(a.p, a.a, 0, 10).str() << std::endl;
    QSeries r = a.method == "explicit" ? park_poly_explicit(a.p, a.a, a.k) : park_poly_residue(a.p, a.a, a.k);
    emit(to_json(r), r.str() + "\n");
}

// connect-sum
struct ConnectArgs {
    std::vector<std::string> knots;
    long long depth = 6;
    std::string prec = "20";
    bool force = false;
};

void run_connect(const ConnectArgs& a) {
    Registry reg = make_registry();
    Rat p = parse_prec(a.prec);
    // the lower bound condition is checked on the indices the product reaches
    auto element = [&](const CoeffSeq& s) { return OmegaElement{s, lbc_check(s, a.depth, p)}; };
    OmegaElement acc = element(reg.a_seq(a.knots[0]));
    OmegaProduct prod;
    for (size_t i = 1; i < a.knots.size(); ++i) {
        progress("multiplying by " + a.knots[i]);
        prod = omega_mul(acc, element(reg.a_seq(a.knots[i])), a.depth, p, a.force, cfg.jobs);
        acc = element(prod.seq);
    }
    json j;
    json cs;
    std::string t;
    for (long long l = 0; l >= -a.depth; --l) {
        QSeries c = coeff_at(acc.a, l, p);
        cs[std::to_string(l)] = to_json(c);
        t += "c_" + std::to_string(l) + " = " + c.str() + "\n";
    }
    j["knots"] = a.knots;
    j["c"] = cs;
    if (acc.a.lbc_constant()) {
        j["lbc_constant"] = *acc.a.lbc_constant();
        t += "lbc constant: " + std::to_string(*acc.a.lbc_constant()) + "\n";
    }
    if (a.knots.size() > 1) {
        bool ok = acc.a.lbc_constant() && lbc_product_bound(prod, *acc.a.lbc_constant());
        j["lbc_bound_holds"] = ok;
        t += std::string("lbc bound: ") + (ok ? "holds" : "not established") + "\n";
    }
    emit(j, t);
}

// asympt
struct AsymptArgs {
    std::string knot = "4_1";
    std::string mode = "period";
    long long n_max = 50;
    unsigned bits = 256;
    bool csv = false;
};

std::vector<long long> growth_list(long long n_max) {
    long long step = std::max<long long>(1, n_max / 20);
    std::vector<long long> ns;
    for (long long i = 5; i >= 0; --i)
        if (n_max - i * step >= 1) ns.push_back(n_max - i * step);
    return ns;
}

int run_asympt(const AsymptArgs& a) {
    Registry reg = make_registry();
    if (a.csv) {
        std::vector<long long> ns;
        for (long long n = 1; n <= a.n_max; ++n) ns.push_back(n);
        std::cout << "n,re,im,modulus,normalized\n";
        for (const auto& r : sample_rows(reg, a.knot, ns, a.bits, cfg.jobs))
            std::cout << r.n << "," << real_str(r.value.re, 20) << "," << real_str(r.value.im, 20) << ","
                      << real_str(r.modulus, 20) << "," << real_str(r.normalized, 20) << "\n";
        return 0;
    }
    json j;
    j["knot"] = a.knot;
    j["mode"] = a.mode;
    std::string t;
    if (a.mode == "period") {
        PrecisionScope ps(a.bits);
        PeriodResult r = periodicity_check(reg, a.knot, a.n_max, a.bits, Real("1e-9"), cfg.jobs);
        j["found"] = r.found;
        if (!r.found) {
            emit(j, "aperiodic on window\n");
            return 0;
        }
        j["period"] = r.period;
        j["phase"] = r.phase;
        json vs = json::array(), ms = json::array();
        for (const auto& v : r.values) vs.push_back(real_json(v));
        for (const auto& v : r.multiset) ms.push_back(real_json(v));
        j["values"] = vs;
        j["multiset"] = ms;
        t = "period " + std::to_string(r.period) + " from n=" + std::to_string(r.phase) + "\n";
        for (size_t i = 0; i < r.values.size(); ++i)
            t += "f_" + std::to_string(r.phase + (long long)i) + "(zeta) = " + real_str(r.values[i], 20) + "\n";
    } else if (a.mode == "growth") {
        PrecisionScope ps(a.bits);
        GrowthResult g = growth_rate(reg, a.knot, growth_list(a.n_max), a.bits, cfg.jobs);
        Real vol = vol_41();
        j["estimate"] = real_json(g.estimate);
        j["vol_41"] = real_json(vol);
        j["trivial"] = g.trivial;
        j["flagged"] = g.flagged;
        t = "growth " + real_str(g.estimate, 20) + (g.trivial ? " (no exponential growth)" : "") +
            (g.flagged ? " (flagged: unstable extrapolation)" : "") + "\nvol(4_1) " + real_str(vol, 20) + "\n";
    } else if (a.mode == "phi") {
        PhiFit f = extract_phi(reg, a.knot, 3, a.n_max, a.bits, cfg.jobs);
        PrecisionScope ps(a.bits);
        json cs = json::array();
        for (size_t k = 0; k < f.c.size(); ++k) {
            cs.push_back(real_json(f.c[k]));
            t += "c_" + std::to_string(k) + " = " + real_str(f.c[k], 15) + "\n";
        }
        j["c"] = cs;
        j["flagged"] = f.flagged;
        if (f.flagged) t += "flagged: fits of different order disagree\n";
    } else {
        auto q = phi_quotient_check(3);
        json cs = json::array();
        for (const auto& c : q) {
            cs.push_back(c.get_str());
            t += c.get_str() + "\n";
        }
        j["c"] = cs;
    }
    emit(j, t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-series computations for knots: GM series, inverted Habiro series, residues, surgery"};
    app.require_subcommand(1);
    app.add_flag("--json", cfg.json_out, "machine-readable output");
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--load", cfg.load, "knot JSON file, repeatable");
    app.add_flag("-v,--verbose", cfg.verbose, "progress on stderr");
    app.fallthrough();

    KnotArgs ka;
    auto* knot = app.add_subcommand("knot", "show knot data");
    knot->add_option("name", ka.name, "knot name");
    knot->add_flag("--list", ka.list, "list known knots");
    knot->add_option("--k-max", ka.k_max, "largest index shown")->check(CLI::NonNegativeNumber);
    add_prec(knot, ka.prec);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "convert between a-coefficients and f-coefficients");
    transform->add_option("--knot", ta.knot)->required();
    transform->add_option("--to", ta.to)->check(CLI::IsMember({"f", "a"}))->capture_default_str();
    transform->add_option("--k-max", ta.k_max)->check(CLI::NonNegativeNumber);
    add_prec(transform, ta.prec);

    ResidueArgs ra;
    auto* residues = app.add_subcommand("residues", "residues r_j at x = q^j");
    residues->add_option("--knot", ra.knot)->required();
    auto* jopt = residues->add_option("-j", ra.j, "single residue index");
    residues->add_option("--window", ra.window, "all |j| <= window")->excludes(jopt);
    add_prec(residues, ra.prec);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check a q-series identity");
    verify->add_option("name", va.name)->required()->check(CLI::IsMember(identity_names()));
    add_prec(verify, va.prec);

    SurgeryArgs sa;
    auto* surgery = app.add_subcommand("surgery", "Zhat of -p surgery");
    surgery->add_option("--knot", sa.knot)->required();
    surgery->add_option("-p", sa.p)->required();
    surgery->add_option("-a", sa.a)->capture_default_str();
    surgery->add_option("--method", sa.method)->check(CLI::IsMember({"fk", "residues", "ih"}))->capture_default_str();
    add_prec(surgery, sa.prec);

    ParkArgs pa;
    auto* park = app.add_subcommand("park-poly", "Park polynomials");
    park->add_option("-p", pa.p)->required();
    park->add_option("-a", pa.a)->capture_default_str();
    park->add_option("-k", pa.k)->required()->check(CLI::NonNegativeNumber);
    park->add_option("--method", pa.method)->check(CLI::IsMember({"explicit", "residue"}))->capture_default_str();

    ConnectArgs ca;
    auto* connect = app.add_subcommand("connect-sum", "product in the ring of inverted Habiro series");
    connect->add_option("--knots", ca.knots)->required()->expected(1, -1);
    connect->add_option("--depth", ca.depth)->check(CLI::NonNegativeNumber)->capture_default_str();
    connect->add_flag("--force", ca.force, "multiply without the lower bound condition");
    add_prec(connect, ca.prec);

    AsymptArgs aa;
    auto* asympt = app.add_subcommand("asympt", "numerics at roots of unity");
    asympt->add_option("--knot", aa.knot)->capture_default_str();
    asympt->add_option("--mode", aa.mode)
        ->check(CLI::IsMember({"period", "growth", "phi", "quotient"}))
        ->capture_default_str();
    asympt->add_option("--n-max", aa.n_max)->check(CLI::PositiveNumber)->capture_default_str();
    asympt->add_option("--bits", aa.bits)->check(CLI::Range(64u, 1u << 20))->capture_default_str();
    asympt->add_flag("--csv", aa.csv, "rows n,re,im,modulus,normalized at zeta_2n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*knot) run_knot(ka);
        if (*transform) run_transform(ta);
        if (*residues) run_residues(ra);
        if (*verify) return run_verify(va);
        if (*surgery) run_surgery(sa);
        if (*park) run_park(pa);
        if (*connect) run_connect(ca);
        if (*asympt) return run_asympt(aa);
    } catch (const LoadError& e) {
        if (cfg.json_out) std::cout << json{{"error", e.what()}, {"code", e.code}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        if (cfg.json_out) std::cout << json{{"error", e.what()}, {"code", "domain"}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
