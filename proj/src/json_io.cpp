#include "qhabiro/json_io.hpp"

namespace qh {

json to_json(const QSeries& s) {
    json j;
    j["scale"] = s.scale();
    j["offset"] = s.offset();
    json c = json::array();
    for (const auto& x : s.coeffs()) c.push_back(x.get_str());
    j["coeffs"] = c;
    if (s.exact()) j["prec"] = "exact";
    else j["prec"] = *s.prec_units();
    return j;
}

QSeries series_from_json(const json& j) {
    if (!j.is_object()) throw Error("series JSON must be an object");
    long long scale = j.at("scale").get<long long>();
    long long offset = j.at("offset").get<long long>();
    std::vector<mpz_class> c;
    for (const auto& x : j.at("coeffs")) {
        mpz_class v;
        std::string str = x.is_string() ? x.get<std::string>() : x.dump();
        if (v.set_str(str, 10) != 0) throw Error("bad coefficient: " + str);
        c.push_back(v);
    }
    std::optional<long long> prec;
    const auto& p = j.at("prec");
    if (p.is_string()) {
        if (p.get<std::string>() != "exact") throw Error("prec must be an integer or \"exact\"");
    } else {
        prec = p.get<long long>();
    }
    return QSeries::from_units(scale, offset, std::move(c), prec);
}

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (!j.is_string()) throw Error("rational must be an integer or a \"p/q\" string");
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s));
        long long den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw Error("zero denominator in " + s);
        return Rat(std::stoll(s.substr(0, slash)), den);
    } catch (const std::logic_error&) {
        throw Error("malformed rational: " + s);
    }
}

json rat_to_json(Rat r) {
    if (r.denominator() == 1) return r.numerator();
    return rat_str(r);
}

}  // namespace qh
