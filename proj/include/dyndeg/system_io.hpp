#ifndef DYNDEG_SYSTEM_IO_HPP
#define DYNDEG_SYSTEM_IO_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <dyndeg/core.hpp>
#include <dyndeg/fibered.hpp>
#include <dyndeg/monomial.hpp>
#include <dyndeg/rational_map.hpp>

namespace dyndeg
{

using json = nlohmann::json;

struct RunOptions {
    int n = 10;
    int p = 1;
    std::uint64_t seed = 1;
    std::optional<double> tolerance;
    unsigned long power = 2;
    std::optional<std::vector<rational>> base_point;
};

enum class SystemKind { monomial, rational, product, skew, triangular };

inline const char *kind_name(SystemKind k)
{
    switch (k) {
    case SystemKind::monomial:
        return "monomial";
    case SystemKind::rational:
        return "rational";
    case SystemKind::product:
        return "product";
    case SystemKind::skew:
        return "skew";
    case SystemKind::triangular:
        return "monomial-triangular";
    }
    return "?";
}

struct SystemDescription {
    SystemKind kind = SystemKind::monomial;
    std::optional<ExponentMatrix> matrix;
    std::optional<ProjectiveRationalMap> map;
    std::optional<FiberedSystem> fibered;
    RunOptions options;
    json source;

    bool is_fibered() const
    {
        return fibered.has_value();
    }
};

namespace io
{

inline const json &field(const json &obj, const char *key, const std::string &where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw input_error("missing field '" + std::string(key) + "' in " + where);
    }
    return obj.at(key);
}

inline integer to_integer(const json &v, const std::string &where)
{
    if (v.is_string()) {
        return parse_integer(v.get<std::string>());
    }
    if (v.is_number_integer()) {
        return integer(std::to_string(v.get<std::int64_t>()), 10);
    }
    if (v.is_number_unsigned()) {
        return integer(std::to_string(v.get<std::uint64_t>()), 10);
    }
    throw input_error(where + ": expected an integer or a decimal string");
}

inline rational to_rational(const json &v, const std::string &where)
{
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            return rational(parse_integer(s));
        }
        integer den = parse_integer(s.substr(slash + 1));
        if (sgn(den) == 0) {
            throw input_error(where + ": zero denominator");
        }
        return fraction(parse_integer(s.substr(0, slash)), den);
    }
    return rational(to_integer(v, where));
}

inline int to_int(const json &v, const std::string &where)
{
    if (!v.is_number_integer()) {
        throw input_error(where + ": expected a small integer");
    }
    return v.get<int>();
}

inline IntMatrix to_matrix(const json &v, const std::string &where)
{
    if (!v.is_array() || v.empty()) {
        throw input_error(where + ": expected a nonempty array of rows");
    }
    const std::size_t rows = v.size();
    if (!v[0].is_array() || v[0].empty()) {
        throw input_error(where + ": rows must be nonempty arrays");
    }
    const std::size_t cols = v[0].size();
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols) {
            throw input_error(where + ": row " + std::to_string(i + 1) + " has the wrong length");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = to_integer(v[i][j], where);
        }
    }
    return m;
}

inline std::string to_text(const json &v, const std::string &where)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) {
                throw input_error(where + ": components must be strings");
            }
            s += (i ? ", " : "") + v[i].get<std::string>();
        }
        return s;
    }
    throw input_error(where + ": expected a string or an array of strings");
}

inline ProjectiveRationalMap to_map(const json &obj, const std::string &where)
{
    int k = to_int(field(obj, "k", where), where + ".k");
    if (k < 1) {
        throw input_error(where + ".k must be positive");
    }
    return parse_map(to_text(field(obj, "map", where), where + ".map"), static_cast<std::size_t>(k));
}

inline std::string kind_of(const json &obj, const std::string &where)
{
    const json &k = field(obj, "kind", where);
    if (!k.is_string()) {
        throw input_error(where + ".kind must be a string");
    }
    return k.get<std::string>();
}

inline FactorMap to_factor(const json &obj, const std::string &where)
{
    std::string kind = kind_of(obj, where);
    if (kind == "monomial") {
        return FactorMap(ExponentMatrix(to_matrix(field(obj, "matrix", where), where + ".matrix")));
    }
    if (kind == "rational") {
        return FactorMap(to_map(obj, where));
    }
    throw input_error(where + ": factor kind must be 'monomial' or 'rational', got '" + kind + "'");
}

inline RunOptions to_options(const json &obj)
{
    RunOptions o;
    if (!obj.contains("options")) {
        return o;
    }
    const json &opt = obj.at("options");
    if (!opt.is_object()) {
        throw input_error("options must be an object");
    }
    for (const auto &[key, v] : opt.items()) {
        if (key == "N") {
            o.n = to_int(v, "options.N");
        } else if (key == "p") {
            o.p = to_int(v, "options.p");
        } else if (key == "seed") {
            o.seed = to_integer(v, "options.seed").get_ui();
        } else if (key == "tolerance") {
            if (!v.is_number() || v.get<double>() <= 0) {
                throw input_error("options.tolerance must be a positive number");
            }
            o.tolerance = v.get<double>();
        } else if (key == "power") {
            int e = to_int(v, "options.power");
            if (e < 1) {
                throw input_error("options.power must be positive");
            }
            o.power = static_cast<unsigned long>(e);
        } else {
            throw input_error("unknown option '" + key + "'");
        }
    }
    if (o.n < 1) {
        throw input_error("options.N must be at least 1");
    }
    return o;
}

inline std::string fmt(double v)
{
    if (std::isnan(v)) {
        return "?";
    }
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

inline json strings(const std::vector<integer> &v)
{
    json a = json::array();
    for (const auto &x : v) {
        a.push_back(x.get_str());
    }
    return a;
}

inline std::vector<integer> integers(const json &a, const std::string &where)
{
    std::vector<integer> out;
    for (const auto &x : a) {
        out.push_back(to_integer(x, where));
    }
    return out;
}

inline std::string list(const std::vector<integer> &v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + v[i].get_str();
    }
    return s + "]";
}

} // namespace io

inline SystemDescription parse_system(const json &doc)
{
    if (!doc.is_object()) {
        throw input_error("a system description must be a JSON object");
    }
    SystemDescription d;
    d.source = doc;
    d.options = io::to_options(doc);
    std::string kind = io::kind_of(doc, "system");
    if (kind == "monomial") {
        d.kind = SystemKind::monomial;
        d.matrix = ExponentMatrix(io::to_matrix(io::field(doc, "matrix", "system"), "matrix"));
    } else if (kind == "rational") {
        d.kind = SystemKind::rational;
        d.map = io::to_map(doc, "system");
        if (!is_dominant(*d.map)) {
            throw math_error("the map is not dominant");
        }
    } else if (kind == "monomial-triangular") {
        d.kind = SystemKind::triangular;
        ExponentMatrix a(io::to_matrix(io::field(doc, "matrix", "system"), "matrix"));
        int l = io::to_int(io::field(doc, "l", "system"), "l");
        if (l < 1) {
            throw input_error("l must be positive");
        }
        d.fibered = FiberedSystem::monomial_triangular(a, static_cast<std::size_t>(l));
    } else if (kind == "product") {
        d.kind = SystemKind::product;
        d.fibered = FiberedSystem::product(io::to_factor(io::field(doc, "base", "system"), "base"),
                                           io::to_factor(io::field(doc, "fiber", "system"), "fiber"));
    } else if (kind == "skew") {
        d.kind = SystemKind::skew;
        FactorMap g = io::to_factor(io::field(doc, "base", "system"), "base");
        int m = io::to_int(io::field(doc, "fiber_k", "system"), "fiber_k");
        if (m < 1) {
            throw input_error("fiber_k must be positive");
        }
        auto tau = FiberFamily::parse(g.dim(), static_cast<std::size_t>(m),
                                      io::to_text(io::field(doc, "fiber_map", "system"), "fiber_map"));
        d.fibered = FiberedSystem::skew(std::move(g), std::move(tau));
        if (doc.contains("base_point")) {
            std::vector<rational> y;
            for (const auto &c : doc.at("base_point")) {
                y.push_back(io::to_rational(c, "base_point"));
            }
            if (y.size() != d.fibered->base_dim()) {
                throw input_error("base_point needs " + std::to_string(d.fibered->base_dim()) + " coordinates");
            }
            d.options.base_point = std::move(y);
        }
    } else {
        throw input_error("unknown system kind '" + kind + "'");
    }
    return d;
}

inline json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw input_error(std::string("JSON parse error: ") + e.what());
    }
}

inline SystemDescription parse_system_file(const std::string &path)
{
    return parse_system(read_json_file(path));
}

// Profiles

struct NamedProfile {
    std::string name;
    DegreeProfile profile;
    std::string method;
    json extra = json::object();
};

inline json profile_to_json(const DegreeProfile &p, const std::string &method)
{
    json j;
    j["values"] = json::array();
    for (double v : p.values) {
        j["values"].push_back(std::isnan(v) ? json(nullptr) : json(v));
    }
    j["exact"] = p.exact;
    j["method"] = method;
    j["tolerance"] = p.tolerance;
    j["exact_values"] = json::array();
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        bool have = i < p.exact_values.size() && p.exact_values[i];
        j["exact_values"].push_back(have ? json(p.exact_values[i]->get_str()) : json(nullptr));
    }
    if (p.characteristic) {
        j["characteristic"] = io::strings(p.characteristic->coeffs());
    }
    return j;
}

inline DegreeProfile profile_from_json(const json &j)
{
    DegreeProfile p;
    for (const auto &v : io::field(j, "values", "profile")) {
        p.values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    }
    p.exact = io::field(j, "exact", "profile").get<bool>();
    p.tolerance = io::field(j, "tolerance", "profile").get<double>();
    if (j.contains("exact_values")) {
        for (const auto &v : j.at("exact_values")) {
            p.exact_values.push_back(v.is_null() ? std::nullopt
                                                 : std::optional<integer>(io::to_integer(v, "exact_values")));
        }
    }
    if (j.contains("characteristic")) {
        p.characteristic = UPoly(io::integers(j.at("characteristic"), "characteristic"));
    }
    return p;
}

inline std::string factor_method(const FactorMap &h)
{
    if (h.is_monomial()) {
        return "eigenvalue-exact";
    }
    return h.dim() == 1 ? "degree-exact" : "sequence-estimate";
}

namespace detail
{

inline NamedProfile rational_profile(const std::string &name, const ProjectiveRationalMap &f, int n_max)
{
    FactorMap h(f);
    if (h.dim() == 1) {
        return {name, factor_profile(h, n_max), factor_method(h), json::object()};
    }
    auto seq = degree_sequence_d1(f, n_max);
    NamedProfile np{name, estimated_profile(h.dim(), seq.values), "sequence-estimate", json::object()};
    D1Estimate est = estimate_d1(seq);
    std::size_t at = 0;
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
        if (std::exp(log_of(seq.values[i]) / static_cast<double>(i + 1)) <= est.upper_bound) {
            at = i + 1;
            break;
        }
    }
    np.extra["upper_bound"] = est.upper_bound;
    np.extra["upper_bound_n"] = at;
    np.extra["sequence"] = io::strings(seq.values);
    return np;
}

} // namespace detail

inline void apply_tolerance(DegreeProfile &p, const RunOptions &o)
{
    if (o.tolerance && !p.exact) {
        p.tolerance = *o.tolerance;
    }
}

inline std::vector<NamedProfile> compute_profiles(const SystemDescription &d)
{
    std::vector<NamedProfile> out;
    const int n = d.options.n;
    if (d.kind == SystemKind::monomial) {
        out.push_back({"map", dynamical_degrees_exact(*d.matrix), "eigenvalue-exact"});
    } else if (d.kind == SystemKind::rational) {
        out.push_back(detail::rational_profile("map", *d.map, n));
    } else {
        const FiberedSystem &sys = *d.fibered;
        SystemProfiles sp = system_profiles(sys, n, d.options.seed);
        std::string base_m, rel_m, total_m;
        if (sys.is_triangular()) {
            base_m = rel_m = total_m = "eigenvalue-exact";
        } else if (sys.is_product()) {
            base_m = factor_method(sys.as_product().base);
            rel_m = factor_method(sys.as_product().fiber);
            total_m = sp.total.exact ? "eigenvalue-exact" : "sequence-estimate";
        } else {
            base_m = factor_method(sys.as_skew().base);
            rel_m = "sequence-estimate";
            total_m = "unavailable";
        }
        out.push_back({"total", sp.total, total_m});
        out.push_back({"base", sp.base, base_m});
        out.push_back({"relative", sp.relative, rel_m});
    }
    for (auto &np : out) {
        apply_tolerance(np.profile, d.options);
    }
    return out;
}

inline const NamedProfile &find_profile(const std::vector<NamedProfile> &ps, const std::string &name)
{
    for (const auto &p : ps) {
        if (p.name == name) {
            return p;
        }
    }
    throw math_error("no profile named '" + name + "'");
}

inline std::string profile_line(const NamedProfile &np)
{
    const auto &p = np.profile;
    std::string s = "d = [";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += i ? ", " : "";
        if (i < p.exact_values.size() && p.exact_values[i]) {
            s += p.exact_values[i]->get_str();
        } else {
            s += io::fmt(p.values[i]);
        }
    }
    s += "] (" + np.method;
    if (!p.exact && np.method != "unavailable") {
        s += ", tolerance " + io::fmt(p.tolerance);
    }
    s += ")";
    if (np.extra.contains("upper_bound")) {
        s += "\nd1 = " + io::fmt(p.values[1]) + " (upper bound " + io::fmt(np.extra["upper_bound"].get<double>())
             + " at n=" + std::to_string(np.extra["upper_bound_n"].get<int>()) + ")";
    }
    return s;
}

inline json profiles_json(const std::vector<NamedProfile> &ps)
{
    json j = json::object();
    for (const auto &np : ps) {
        json pj = profile_to_json(np.profile, np.method);
        for (const auto &[k, v] : np.extra.items()) {
            pj[k] = v;
        }
        j[np.name] = pj;
    }
    return j;
}

// Sequences

inline json compute_sequences(const SystemDescription &d, int p, int n_max)
{
    json j;
    j["p"] = p;
    j["N"] = n_max;
    if (d.kind == SystemKind::monomial) {
        j["total"] = io::strings(degree_sequence(*d.matrix, p, n_max).values);
        return j;
    }
    if (d.kind == SystemKind::rational) {
        FactorMap h(*d.map);
        if (p == static_cast<int>(h.dim()) && p > 1) {
            throw unsupported_error("lambda_k of a rational map is not computed");
        }
        j["total"] = io::strings(factor_degree_sequence(h, p, n_max));
        return j;
    }
    const FiberedSystem &sys = *d.fibered;
    const bool has_rel = p >= 0 && p <= static_cast<int>(sys.fiber_dim());
    if (sys.is_triangular()) {
        j["total"] = io::strings(total_degree_sequence(sys, p, n_max));
        if (has_rel) {
            j["relative"] = io::strings(relative_sequence(sys, p, n_max).values);
        }
    } else if (sys.is_product()) {
        AbcTable t = abc_sequences(sys, p, n_max);
        j["total"] = io::strings(t.total);
        if (has_rel) {
            j["relative"] = io::strings(relative_sequence_product(sys, p, n_max).values);
        }
        json a = json::object();
        for (int q = t.q_min; q <= t.q_max; ++q) {
            a[std::to_string(q)] = io::strings(t.a[static_cast<std::size_t>(q - t.q_min)]);
        }
        j["a"] = a;
        j["b"] = io::strings(t.b);
        j["c"] = io::strings(t.c);
    } else {
        if (!has_rel) {
            throw math_error("relative order " + std::to_string(p) + " out of range");
        }
        RelativeSequence r;
        if (p == 1) {
            r = relative_sequence_orbit(sys, n_max, d.options.base_point, d.options.seed);
        } else {
            r = relative_sequence(sys, p, n_max, d.options.seed);
        }
        j["relative"] = io::strings(r.values);
        if (r.base_point) {
            json y = json::array();
            for (const auto &c : *r.base_point) {
                y.push_back(to_string(c));
            }
            j["base_point"] = y;
            j["samples"] = r.samples;
        }
    }
    return j;
}

inline std::string sequences_text(const json &j)
{
    std::ostringstream os;
    const std::string p = std::to_string(j["p"].get<int>());
    auto show = [&](const std::string &label, const json &arr) {
        os << label << " = " << io::list(io::integers(arr, label)) << "\n";
    };
    if (j.contains("total")) {
        show("lambda_" + p + "(f^n)", j["total"]);
    }
    if (j.contains("relative")) {
        show("lambda_" + p + "(f^n|pi)", j["relative"]);
    }
    if (j.contains("a")) {
        for (const auto &[q, arr] : j["a"].items()) {
            show("a_{" + q + "," + p + "}(n)", arr);
        }
        show("b_" + p + "(n)", j["b"]);
        show("c_" + p + "(n)", j["c"]);
    }
    if (j.contains("base_point")) {
        os << "base point y = (";
        for (std::size_t i = 0; i < j["base_point"].size(); ++i) {
            os << (i ? ", " : "") << j["base_point"][i].get<std::string>();
        }
        os << ")\n";
    }
    return os.str();
}

// Checks

enum class Verdict { pass, fail, unsupported };

inline const char *to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::unsupported:
        return "unsupported";
    }
    return "?";
}

inline Verdict verdict_from_string(const std::string &s)
{
    if (s == "pass") {
        return Verdict::pass;
    }
    if (s == "fail") {
        return Verdict::fail;
    }
    if (s == "unsupported") {
        return Verdict::unsupported;
    }
    throw input_error("unknown verdict '" + s + "'");
}

struct CheckOutcome {
    std::string name;
    Verdict verdict = Verdict::unsupported;
    json evidence;
    json details = json::object();
    std::vector<std::string> lines;
};

inline const std::vector<std::string> &check_names()
{
    static const std::vector<std::string> names{"theorem1.1", "corollary1.2", "corollary1.3", "logconcavity",
                                                "powerrule",  "lemma4.2",     "proposition3.6", "maxdegree"};
    return names;
}

namespace detail
{

inline json fibered_evidence(const std::vector<NamedProfile> &ps)
{
    json e;
    for (const char *name : {"total", "base", "relative"}) {
        const auto &np = find_profile(ps, name);
        e[name] = profile_to_json(np.profile, np.method);
    }
    return e;
}

inline void require_fibered(const SystemDescription &d, const std::string &check)
{
    if (!d.is_fibered()) {
        throw unsupported_error(check + " needs a fibered system (product, skew or monomial-triangular)");
    }
}

inline json conjugation_evidence(const SystemDescription &d)
{
    std::mt19937_64 rng(d.options.seed);
    json e;
    e["conjugates"] = json::array();
    if (d.kind == SystemKind::monomial) {
        e["mode"] = "exact";
        e["original"] = profile_to_json(dynamical_degrees_exact(*d.matrix), "eigenvalue-exact");
        for (int i = 0; i < 5; ++i) {
            auto [m, minv] = random_unimodular(d.matrix->dim(), rng);
            ExponentMatrix b(m * d.matrix->matrix() * minv);
            json c;
            c["matrix"] = json::array();
            for (std::size_t r = 0; r < m.rows(); ++r) {
                c["matrix"].push_back(io::strings(m.row(r)));
            }
            c["profile"] = profile_to_json(dynamical_degrees_exact(b), "eigenvalue-exact");
            e["conjugates"].push_back(c);
        }
        return e;
    }
    if (d.kind == SystemKind::rational) {
        e["mode"] = "sequence";
        auto base = degree_sequence_d1(*d.map, d.options.n);
        D1Estimate est = estimate_d1(base);
        e["original"] = {{"sequence", io::strings(base.values)}, {"upper_bound", est.upper_bound}};
        for (int i = 0; i < 5; ++i) {
            auto [m, minv] = random_unimodular(d.map->k() + 1, rng);
            auto g = conjugate(*d.map, m);
            auto seq = degree_sequence_d1(g, d.options.n);
            json c;
            c["matrix"] = json::array();
            for (std::size_t r = 0; r < m.rows(); ++r) {
                c["matrix"].push_back(io::strings(m.row(r)));
            }
            c["sequence"] = io::strings(seq.values);
            c["upper_bound"] = estimate_d1(seq).upper_bound;
            e["conjugates"].push_back(c);
        }
        return e;
    }
    throw unsupported_error("corollary1.2 is checked for monomial and rational maps");
}

inline json power_evidence(const SystemDescription &d)
{
    const unsigned long n = d.options.power;
    const int n_short = std::max(3, d.options.n / static_cast<int>(n));
    json e;
    e["n"] = n;
    e["pairs"] = json::array();
    auto push = [&](const std::string &name, DegreeProfile f, DegreeProfile fn, const std::string &m) {
        apply_tolerance(f, d.options);
        apply_tolerance(fn, d.options);
        e["pairs"].push_back({{"name", name}, {"f", profile_to_json(f, m)}, {"fn", profile_to_json(fn, m)}});
    };
    if (d.kind == SystemKind::monomial) {
        push("map", dynamical_degrees_exact(*d.matrix), dynamical_degrees_exact(d.matrix->power(n)), "eigenvalue-exact");
        return e;
    }
    if (d.kind == SystemKind::rational) {
        FactorMap h(*d.map);
        push("map", factor_profile(h, d.options.n), factor_profile(h.power(n), n_short), factor_method(h));
        return e;
    }
    const FiberedSystem &sys = *d.fibered;
    if (sys.is_skew()) {
        throw unsupported_error("powers of skew systems are not constructed");
    }
    SystemProfiles a = system_profiles(sys, d.options.n, d.options.seed);
    SystemProfiles b = system_profiles(sys.power(n), n_short, d.options.seed);
    push("total", a.total, b.total, a.total.exact ? "eigenvalue-exact" : "sequence-estimate");
    push("base", a.base, b.base, a.base.exact ? "exact" : "sequence-estimate");
    push("relative", a.relative, b.relative, a.relative.exact ? "exact" : "sequence-estimate");
    return e;
}

inline json lemma_evidence(const SystemDescription &d, const std::vector<NamedProfile> &ps)
{
    if (d.kind != SystemKind::product) {
        throw unsupported_error("lemma4.2 is checked for product systems only");
    }
    const int p = d.options.p;
    const auto &total = find_profile(ps, "total").profile;
    if (p < 0 || p >= static_cast<int>(total.size())) {
        throw math_error("order " + std::to_string(p) + " out of range");
    }
    if (!total.known(static_cast<std::size_t>(p))) {
        throw unsupported_error("d_" + std::to_string(p) + "(f) is not available for this system");
    }
    json e;
    e["p"] = p;
    e["target"] = total[static_cast<std::size_t>(p)];
    e["target_exact"] = total.exact;
    e["b"] = io::strings(abc_sequences(*d.fibered, p, std::max(2, d.options.n)).b);
    return e;
}

} // namespace detail

inline json gather_evidence(const SystemDescription &d, const std::string &check,
                            const std::vector<NamedProfile> &ps)
{
    if (check == "theorem1.1" || check == "corollary1.3" || check == "maxdegree") {
        detail::require_fibered(d, check);
        return detail::fibered_evidence(ps);
    }
    if (check == "proposition3.6") {
        detail::require_fibered(d, check);
        const auto &np = find_profile(ps, "relative");
        return json{{"relative", profile_to_json(np.profile, np.method)}};
    }
    if (check == "logconcavity") {
        json e;
        e["profiles"] = json::object();
        for (const auto &np : ps) {
            e["profiles"][np.name] = profile_to_json(np.profile, np.method);
        }
        return e;
    }
    if (check == "corollary1.2") {
        return detail::conjugation_evidence(d);
    }
    if (check == "powerrule") {
        return detail::power_evidence(d);
    }
    if (check == "lemma4.2") {
        return detail::lemma_evidence(d, ps);
    }
    throw input_error("unknown check '" + check + "'");
}

namespace detail
{

inline std::string opt_bool(const std::optional<bool> &b)
{
    return b ? (*b ? "true" : "false") : "unknown";
}

inline void judge_theorem(const json &e, CheckOutcome &out)
{
    auto rep = verify_theorem_1_1(profile_from_json(e.at("total")), profile_from_json(e.at("base")),
                                  profile_from_json(e.at("relative")));
    out.details["entries"] = json::array();
    json witnesses = json::array();
    for (const auto &en : rep.entries) {
        json row{{"p", en.p}, {"status", to_string(en.status)}, {"tolerance", en.tolerance}};
        row["witness"] = en.witness ? json(*en.witness) : json(nullptr);
        row["residual"] = std::isnan(en.residual) ? json(nullptr) : json(en.residual);
        row["ties"] = en.ties;
        out.details["entries"].push_back(row);
        witnesses.push_back(row["witness"]);
        std::string line = "p=" + std::to_string(en.p) + ": " + to_string(en.status);
        if (en.witness) {
            line += ", witness j=" + std::to_string(*en.witness) + ", residual " + io::fmt(en.residual);
        }
        out.lines.push_back(line);
    }
    out.details["witnesses"] = witnesses;
    out.verdict = !rep.supported ? Verdict::unsupported : rep.passed ? Verdict::pass : Verdict::fail;
}

inline void judge_corollary_1_3(const json &e, CheckOutcome &out)
{
    auto r = verify_corollary_1_3(profile_from_json(e.at("total")), profile_from_json(e.at("base")),
                                  profile_from_json(e.at("relative")));
    out.details = {{"total", opt_bool(r.total)},
                   {"base", opt_bool(r.base)},
                   {"relative", opt_bool(r.relative)},
                   {"vacuous", r.vacuous}};
    out.lines.push_back("distinct consecutive degrees: f " + opt_bool(r.total) + ", g " + opt_bool(r.base)
                        + ", f|pi " + opt_bool(r.relative));
    if (r.vacuous) {
        out.lines.push_back("predicate false; implication vacuous");
    } else if (r.supported) {
        out.lines.push_back(r.passed ? "implication holds" : "implication violated");
    }
    out.verdict = !r.supported ? Verdict::unsupported : r.passed ? Verdict::pass : Verdict::fail;
}

inline void judge_logconcavity(const json &e, CheckOutcome &out)
{
    bool ok = true;
    for (const auto &[name, pj] : e.at("profiles").items()) {
        auto r = check_log_concavity(profile_from_json(pj));
        out.details[name] = r.first_violation ? json(*r.first_violation) : json(nullptr);
        out.lines.push_back(name + ": " + (r.ok ? std::string("log-concave")
                                                : "violated at p=" + std::to_string(*r.first_violation)));
        ok = ok && r.ok;
    }
    out.verdict = ok ? Verdict::pass : Verdict::fail;
}

inline void judge_power_rule(const json &e, CheckOutcome &out)
{
    const unsigned long n = e.at("n").get<unsigned long>();
    bool ok = true;
    for (const auto &pair : e.at("pairs")) {
        auto r = verify_power_rule(profile_from_json(pair.at("f")), profile_from_json(pair.at("fn")), n);
        const std::string name = pair.at("name").get<std::string>();
        json rows = json::array();
        double worst = 0;
        for (const auto &en : r.entries) {
            rows.push_back({{"p", en.p}, {"expected", en.expected}, {"actual", en.actual},
                            {"relative_error", en.relative_error}});
            worst = std::max(worst, en.relative_error);
        }
        out.details[name] = rows;
        out.lines.push_back(name + ": max relative error " + io::fmt(worst) + (r.passed ? "" : " (fails)"));
        ok = ok && r.passed;
    }
    out.verdict = ok ? Verdict::pass : Verdict::fail;
}

inline void judge_corollary_1_2(const json &e, CheckOutcome &out)
{
    bool ok = true;
    if (e.at("mode") == "exact") {
        DegreeProfile a = profile_from_json(e.at("original"));
        for (const auto &c : e.at("conjugates")) {
            DegreeProfile b = profile_from_json(c.at("profile"));
            bool same = a.values == b.values && a.characteristic == b.characteristic;
            ok = ok && same;
        }
        out.lines.push_back(std::to_string(e.at("conjugates").size()) + " unimodular conjugates: "
                            + (ok ? "identical profiles" : "profiles differ"));
    } else {
        const json &orig = e.at("original");
        const double ub = orig.at("upper_bound").get<double>();
        for (const auto &c : e.at("conjugates")) {
            ok = ok && c.at("sequence") == orig.at("sequence") && c.at("upper_bound").get<double>() == ub;
        }
        out.lines.push_back(std::to_string(e.at("conjugates").size()) + " linear conjugates: "
                            + (ok ? "identical degree sequences, d1 upper bound " + io::fmt(ub)
                                  : "degree sequences differ"));
    }
    out.verdict = ok ? Verdict::pass : Verdict::fail;
}

inline void judge_lemma_4_2(const json &e, CheckOutcome &out)
{
    auto r = lemma_4_2_from_sequence(e.at("p").get<int>(), io::integers(e.at("b"), "b"), e.at("target").get<double>());
    out.details = {{"gaps", r.gaps}, {"decay_ratio", r.decay_ratio}, {"final_gap", r.gaps.back()}};
    out.details["monotone_from"] = r.monotone_from ? json(*r.monotone_from) : json(nullptr);
    out.lines.push_back("target d_" + std::to_string(r.p) + "(f) = " + io::fmt(r.target));
    out.lines.push_back("gap at n=" + std::to_string(r.gaps.size()) + ": " + io::fmt(r.gaps.back()));
    out.lines.push_back(r.monotone_from ? "gap nonincreasing from n=" + std::to_string(*r.monotone_from)
                                        : std::string("gap not eventually monotone"));
    out.lines.push_back("fitted ratio b_p(n+1)/(d b_p(n)) = " + io::fmt(r.decay_ratio));
    out.verdict = r.passed ? Verdict::pass : Verdict::fail;
}

inline void judge_relative(const json &e, CheckOutcome &out)
{
    auto r = verify_relative_profile(profile_from_json(e.at("relative")));
    out.details = {{"d0_is_one", r.d0_is_one}, {"at_least_one", r.at_least_one}, {"log_concave", r.log_concave.ok}};
    out.lines.push_back(std::string("d0(f|pi) = 1: ") + (r.d0_is_one ? "yes" : "no") + ", all >= 1: "
                        + (r.at_least_one ? "yes" : "no") + ", log-concave: " + (r.log_concave.ok ? "yes" : "no"));
    out.verdict = r.passed ? Verdict::pass : Verdict::fail;
}

inline void judge_max_degree(const json &e, CheckOutcome &out)
{
    DegreeProfile f = profile_from_json(e.at("total"));
    DegreeProfile g = profile_from_json(e.at("base"));
    for (std::size_t p = 0; p < f.size(); ++p) {
        if (!f.known(p)) {
            out.lines.push_back("total profile incomplete");
            out.verdict = Verdict::unsupported;
            return;
        }
    }
    bool ok = max_degree_dominates(f, g);
    out.lines.push_back(ok ? "max d_p(f) >= max d_p(g)" : "max d_p(f) < max d_p(g)");
    out.verdict = ok ? Verdict::pass : Verdict::fail;
}

} // namespace detail

// Pure function of the evidence, so a parsed report can be judged again.
inline CheckOutcome judge(const std::string &check, const json &evidence)
{
    CheckOutcome out;
    out.name = check;
    out.evidence = evidence;
    if (check == "theorem1.1") {
        detail::judge_theorem(evidence, out);
    } else if (check == "corollary1.3") {
        detail::judge_corollary_1_3(evidence, out);
    } else if (check == "logconcavity") {
        detail::judge_logconcavity(evidence, out);
    } else if (check == "powerrule") {
        detail::judge_power_rule(evidence, out);
    } else if (check == "corollary1.2") {
        detail::judge_corollary_1_2(evidence, out);
    } else if (check == "lemma4.2") {
        detail::judge_lemma_4_2(evidence, out);
    } else if (check == "proposition3.6") {
        detail::judge_relative(evidence, out);
    } else if (check == "maxdegree") {
        detail::judge_max_degree(evidence, out);
    } else {
        throw input_error("unknown check '" + check + "'");
    }
    return out;
}

inline CheckOutcome run_check(const SystemDescription &d, const std::string &check)
{
    auto profiles = compute_profiles(d);
    return judge(check, gather_evidence(d, check, profiles));
}

inline json outcome_json(const CheckOutcome &c)
{
    return json{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"evidence", c.evidence}, {"details", c.details}};
}

inline json options_json(const RunOptions &o)
{
    json j{{"N", o.n}, {"p", o.p}, {"seed", std::to_string(o.seed)}, {"power", o.power}};
    if (o.tolerance) {
        j["tolerance"] = *o.tolerance;
    }
    return j;
}

inline json build_report(const SystemDescription &d)
{
    json r;
    r["system"] = d.source;
    r["kind"] = kind_name(d.kind);
    r["options"] = options_json(d.options);
    auto profiles = compute_profiles(d);
    r["profiles"] = profiles_json(profiles);
    try {
        r["sequences"] = compute_sequences(d, d.options.p, d.options.n);
    } catch (const unsupported_error &e) {
        r["sequences"] = {{"unsupported", e.what()}};
    }
    r["checks"] = json::array();
    for (const auto &name : check_names()) {
        try {
            r["checks"].push_back(outcome_json(judge(name, gather_evidence(d, name, profiles))));
        } catch (const unsupported_error &e) {
            r["checks"].push_back({{"name", name}, {"verdict", "unsupported"}, {"reason", e.what()}});
        }
    }
    return r;
}

struct ReverifyMismatch {
    std::string check;
    std::string recorded;
    std::string recomputed;
};

// Judges every recorded check again from its stored evidence.
inline std::vector<ReverifyMismatch> reverify_report(const json &report)
{
    std::vector<ReverifyMismatch> out;
    for (const auto &c : io::field(report, "checks", "report")) {
        const std::string name = c.at("name").get<std::string>();
        const std::string recorded = c.at("verdict").get<std::string>();
        if (!c.contains("evidence")) {
            if (recorded != "unsupported") {
                out.push_back({name, recorded, "no evidence"});
            }
            continue;
        }
        std::string again = to_string(judge(name, c.at("evidence")).verdict);
        if (again != recorded) {
            out.push_back({name, recorded, again});
        }
    }
    return out;
}

} // namespace dyndeg

#endif
