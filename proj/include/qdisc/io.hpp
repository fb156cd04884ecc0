#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV serialization of series, family specs, parameters,
 *        norm results and comparability reports. Complex numbers are [re, im].
 */

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "qdisc/families.hpp"
#include "qdisc/params.hpp"
#include "qdisc/series.hpp"
#include "qdisc/spaces.hpp"
#include "qdisc/verify.hpp"

namespace qdisc {

using json = nlohmann::ordered_json;

/// Malformed or incomplete input document.
class parse_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Output could not be written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scalars and series
// ---------------------------------------------------------------------------

inline json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

inline cd complex_from_json(const json& j) {
    if (j.is_number()) return cd{j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw parse_error("complex number must be [re, im]");
    return cd{j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const TaylorSeries& f) {
    json c = json::array();
    for (cd a : f.coeffs()) c.push_back(complex_to_json(a));
    return json{{"coeffs", c}};
}

inline TaylorSeries taylor_from_json(const json& j) {
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw parse_error("series document needs a \"coeffs\" array");
    std::vector<cd> c;
    for (const auto& e : j["coeffs"]) c.push_back(complex_from_json(e));
    if (c.empty()) throw parse_error("\"coeffs\" must not be empty");
    return TaylorSeries(std::move(c));
}

/// Fourier data as {"bandwidth": B, "fourier": [c_{-B}, ..., c_B]}.
inline json to_json(const FourierSeries& F) {
    json c = json::array();
    for (int n = -F.bandwidth(); n <= F.bandwidth(); ++n) c.push_back(complex_to_json(F[n]));
    return json{{"bandwidth", F.bandwidth()}, {"fourier", c}};
}

inline FourierSeries fourier_from_json(const json& j) {
    if (!j.is_object() || !j.contains("fourier") || !j["fourier"].is_array())
        throw parse_error("Fourier document needs a \"fourier\" array");
    const auto& arr = j["fourier"];
    if (arr.size() % 2 != 1) throw parse_error("\"fourier\" must hold 2B+1 coefficients");
    const int B = static_cast<int>(arr.size() / 2);
    if (j.contains("bandwidth") && j["bandwidth"].get<int>() != B) throw parse_error("\"bandwidth\" disagrees with \"fourier\" length");
    FourierSeries F(B);
    for (int n = -B; n <= B; ++n) F.set(n, complex_from_json(arr[static_cast<std::size_t>(n + B)]));
    return F;
}

inline json to_json(const FamilyMember& m) {
    return std::visit([](const auto& s) { return to_json(s); }, m);
}

// ---------------------------------------------------------------------------
// Parameters and family specs
// ---------------------------------------------------------------------------

inline json to_json(const SpaceParams& p) { return json{{"p", p.p}, {"beta", p.beta}, {"b", p.b}, {"nu", p.nu}}; }

namespace detail {

inline double number_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw parse_error(std::string("field \"") + key + "\" must be a number");
    return j[key].get<double>();
}

inline long long integer_field(const json& j, const char* key, long long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw parse_error(std::string("field \"") + key + "\" must be an integer");
    return j[key].get<long long>();
}

} // namespace detail

inline SpaceParams space_params_from_json(const json& j, SpaceParams base = {}) {
    if (!j.is_object()) throw parse_error("params block must be an object");
    base.p = detail::number_field(j, "p", base.p);
    base.beta = detail::number_field(j, "beta", base.beta);
    base.b = detail::number_field(j, "b", base.b);
    base.nu = detail::number_field(j, "nu", base.nu);
    return base;
}

inline FamilyKind family_kind_from_string(const std::string& s) {
    for (FamilyKind k : {FamilyKind::monomial, FamilyKind::polynomial, FamilyKind::lacunary, FamilyKind::fbTest,
                         FamilyKind::boundaryLacunary})
        if (s == to_string(k)) return k;
    throw parse_error("unknown family kind \"" + s + "\"");
}

inline json to_json(const FamilySpec& s) {
    json params = json::object();
    switch (s.kind) {
    case FamilyKind::monomial: params["k"] = s.k; break;
    case FamilyKind::polynomial:
        params["seed"] = s.seed;
        params["degree"] = s.degree;
        break;
    case FamilyKind::lacunary:
    case FamilyKind::boundaryLacunary:
        params["gamma"] = s.gamma;
        params["K"] = s.K;
        break;
    case FamilyKind::fbTest:
        params["b"] = complex_to_json(s.b);
        params["beta"] = s.beta;
        break;
    }
    return json{{"kind", to_string(s.kind)}, {"params", params}, {"N", s.N}};
}

inline FamilySpec family_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw parse_error("family spec needs a string \"kind\"");
    FamilySpec s;
    s.kind = family_kind_from_string(j["kind"].get<std::string>());
    const json params = j.value("params", json::object());
    if (!params.is_object()) throw parse_error("family \"params\" must be an object");
    const long long N = detail::integer_field(j, "N", static_cast<long long>(s.N));
    if (N < 1) throw parse_error("\"N\" must be >= 1");
    s.N = static_cast<std::size_t>(N);
    switch (s.kind) {
    case FamilyKind::monomial: s.k = static_cast<int>(detail::integer_field(params, "k", s.k)); break;
    case FamilyKind::polynomial: {
        const long long seed = detail::integer_field(params, "seed", static_cast<long long>(s.seed));
        if (seed < 0) throw parse_error("\"seed\" must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
        s.degree = static_cast<int>(detail::integer_field(params, "degree", s.degree));
        break;
    }
    case FamilyKind::lacunary:
    case FamilyKind::boundaryLacunary:
        s.gamma = detail::number_field(params, "gamma", s.gamma);
        s.K = static_cast<int>(detail::integer_field(params, "K", s.K));
        break;
    case FamilyKind::fbTest:
        if (params.contains("b")) s.b = complex_from_json(params["b"]);
        s.beta = detail::number_field(params, "beta", s.beta);
        break;
    }
    return s;
}

/// A parsed --fn document: explicit coefficients or a family spec, plus space parameters.
struct FunctionSpecDocument {
    FamilyMember member;
    std::optional<FamilySpec> family;
    SpaceParams params{};
    bool params_given = false;

    const TaylorSeries& taylor() const {
        if (const auto* f = std::get_if<TaylorSeries>(&member)) return *f;
        throw parse_error("this command needs an analytic (Taylor) function");
    }
    FourierSeries fourier() const {
        if (const auto* F = std::get_if<FourierSeries>(&member)) return *F;
        return FourierSeries::trace(std::get<TaylorSeries>(member));
    }
};

/// Space parameters live under "space"; for explicit coefficient documents
/// "params" is accepted as well, since a family spec uses "params" for itself.
inline FunctionSpecDocument parse_function_spec(const json& j) {
    if (!j.is_object()) throw parse_error("function document must be a JSON object");
    FunctionSpecDocument doc;
    doc.member = TaylorSeries{};
    if (j.contains("coeffs")) {
        doc.member = taylor_from_json(j);
        if (j.contains("params")) {
            doc.params = space_params_from_json(j["params"]);
            doc.params_given = true;
        }
    } else if (j.contains("fourier")) {
        doc.member = fourier_from_json(j);
        if (j.contains("params")) {
            doc.params = space_params_from_json(j["params"]);
            doc.params_given = true;
        }
    } else if (j.contains("kind")) {
        doc.family = family_spec_from_json(j);
        doc.member = make_family(*doc.family);
    } else {
        throw parse_error("function document needs \"coeffs\", \"fourier\" or \"kind\"");
    }
    if (j.contains("space")) {
        doc.params = space_params_from_json(j["space"]);
        doc.params_given = true;
    }
    return doc;
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("malformed JSON: ") + e.what());
    }
}

/// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
inline json load_json_argument(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_json_text(arg);
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw parse_error("cannot read function document \"" + arg + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

inline json to_json(const Witness& w) {
    if (w.kind == Witness::Kind::arc)
        return json{{"kind", "arc"}, {"center", w.arc.center}, {"length", w.arc.length}, {"normLength", w.arc.norm_length()}};
    return json{{"kind", "point"}, {"point", complex_to_json(w.point)}};
}

inline json to_json(const NormResult& r, bool with_table = false) {
    json j{{"value", r.value}, {"witness", to_json(r.witness)}, {"refinementDelta", r.refinement_delta},
           {"refinedValue", r.refined_value}};
    if (!r.extras.empty()) {
        json e = json::object();
        for (const auto& [k, v] : r.extras) e[k] = v;
        j["extras"] = e;
    }
    if (with_table) {
        json t = json::array();
        for (const auto& e : r.table) t.push_back(json::array({e.x, e.y, e.value}));
        j["tableColumns"] = json::array({r.x_name, r.y_name, "value"});
        j["table"] = t;
    }
    return j;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// RFC 4180 quoting when the field holds a comma, quote or newline.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string norm_table_csv(const NormResult& r) {
    std::string out = r.x_name + "," + r.y_name + ",value\n";
    for (const auto& e : r.table) out += format_double(e.x) + "," + format_double(e.y) + "," + format_double(e.value) + "\n";
    return out;
}

inline json to_json(const ComparabilityReport& rep) {
    json params = json::object();
    for (const auto& [k, v] : rep.param_record) params[k] = v;
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row{{"instanceId", r.instance_id}, {"group", r.group},   {"quantityA", r.a},
                 {"quantityB", r.b},            {"ratio", nullptr},   {"deltaA", r.delta_a},
                 {"deltaB", r.delta_b},         {"degenerate", r.degenerate}};
        if (!r.degenerate) row["ratio"] = r.ratio;
        rows.push_back(row);
    }
    json groups = json::array();
    for (const auto& g : rep.groups()) {
        json e{{"group", g}, {"spread", rep.spread(g)}, {"maxRatio", nullptr}, {"minRatio", nullptr}, {"maxDelta", rep.max_delta(g)}};
        if (!rep.ratios(g).empty()) {
            e["maxRatio"] = rep.max_ratio(g);
            e["minRatio"] = rep.min_ratio(g);
        }
        groups.push_back(e);
    }
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json e{{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound}};
        if (c.relation == "in") e["boundHi"] = c.bound_hi;
        e["passed"] = c.passed;
        checks.push_back(e);
    }
    return json{{"experimentId", rep.experiment_id}, {"paramRecord", params}, {"rows", rows},
                {"groups", groups},                 {"checks", checks},      {"passed", rep.passed()}};
}

inline std::string report_csv(const ComparabilityReport& rep) {
    std::string out = "instanceId,quantityA,quantityB,ratio,deltaA,deltaB\n";
    for (const auto& r : rep.rows) {
        out += csv_field(r.group + ":" + r.instance_id) + "," + format_double(r.a) + "," + format_double(r.b) + "," +
               format_double(r.ratio) + "," + format_double(r.delta_a) + "," + format_double(r.delta_b) + "\n";
    }
    return out;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Writes `content` to `path` atomically (temporary file then rename); "-" or "" is stdout.
inline void write_output(const std::string& content, const std::string& path) {
    if (path.empty() || path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        std::fflush(stdout);
        if (std::ferror(stdout)) throw io_error("cannot write to stdout");
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open \"" + tmp.string() + "\" for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) throw io_error("cannot write \"" + tmp.string() + "\"");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw io_error("cannot move output into \"" + path + "\"");
    }
}

} // namespace qdisc
