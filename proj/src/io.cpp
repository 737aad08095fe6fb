#include "zonovol/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace zonovol {

namespace {

std::string at(const std::string& path, const std::string& msg) { return path + ": " + msg; }

Vec read_vector(const Json& j, int n, const std::string& path) {
    if (!j.is_array()) throw ParseError(at(path, "expected an array of " + std::to_string(n) + " numbers"));
    if (static_cast<int>(j.size()) != n)
        throw ParseError(at(path, "has " + std::to_string(j.size()) + " coordinates, expected " + std::to_string(n)));
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        const auto& x = j[static_cast<std::size_t>(i)];
        if (!x.is_number()) throw ParseError(at(path + "[" + std::to_string(i) + "]", "expected a number"));
        v[i] = x.get<double>();
        if (!std::isfinite(v[i])) throw ParseError(at(path + "[" + std::to_string(i) + "]", "not finite"));
    }
    return v;
}

std::vector<Vec> read_vectors(const Json& j, int n, const std::string& path, bool allow_empty) {
    if (!j.is_array()) throw ParseError(at(path, "expected an array of points"));
    if (j.empty() && !allow_empty) throw ParseError(at(path, "must not be empty"));
    std::vector<Vec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_vector(j[i], n, path + "[" + std::to_string(i) + "]"));
    return out;
}

void allow_keys(const Json& obj, std::initializer_list<std::string_view> keys, const std::string& path) {
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (auto key : keys) ok = ok || key == k;
        if (!ok) throw ParseError(at(path, "unknown field '" + k + "'"));
    }
}

const Json& required(const Json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw ParseError(at(path, std::string("missing field '") + key + "'"));
    return obj.at(key);
}

Body read_body(const Json& b, int n, const std::string& path, std::string& name) {
    if (!b.is_object()) throw ParseError(at(path, "expected an object"));
    const auto& nm = required(b, "name", path);
    if (!nm.is_string() || nm.get<std::string>().empty()) throw ParseError(at(path + ".name", "expected a non-empty string"));
    name = nm.get<std::string>();
    const auto& kind_j = required(b, "kind", path);
    if (!kind_j.is_string()) throw ParseError(at(path + ".kind", "expected a string"));
    const std::string kind = kind_j.get<std::string>();
    try {
        if (kind == "zonotope") {
            allow_keys(b, {"name", "kind", "generators", "offset"}, path);
            auto gens = read_vectors(required(b, "generators", path), n, path + ".generators", true);
            Vec offset = b.contains("offset") ? read_vector(b.at("offset"), n, path + ".offset") : Vec::Zero(n);
            return Zonotope(n, gens, offset);
        }
        if (kind == "vpolytope") {
            allow_keys(b, {"name", "kind", "vertices"}, path);
            return VPolytope(read_vectors(required(b, "vertices", path), n, path + ".vertices", false));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(at(path, e.what()));
    }
    if (kind == "ball") {
        allow_keys(b, {"name", "kind", "radius"}, path);
        if (b.contains("radius")) {
            const auto& r = b.at("radius");
            if (!r.is_number()) throw ParseError(at(path + ".radius", "expected a number"));
            if (r.get<double>() != 1.0)
                throw ParseError(at(path + ".radius", "only the unit ball (radius 1) is supported; scale the other bodies instead"));
        }
        return Ball{n};
    }
    throw ParseError(at(path + ".kind", "unknown kind '" + kind + "' (expected zonotope, vpolytope or ball)"));
}

Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json mat_rows_json(const Mat& m) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
    return a;
}

template <class T>
Json list(const std::vector<T>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(x);
    return a;
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

BodyFile parse_body_file(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ParseError("line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ParseError("top level: expected an object");
    allow_keys(j, {"dimension", "bodies", "multiplicities"}, "top level");
    const auto& dim = required(j, "dimension", "top level");
    if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 64)
        throw ParseError("dimension: expected an integer between 1 and 64");
    BodyFile f;
    f.dimension = dim.get<int>();
    const auto& bodies = required(j, "bodies", "top level");
    if (!bodies.is_array() || bodies.empty()) throw ParseError("bodies: expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        const std::string path = "bodies[" + std::to_string(i) + "]";
        std::string name;
        Body b = read_body(bodies[i], f.dimension, path, name);
        if (!names.insert(name).second) throw ParseError(at(path + ".name", "duplicate name '" + name + "'"));
        f.bodies.push_back({name, std::move(b)});
    }
    if (j.contains("multiplicities")) {
        const auto& m = j.at("multiplicities");
        if (!m.is_array() || m.size() != f.bodies.size())
            throw ParseError("multiplicities: expected one integer per body");
        std::vector<int> out;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i].is_number_integer() || m[i].get<long long>() < 0 || m[i].get<long long>() > 64)
                throw ParseError("multiplicities[" + std::to_string(i) + "]: expected a non-negative integer");
            out.push_back(m[i].get<int>());
        }
        f.multiplicities = std::move(out);
    }
    return f;
}

BodyFile load_body_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_body_file(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Json to_json(const Body& body) {
    return std::visit(
        [](const auto& b) -> Json {
            using T = std::decay_t<decltype(b)>;
            Json j;
            if constexpr (std::is_same_v<T, Ball>) {
                j["kind"] = "ball";
                j["radius"] = 1.0;
            } else if constexpr (std::is_same_v<T, Zonotope>) {
                j["kind"] = "zonotope";
                j["generators"] = mat_rows_json(b.generators().transpose());
                j["offset"] = vec_json(b.offset());
            } else {
                j["kind"] = "vpolytope";
                Json v = Json::array();
                for (const auto& p : b.vertices()) v.push_back(vec_json(p));
                j["vertices"] = v;
            }
            return j;
        },
        body);
}

Json to_json(const Subspace& s) {
    Json j;
    j["dim"] = s.dim();
    j["basis"] = mat_rows_json(s.basis().transpose());
    return j;
}

Json to_json(const Estimate& e) {
    Json j;
    j["value"] = e.value;
    j["std_error"] = e.std_error;
    j["exact"] = e.exact;
    return j;
}

Json to_json(const InequalityReport& r) {
    Json j;
    j["inequality_id"] = std::string(inequality_name(r.id));
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["epsilon"] = optional_number(r.epsilon);
    j["holds"] = r.holds;
    j["equality_within"] = r.equality_within;
    Json d;
    d["dims"] = list(r.diagnostics.dims);
    d["multiplicities"] = list(r.diagnostics.multiplicities);
    d["pairwise_brackets"] = mat_rows_json(r.diagnostics.pairwise_brackets);
    d["dims_match"] = r.diagnostics.dims_match;
    d["outside_equality_hypotheses"] = r.diagnostics.outside_equality_hypotheses;
    d["degenerate"] = r.degenerate;
    d["proven"] = r.proven;
    d["std_error"] = r.std_error;
    j["diagnostics"] = d;
    return j;
}

Json to_json(const RadiusEstimate& r) {
    Json j;
    j["m"] = r.m;
    j["lower"] = r.lower;
    j["upper"] = r.upper;
    j["method"] = std::string(radius_method_name(r.method));
    return j;
}

Json to_json(const StabilityCertificate& c) {
    Json j;
    j["theorem_id"] = std::string(theorem_name(c.theorem));
    j["applicable"] = c.applicable;
    if (!c.applicable) j["reason"] = c.reason;
    j["epsilon"] = c.epsilon;
    Json subs = Json::array();
    for (const auto& s : c.recovered_subspaces) subs.push_back(to_json(s));
    j["recovered_subspaces"] = subs;
    j["bracket_value"] = c.bracket_value;
    j["bracket_bound"] = optional_number(c.bracket_bound);
    j["bound_trivial"] = c.bound_trivial;
    j["containment_slacks"] = list(c.containment_slacks);
    j["containment_radii"] = list(c.containment_radii);
    if (c.radius_condition) j["radius_condition"] = *c.radius_condition;
    j["holds"] = c.holds;
    return j;
}

Json to_json(const ProjStabReport& r) {
    Json j;
    j["beta"] = r.beta;
    j["lhs"] = r.lhs;
    j["lhs_std_error"] = r.lhs_std_error;
    j["max_projection"] = r.max_projection;
    j["factor"] = r.factor;
    j["rhs"] = r.rhs;
    j["r_beta"] = to_json(r.r_beta);
    j["r_beta_plus_1"] = to_json(r.r_beta1);
    j["holds"] = r.holds;
    return j;
}

Json to_json(const BallRatio& r) {
    Json j;
    j["n"] = r.n;
    j["j"] = r.j;
    j["ratio"] = r.ratio;
    j["bound"] = r.bound;
    j["holds"] = r.holds;
    return j;
}

Json to_json(const CmReport& r) {
    Json j;
    j["applicable"] = r.applicable;
    if (!r.applicable) j["reason"] = r.reason;
    j["slack"] = r.slack;
    j["r_alpha"] = to_json(r.r_alpha);
    j["r_alpha_projected"] = to_json(r.r_alpha_projected);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["factor"] = r.factor;
    j["std_error"] = r.std_error;
    j["holds"] = r.holds;
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_short_sci(double x) {
    if (x == 0.0) return "0.0e0";
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1e", x);
    std::string s(buf);
    const auto e = s.find('e');
    const int exponent = std::stoi(s.substr(e + 1));
    return s.substr(0, e) + "e" + std::to_string(exponent);
}

}  // namespace zonovol
