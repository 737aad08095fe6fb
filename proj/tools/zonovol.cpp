#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zonovol/errors.hpp"
#include "zonovol/inequality.hpp"
#include "zonovol/io.hpp"
#include "zonovol/oracle.hpp"
#include "zonovol/stability.hpp"

using namespace zonovol;

namespace {

enum Exit { kOk = 0, kUsage = 1, kApplicability = 2, kBudget = 3, kViolated = 4, kInternal = 5 };

struct Options {
    std::string bodies;
    std::vector<int> mult;
    std::optional<int> gamma;
    std::optional<int> beta;
    std::uint64_t mc_samples = 10000;
    std::uint64_t seed = 0;
    std::string format = "text";
    bool oracle = false;
    std::optional<std::uint64_t> fuzz;
    int fuzz_n = 3;
    std::string body_name;
    std::optional<int> alpha;
    double eta = 0.0;
    std::string basis;
    std::string offset;
    std::string id;
};

bool json_out(const Options& o) { return o.format == "json"; }

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);
    return buf;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

template <class T>
std::string joined(const std::vector<T>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ' ';
        if constexpr (std::is_floating_point_v<T>) s += num(xs[i]);
        else s += std::to_string(xs[i]);
    }
    return s;
}

EvalConfig eval_config(const Options& o) {
    EvalConfig cfg;
    cfg.evaluator = Evaluator::montecarlo;
    cfg.mc = {o.mc_samples, o.seed};
    if (const char* env = std::getenv("ZONOVOL_BUDGET")) {
        const std::string s(env);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || v == 0)
            throw ContractViolation("ZONOVOL_BUDGET: expected a positive integer, got '" + s + "'");
        cfg.opts.budget = v;
    }
    return cfg;
}

BodyFile read_bodies(const Options& o) {
    if (o.bodies.empty()) throw ContractViolation("--bodies FILE is required");
    return load_body_file(o.bodies);
}

std::size_t designated_index(const BodyFile& f) {
    for (std::size_t i = 0; i < f.bodies.size(); ++i)
        if (std::holds_alternative<VPolytope>(f.bodies[i].body)) return i;
    for (std::size_t i = 0; i < f.bodies.size(); ++i)
        if (!std::holds_alternative<Ball>(f.bodies[i].body)) return i;
    throw ContractViolation("--gamma needs a body other than the ball");
}

struct Terms {
    std::vector<BodyTerm> terms;
    std::vector<std::string> names;
    std::optional<std::size_t> designated;
};

// Multiplicities come from --mult, then the file, then one copy of each body when the count
// matches the dimension. --gamma/--beta then set K to gamma copies and the ball to beta - gamma,
// adding a ball when the file has none.
Terms build_terms(const BodyFile& f, const Options& o) {
    const int n = f.dimension;
    std::vector<int> mult;
    if (!o.mult.empty()) mult = o.mult;
    else if (f.multiplicities) mult = *f.multiplicities;
    else if (o.gamma || o.beta) mult.assign(f.bodies.size(), 0);
    else if (static_cast<int>(f.bodies.size()) == n) mult.assign(f.bodies.size(), 1);
    else throw ContractViolation("no multiplicities: pass --mult or add \"multiplicities\" to the body file");
    if (mult.size() != f.bodies.size())
        throw ContractViolation("--mult has " + std::to_string(mult.size()) + " entries for " +
                                std::to_string(f.bodies.size()) + " bodies");
    for (int a : mult)
        if (a < 0) throw ContractViolation("multiplicities must be non-negative");

    Terms t;
    for (std::size_t i = 0; i < f.bodies.size(); ++i) {
        t.terms.push_back({f.bodies[i].body, mult[i]});
        t.names.push_back(f.bodies[i].name);
    }
    if (o.gamma || o.beta) {
        if (!o.gamma || !o.beta) throw ContractViolation("--gamma and --beta go together");
        const int g = *o.gamma, b = *o.beta;
        if (g < 0 || b < g || b > n) throw ContractViolation("need 0 <= gamma <= beta <= n");
        const std::size_t k = designated_index(f);
        t.terms[k].multiplicity = g;
        t.designated = k;
        std::optional<std::size_t> ball;
        for (std::size_t i = 0; i < t.terms.size(); ++i)
            if (std::holds_alternative<Ball>(t.terms[i].body)) {
                if (ball) throw ContractViolation("more than one ball in the body file");
                ball = i;
            }
        if (ball) {
            t.terms[*ball].multiplicity = b - g;
        } else {
            t.terms.push_back({Ball{n}, b - g});
            t.names.push_back("ball");
        }
    }
    int total = 0;
    for (const auto& term : t.terms) total += term.multiplicity;
    if (total != n)
        throw ContractViolation("multiplicities sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    return t;
}

VPolytope as_polytope(const Body& b) {
    if (const auto* z = std::get_if<Zonotope>(&b)) return zonotope_to_vpolytope(*z);
    if (const auto* p = std::get_if<VPolytope>(&b)) return *p;
    throw ApplicabilityError("the polarization oracle needs polytopes; the ball has no vertex description");
}

const NamedBody& pick_body(const BodyFile& f, const Options& o) {
    if (o.body_name.empty()) return f.bodies.front();
    for (const auto& b : f.bodies)
        if (b.name == o.body_name) return b;
    throw ContractViolation("no body named '" + o.body_name + "'");
}

Vec parse_vector(const std::string& s, int n, const std::string& flag) {
    std::vector<double> xs;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && item[used] == ' ') ++used;
        if (used == 0 || used != item.size() || !std::isfinite(x))
            throw ContractViolation(flag + ": '" + item + "' is not a number");
        xs.push_back(x);
    }
    if (static_cast<int>(xs.size()) != n)
        throw ContractViolation(flag + ": expected " + std::to_string(n) + " coordinates, got " + std::to_string(xs.size()));
    return Eigen::Map<Vec>(xs.data(), n);
}

int cmd_mixedvol(const Options& o) {
    const auto f = read_bodies(o);
    const auto t = build_terms(f, o);
    const auto cfg = eval_config(o);
    const Estimate e = mixed_volume(t.terms, cfg);
    std::optional<double> oracle, agreement;
    if (o.oracle) {
        std::vector<PolytopeTerm> pts;
        for (const auto& term : t.terms)
            if (term.multiplicity > 0) pts.push_back({as_polytope(term.body), term.multiplicity});
        oracle = polarization_mixed_volume(std::span<const PolytopeTerm>(pts), cfg.opts);
        const double scale = std::max(std::abs(e.value), std::abs(*oracle));
        agreement = scale > 0.0 ? std::abs(e.value - *oracle) / scale : 0.0;
    }
    if (json_out(o)) {
        Json j;
        j["mixed_volume"] = to_json(e);
        if (oracle) {
            j["oracle"] = *oracle;
            j["agreement"] = *agreement;
        }
        std::cout << dump(j);
    } else {
        std::cout << num(e.value) << "\n";
        if (!e.exact) std::cout << "stderr: " << num(e.std_error) << "\n";
        if (oracle) std::cout << "agreement: " << format_short_sci(*agreement) << "\n";
    }
    return kOk;
}

int cmd_intrinsics(const Options& o) {
    const auto f = read_bodies(o);
    const auto cfg = eval_config(o);
    Json all = Json::array();
    for (const auto& nb : f.bodies) {
        Json list = Json::array();
        if (!json_out(o)) std::cout << nb.name << "\n";
        for (int j = 0; j <= f.dimension; ++j) {
            const Estimate e = body_intrinsic_volume(nb.body, j, cfg);
            list.push_back(Json{{"j", j}, {"value", e.value}, {"std_error", e.std_error}, {"exact", e.exact}});
            if (!json_out(o)) {
                std::cout << "  V_" << j << " = " << num(e.value);
                if (!e.exact) std::cout << " +- " << num(e.std_error);
                std::cout << "\n";
            }
        }
        all.push_back(Json{{"name", nb.name}, {"intrinsic_volumes", list}});
    }
    if (json_out(o)) std::cout << dump(Json{{"dimension", f.dimension}, {"bodies", all}});
    return kOk;
}

void print_report(const InequalityReport& r, const std::vector<std::string>& names) {
    std::cout << "inequality: " << inequality_name(r.id) << "\n";
    std::cout << "bodies: ";
    for (std::size_t i = 0; i < names.size(); ++i) std::cout << (i ? " " : "") << names[i];
    std::cout << "\n";
    std::cout << "lhs: " << num(r.lhs) << "\n";
    std::cout << "rhs: " << num(r.rhs) << "\n";
    std::cout << "epsilon: " << (r.epsilon ? num(*r.epsilon) : std::string("undefined (lhs vanishes)")) << "\n";
    std::cout << "holds: " << yes(r.holds) << "\n";
    std::cout << "equality_within: " << yes(r.equality_within) << "\n";
    std::cout << "proven: " << yes(r.proven) << "\n";
    if (r.std_error > 0.0) std::cout << "std_error: " << num(r.std_error) << "\n";
    std::cout << "dims: " << joined(r.diagnostics.dims) << "\n";
    std::cout << "multiplicities: " << joined(r.diagnostics.multiplicities) << "\n";
    std::cout << "dims_match: " << yes(r.diagnostics.dims_match) << "\n";
    std::cout << "outside_equality_hypotheses: " << yes(r.diagnostics.outside_equality_hypotheses) << "\n";
}

int violation_exit(const InequalityReport& r) {
    if (r.holds) return kOk;
    if (r.proven) std::cerr << "NUMERICAL INCONSISTENCY — file a bug\n";
    return kViolated;
}

int cmd_check_fuzz(const Options& o, InequalityId id) {
    if (o.fuzz_n < 1) throw ContractViolation("--n must be positive");
    CheckParams params{eval_config(o), std::nullopt};
    Rng rng(o.seed);
    std::uint64_t held = 0, violated = 0, not_applicable = 0, proven_violations = 0;
    Json failures = Json::array();
    for (std::uint64_t k = 0; k < *o.fuzz; ++k) {
        const auto terms = fuzz_zonotope_configuration(o.fuzz_n, rng);
        try {
            const auto r = check_inequality(id, terms, params);
            if (r.holds) {
                ++held;
            } else {
                ++violated;
                if (r.proven) ++proven_violations;
                Json fj = to_json(r);
                fj["configuration"] = k;
                failures.push_back(fj);
            }
        } catch (const ApplicabilityError&) {
            ++not_applicable;
        }
    }
    if (json_out(o)) {
        Json j;
        j["inequality_id"] = std::string(inequality_name(id));
        j["dimension"] = o.fuzz_n;
        j["seed"] = o.seed;
        j["configurations"] = *o.fuzz;
        j["held"] = held;
        j["violated"] = violated;
        j["not_applicable"] = not_applicable;
        j["failures"] = failures;
        std::cout << dump(j);
    } else {
        std::cout << inequality_name(id) << " fuzz: " << *o.fuzz << " configurations in R^" << o.fuzz_n << ", seed "
                  << o.seed << "\n";
        std::cout << "held: " << held << "\nviolated: " << violated << "\nnot applicable: " << not_applicable << "\n";
    }
    if (proven_violations > 0) std::cerr << "NUMERICAL INCONSISTENCY — file a bug\n";
    return violated > 0 ? kViolated : kOk;
}

int cmd_check(const Options& o) {
    const InequalityId id = parse_inequality_id(o.id);
    if (o.fuzz) return cmd_check_fuzz(o, id);
    const auto f = read_bodies(o);
    const auto t = build_terms(f, o);
    CheckParams params{eval_config(o), t.designated};
    const auto r = check_inequality(id, t.terms, params);
    if (json_out(o)) std::cout << dump(to_json(r));
    else print_report(r, t.names);
    return violation_exit(r);
}

void print_radius(const char* label, const RadiusEstimate& r) {
    std::cout << label << ": [" << num(r.lower) << ", " << num(r.upper) << "] (" << radius_method_name(r.method)
              << ")\n";
}

StabilityParams stability_params(const Options& o) {
    StabilityParams p;
    p.eval = eval_config(o);
    p.seed = o.seed;
    return p;
}

int cmd_certificate(const Options& o, StabilityTheorem th) {
    const auto f = read_bodies(o);
    const auto t = build_terms(f, o);
    const auto c = check_stability(th, t.terms, stability_params(o));
    if (json_out(o)) {
        std::cout << dump(to_json(c));
    } else {
        std::cout << "theorem: " << theorem_name(c.theorem) << "\n";
        std::cout << "applicable: " << yes(c.applicable) << "\n";
        if (!c.applicable) std::cout << "reason: " << c.reason << "\n";
        std::cout << "epsilon: " << num(c.epsilon) << "\n";
        for (std::size_t i = 0; i < c.recovered_subspaces.size(); ++i) {
            const auto& L = c.recovered_subspaces[i];
            std::cout << "L_" << i + 1 << ": dim " << L.dim() << ", basis";
            for (int k = 0; k < L.dim(); ++k) {
                std::vector<double> col(L.basis().col(k).data(), L.basis().col(k).data() + L.ambient_dim());
                std::cout << " (" << joined(col) << ")";
            }
            std::cout << "\n";
        }
        std::cout << "bracket: " << num(c.bracket_value) << "\n";
        if (c.bracket_bound)
            std::cout << "bracket bound: " << num(*c.bracket_bound) << (c.bound_trivial ? " (trivial)" : "") << "\n";
        for (std::size_t i = 0; i < c.containment_slacks.size(); ++i)
            std::cout << "containment " << i + 1 << ": slack " << num(c.containment_slacks[i]) << " <= radius "
                      << num(c.containment_radii[i]) << "\n";
        if (c.radius_condition) std::cout << "radius condition: " << yes(*c.radius_condition) << "\n";
        std::cout << "holds: " << yes(c.holds) << "\n";
    }
    return c.applicable && !c.holds ? kViolated : kOk;
}

int cmd_projstab(const Options& o) {
    const auto f = read_bodies(o);
    const auto& nb = pick_body(f, o);
    if (!o.beta) throw ContractViolation("projstab needs --beta");
    const auto r = projstab_check(nb.body, *o.beta, stability_params(o));
    if (json_out(o)) {
        Json j = to_json(r);
        std::cout << dump(Json{{"body", nb.name}, {"report", j}});
    } else {
        std::cout << "body: " << nb.name << "\nbeta: " << r.beta << "\n";
        std::cout << "V_beta(K): " << num(r.lhs);
        if (r.lhs_std_error > 0.0) std::cout << " +- " << num(r.lhs_std_error);
        std::cout << "\nmax V_beta(K|L): " << num(r.max_projection) << "\nfactor: " << num(r.factor)
                  << "\nrhs: " << num(r.rhs) << "\n";
        print_radius("r_beta", r.r_beta);
        print_radius("r_beta+1", r.r_beta1);
        std::cout << "holds: " << yes(r.holds) << "\n";
    }
    return r.holds ? kOk : kViolated;
}

int cmd_lemma52(const Options& o) {
    if (o.fuzz_n < 1) throw ContractViolation("--n must be positive");
    Json list = Json::array();
    bool all = true;
    if (!json_out(o)) std::cout << "n j V_j(B^n)/kappa_j 2^(n/2)\n";
    for (int n = 1; n <= o.fuzz_n; ++n)
        for (int j = 1; j <= n; ++j) {
            const auto r = ball_intrinsic_ratio(n, j);
            all = all && r.holds;
            if (json_out(o)) list.push_back(to_json(r));
            else std::cout << n << " " << j << " " << num(r.ratio) << " " << num(r.bound) << (r.holds ? "" : " VIOLATED") << "\n";
        }
    if (json_out(o)) std::cout << dump(Json{{"n_max", o.fuzz_n}, {"ratios", list}, {"all_hold", all}});
    else std::cout << "all hold: " << yes(all) << "\n";
    if (!all) std::cerr << "NUMERICAL INCONSISTENCY — file a bug\n";
    return all ? kOk : kViolated;
}

int cmd_cm(const Options& o) {
    const auto f = read_bodies(o);
    const auto& nb = pick_body(f, o);
    const int n = f.dimension;
    if (!o.alpha) throw ContractViolation("cm needs --alpha");
    if (o.basis.empty()) throw ContractViolation("cm needs --basis 'v1;v2;...' spanning the flat");
    std::vector<Vec> span;
    std::stringstream ss(o.basis);
    std::string item;
    while (std::getline(ss, item, ';')) span.push_back(parse_vector(item, n, "--basis"));
    const Vec offset = o.offset.empty() ? Vec::Zero(n) : parse_vector(o.offset, n, "--offset");
    const Flat A{orthonormalize(std::span<const Vec>(span), n), offset};
    const auto r = cm_intrinsic_check(nb.body, A, *o.alpha, o.eta, eval_config(o));
    if (json_out(o)) {
        std::cout << dump(Json{{"body", nb.name}, {"alpha", *o.alpha}, {"eta", o.eta}, {"report", to_json(r)}});
    } else {
        std::cout << "body: " << nb.name << "\nalpha: " << *o.alpha << "\neta: " << num(o.eta) << "\n";
        std::cout << "applicable: " << yes(r.applicable) << "\n";
        if (!r.applicable) std::cout << "reason: " << r.reason << "\n";
        std::cout << "slack: " << num(r.slack) << "\n";
        print_radius("r_alpha(M)", r.r_alpha);
        print_radius("r_alpha(M|A)", r.r_alpha_projected);
        std::cout << "V_alpha(M): " << num(r.lhs) << "\nfactor * V_alpha(M|A): " << num(r.rhs) << "\n";
        if (r.std_error > 0.0) std::cout << "std_error: " << num(r.std_error) << "\n";
        std::cout << "holds: " << yes(r.holds) << "\n";
    }
    return r.applicable && !r.holds ? kViolated : kOk;
}

int cmd_stability(const Options& o) {
    if (o.id == "projstab") return cmd_projstab(o);
    if (o.id == "lemma52") return cmd_lemma52(o);
    if (o.id == "cm") return cmd_cm(o);
    return cmd_certificate(o, parse_theorem_id(o.id));
}

int cmd_bracket(const Options& o) {
    const auto f = read_bodies(o);
    std::vector<Subspace> hulls;
    std::vector<int> dims;
    int total = 0;
    for (const auto& nb : f.bodies) {
        hulls.push_back(linear_hull(nb.body));
        dims.push_back(hulls.back().dim());
        total += dims.back();
    }
    if (total > f.dimension)
        throw ApplicabilityError("linear hull dimensions sum to " + std::to_string(total) + ", more than n = " +
                                 std::to_string(f.dimension));
    const double b = bracket(hulls);
    if (json_out(o)) std::cout << dump(Json{{"dims", dims}, {"bracket", b}});
    else std::cout << num(b) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed and intrinsic volumes of zonotopes and polytopes; reverse Alexandrov-Fenchel checks"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--bodies", o.bodies, "Body definition file (JSON)");
    app.add_option("--mult", o.mult, "Multiplicities a1,a2,... (one per body)")->delimiter(',');
    app.add_option("--gamma", o.gamma, "Copies of the general body K");
    app.add_option("--beta", o.beta, "Copies of K plus copies of the ball");
    app.add_option("--mc-samples", o.mc_samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Random seed");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--oracle", o.oracle, "Cross-check against the polarization oracle (mixedvol)");
    app.add_option("--fuzz", o.fuzz, "Check N random zonotope configurations instead of a body file (check)");
    app.add_option("--n", o.fuzz_n, "Dimension for --fuzz; largest n for lemma52");
    app.add_option("--body", o.body_name, "Body used by projstab and cm (default: the first)");
    app.add_option("--alpha", o.alpha, "Intrinsic volume index (cm)");
    app.add_option("--eta", o.eta, "Flat tolerance (cm)");
    app.add_option("--basis", o.basis, "Vectors spanning the flat, 'x1,x2;y1,y2' (cm)");
    app.add_option("--offset", o.offset, "A point of the flat (cm)");

    auto* mixedvol = app.add_subcommand("mixedvol", "Mixed volume of the bodies with their multiplicities")->fallthrough();
    auto* intrinsics = app.add_subcommand("intrinsics", "Intrinsic volumes V_0..V_n of every body")->fallthrough();
    auto* check = app.add_subcommand("check", "Check AF_LOWER, CONJ_1_1, THM_1_3, THM_1_4 or ZONOLATE")->fallthrough();
    check->add_option("id", o.id, "Inequality id")->required();
    auto* stability =
        app.add_subcommand("stability", "THM_1_5, THM_5_1, PROP_4_5, LEMMA_4_6, projstab, lemma52 or cm")->fallthrough();
    stability->add_option("id", o.id, "Theorem id")->required();
    auto* bracket_cmd = app.add_subcommand("bracket", "Bracket of the bodies' linear hulls")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*mixedvol) return cmd_mixedvol(o);
        if (*intrinsics) return cmd_intrinsics(o);
        if (*check) return cmd_check(o);
        if (*stability) return cmd_stability(o);
        if (*bracket_cmd) return cmd_bracket(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ContractViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ApplicabilityError& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kApplicability;
    } catch (const DegenerateBody& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kApplicability;
    } catch (const NeedsMonteCarlo& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kApplicability;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << " (raise ZONOVOL_BUDGET)\n";
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
