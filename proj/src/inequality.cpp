#include "zonovol/inequality.hpp"

#include <algorithm>
#include <cmath>

#include "zonovol/errors.hpp"
#include "zonovol/oracle.hpp"
#include "zonovol/special.hpp"
#include "zonovol/zonoid.hpp"

namespace zonovol {

namespace {

bool is_ball(const Body& b) { return std::holds_alternative<Ball>(b); }
bool is_zonoid(const Body& b) { return !std::holds_alternative<VPolytope>(b); }

int common_dimension(std::span<const BodyTerm> terms) {
    if (terms.empty()) throw ContractViolation("no bodies given");
    const int n = ambient_dim(terms.front().body);
    for (const auto& t : terms) {
        if (ambient_dim(t.body) != n) throw ContractViolation("bodies live in different dimensions");
        if (t.multiplicity < 0) throw ContractViolation("negative multiplicity");
    }
    return n;
}

void require_sum(std::span<const BodyTerm> terms, int n) {
    int total = 0;
    for (const auto& t : terms) total += t.multiplicity;
    if (total != n)
        throw ContractViolation("multiplicities sum to " + std::to_string(total) + ", expected " +
                                std::to_string(n));
}

McConfig derived_mc(const McConfig& mc, std::uint64_t stream) {
    return {mc.samples, Rng::substream(mc.seed, stream).next_u64()};
}

// First-order error of a product of independent estimates.
Estimate product(std::span<const Estimate> factors) {
    Estimate out{1.0, 0.0, true};
    for (const auto& f : factors) {
        out.value *= f.value;
        out.exact = out.exact && f.exact;
    }
    double var = 0.0;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (factors[j].std_error == 0.0) continue;
        double others = factors[j].std_error;
        for (std::size_t i = 0; i < factors.size(); ++i)
            if (i != j) others *= std::abs(factors[i].value);
        var += others * others;
    }
    out.std_error = std::sqrt(var);
    return out;
}

double ball_intrinsic_volume(int n, int j) {
    return std::exp(log_binomial(n, j) + log_kappa(n) - log_kappa(n - j));
}

double body_volume(const Body& body) {
    return std::visit(
        [](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>)
                return kappa(b.ambient_dim);
            else if constexpr (std::is_same_v<T, Zonotope>)
                return zonotope_intrinsic_volume(b, b.ambient_dim());
            else
                return volume(b);
        },
        body);
}

InequalityReport finish(InequalityId id, Estimate lhs, Estimate rhs, bool upper_bound,
                        std::span<const BodyTerm> terms, bool proven) {
    InequalityReport r;
    r.id = id;
    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = std::hypot(lhs.std_error, rhs.std_error);
    r.proven = proven;
    const double scale = std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
    const double tol = kInequalityTolerance * scale + 3.0 * r.std_error;
    r.holds = upper_bound ? r.lhs <= r.rhs + tol : r.rhs >= r.lhs - tol;
    if (r.lhs > kInequalityTolerance * scale) {
        r.epsilon = r.rhs / r.lhs - 1.0;
        r.equality_within = std::abs(*r.epsilon) < kEqualityTolerance;
    } else {
        r.degenerate = true;
    }
    r.diagnostics = equality_diagnostics(terms);
    return r;
}

std::vector<BodyTerm> nonzero(std::span<const BodyTerm> terms) {
    std::vector<BodyTerm> out;
    for (const auto& t : terms)
        if (t.multiplicity > 0) out.push_back(t);
    return out;
}

Estimate intrinsic_product(std::span<const BodyTerm> terms, const EvalConfig& cfg) {
    std::vector<Estimate> f;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        EvalConfig c = cfg;
        c.mc = derived_mc(cfg.mc, i + 1);
        f.push_back(body_intrinsic_volume(terms[i].body, terms[i].multiplicity, c));
    }
    return product(f);
}

double multinomial_of(std::span<const BodyTerm> terms, int n) {
    std::vector<int> parts;
    for (const auto& t : terms) parts.push_back(t.multiplicity);
    return multinomial(n, parts);
}

Estimate scaled(Estimate e, double c) {
    e.value *= c;
    e.std_error *= std::abs(c);
    return e;
}

int count_general(std::span<const BodyTerm> terms) {
    return static_cast<int>(std::count_if(terms.begin(), terms.end(), [](const BodyTerm& t) {
        return t.multiplicity > 0 && !is_zonoid(t.body);
    }));
}

void require_single_ball(std::span<const BodyTerm> terms, std::string_view what) {
    const auto balls = std::count_if(terms.begin(), terms.end(),
                                     [](const BodyTerm& t) { return is_ball(t.body) && t.multiplicity > 0; });
    if (balls > 1) throw ApplicabilityError(std::string(what) + ": the unit ball may appear only once");
}

}  // namespace

std::string_view inequality_name(InequalityId id) {
    switch (id) {
        case InequalityId::af_lower: return "AF_LOWER";
        case InequalityId::conj_1_1: return "CONJ_1_1";
        case InequalityId::thm_1_3: return "THM_1_3";
        case InequalityId::thm_1_4: return "THM_1_4";
        case InequalityId::zonolate: return "ZONOLATE";
    }
    return "?";
}

InequalityId parse_inequality_id(std::string_view name) {
    for (auto id : {InequalityId::af_lower, InequalityId::conj_1_1, InequalityId::thm_1_3, InequalityId::thm_1_4,
                    InequalityId::zonolate})
        if (inequality_name(id) == name) return id;
    throw ContractViolation("unknown inequality id '" + std::string(name) + "'");
}

Estimate mixed_volume(std::span<const BodyTerm> all_terms, const EvalConfig& cfg) {
    const int n = common_dimension(all_terms);
    require_sum(all_terms, n);
    const auto terms = nonzero(all_terms);
    std::vector<ZonotopeTerm> zonotopes;
    std::vector<PolytopeTerm> polytopes;
    int ball_copies = 0;
    for (const auto& t : terms) {
        if (const auto* z = std::get_if<Zonotope>(&t.body))
            zonotopes.push_back({*z, t.multiplicity});
        else if (const auto* p = std::get_if<VPolytope>(&t.body))
            polytopes.push_back({*p, t.multiplicity});
        else
            ball_copies += t.multiplicity;
    }
    if (polytopes.empty() && ball_copies == 0) return {zonotope_mixed_volume(zonotopes, cfg.opts), 0.0, true};
    if (polytopes.empty()) return {mixed_volume_zonotopes_ball(n, zonotopes, ball_copies, cfg.opts), 0.0, true};
    if (polytopes.size() == 1)
        return mixed_volume_body_ball_zonotopes(polytopes.front().body, polytopes.front().multiplicity, ball_copies,
                                                zonotopes, cfg.evaluator, cfg.mc, cfg.opts);
    if (ball_copies == 0) return {mixed_volume_bodies_zonotopes(polytopes, zonotopes, cfg.opts), 0.0, true};
    throw ApplicabilityError("mixed volume of several general polytopes together with ball copies is not supported");
}

Estimate body_intrinsic_volume(const Body& body, int j, const EvalConfig& cfg) {
    const int n = ambient_dim(body);
    if (j < 0 || j > n) throw ContractViolation("intrinsic volume index out of range");
    return std::visit(
        [&](const auto& b) -> Estimate {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>)
                return {ball_intrinsic_volume(n, j), 0.0, true};
            else if constexpr (std::is_same_v<T, Zonotope>)
                return {zonotope_intrinsic_volume(b, j, cfg.opts), 0.0, true};
            else
                return intrinsic_volume(b, j, cfg.evaluator, cfg.mc, cfg.opts.exec);
        },
        body);
}

EqualityDiagnostics equality_diagnostics(std::span<const BodyTerm> terms) {
    EqualityDiagnostics d;
    const int n = terms.empty() ? 0 : common_dimension(terms);
    std::vector<Subspace> hulls;
    d.dims_match = true;
    for (const auto& t : terms) {
        d.dims.push_back(body_dim(t.body));
        d.multiplicities.push_back(t.multiplicity);
        hulls.push_back(linear_hull(t.body));
        if (is_ball(t.body)) continue;
        if (d.dims.back() != t.multiplicity) d.dims_match = false;
        if (d.dims.back() < t.multiplicity) d.outside_equality_hypotheses = true;
    }
    const auto m = static_cast<Eigen::Index>(terms.size());
    d.pairwise_brackets = Mat::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j) {
            double v = 0.0;
            if (hulls[i].dim() + hulls[j].dim() <= n) {
                const Subspace pair[] = {hulls[i], hulls[j]};
                v = bracket(pair);
            }
            d.pairwise_brackets(i, j) = d.pairwise_brackets(j, i) = v;
        }
    return d;
}

InequalityReport check_af_lower(std::span<const BodyTerm> terms, const CheckParams& params) {
    const int n = common_dimension(terms);
    require_sum(terms, n);
    double lhs = 1.0;
    for (const auto& t : terms)
        if (t.multiplicity > 0) lhs *= std::pow(std::max(0.0, body_volume(t.body)), double(t.multiplicity) / n);
    const Estimate rhs = mixed_volume(terms, params.eval);
    return finish(InequalityId::af_lower, {lhs, 0.0, true}, rhs, false, terms, true);
}

InequalityReport check_reverse_af(InequalityId which, std::span<const BodyTerm> terms, const CheckParams& params) {
    const int n = common_dimension(terms);
    require_sum(terms, n);
    const auto& cfg = params.eval;
    const std::string name(inequality_name(which));

    switch (which) {
        case InequalityId::conj_1_1: {
            const auto active = nonzero(terms);
            if (static_cast<int>(active.size()) > n) throw ApplicabilityError(name + ": more than n bodies");
            const Estimate lhs = scaled(mixed_volume(terms, cfg), multinomial_of(active, n));
            const Estimate rhs = intrinsic_product(active, cfg);
            // Proven cases: the plane, all but one body zonoids, or two general bodies one of
            // which has multiplicity 1.
            const int general = count_general(terms);
            bool proven = n <= 2 || general <= 1;
            if (general == 2)
                for (const auto& t : active)
                    if (!is_zonoid(t.body) && t.multiplicity == 1) proven = true;
            return finish(which, lhs, rhs, true, terms, proven);
        }
        case InequalityId::thm_1_3: {
            require_single_ball(terms, name);
            std::optional<std::size_t> k = params.designated;
            for (std::size_t i = 0; i < terms.size() && !k; ++i)
                if (!is_zonoid(terms[i].body)) k = i;
            for (std::size_t i = 0; i < terms.size() && !k; ++i)
                if (!is_ball(terms[i].body)) k = i;
            if (!k || *k >= terms.size() || is_ball(terms[*k].body))
                throw ApplicabilityError(name + ": no body K to designate");
            int ball_copies = 0;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (i == *k) continue;
                if (is_ball(terms[i].body)) {
                    ball_copies += terms[i].multiplicity;
                } else if (!std::holds_alternative<Zonotope>(terms[i].body)) {
                    throw ApplicabilityError(name + ": every body other than K must be a zonotope");
                }
            }
            const int gamma = terms[*k].multiplicity;
            std::vector<int> parts{gamma, ball_copies};
            std::vector<Estimate> factors{{kappa(ball_copies), 0.0, true}};
            {
                EvalConfig c = cfg;
                c.mc = derived_mc(cfg.mc, 1);
                factors.push_back(body_intrinsic_volume(terms[*k].body, gamma, c));
            }
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (i == *k || is_ball(terms[i].body) || terms[i].multiplicity == 0) continue;
                parts.push_back(terms[i].multiplicity);
                factors.push_back(body_intrinsic_volume(terms[i].body, terms[i].multiplicity, cfg));
            }
            const Estimate lhs = scaled(mixed_volume(terms, cfg), multinomial(n, parts));
            return finish(which, lhs, product(factors), true, terms, true);
        }
        case InequalityId::thm_1_4: {
            if (terms.size() < 2) throw ApplicabilityError(name + ": needs at least two bodies");
            if (terms.size() > static_cast<std::size_t>(n)) throw ApplicabilityError(name + ": more than n bodies");
            for (const auto& t : terms)
                if (t.multiplicity < 1) throw ApplicabilityError(name + ": every multiplicity must be at least 1");
            if (terms[0].multiplicity != 1)
                throw ApplicabilityError(name + ": the first body must have multiplicity 1, got " +
                                         std::to_string(terms[0].multiplicity));
            for (std::size_t i = 2; i < terms.size(); ++i)
                if (!is_zonoid(terms[i].body))
                    throw ApplicabilityError(name + ": bodies 3.." + std::to_string(terms.size()) +
                                             " must be zonotopes or the ball");
            const Estimate lhs = scaled(mixed_volume(terms, cfg), multinomial_of(terms, n));
            return finish(which, lhs, intrinsic_product(terms, cfg), true, terms, true);
        }
        case InequalityId::zonolate: {
            require_single_ball(terms, name);
            int ball_copies = 0;
            std::vector<int> parts{0};
            std::vector<Estimate> factors;
            for (const auto& t : terms) {
                if (is_ball(t.body)) {
                    ball_copies += t.multiplicity;
                    continue;
                }
                if (!std::holds_alternative<Zonotope>(t.body))
                    throw ApplicabilityError(name + ": all bodies except the ball must be zonotopes");
                if (t.multiplicity == 0) continue;
                parts.push_back(t.multiplicity);
                factors.push_back(body_intrinsic_volume(t.body, t.multiplicity, cfg));
            }
            parts[0] = ball_copies;
            factors.push_back({kappa(ball_copies), 0.0, true});
            const Estimate lhs = scaled(mixed_volume(terms, cfg), multinomial(n, parts));
            return finish(which, lhs, product(factors), true, terms, true);
        }
        case InequalityId::af_lower:
            break;
    }
    throw ContractViolation("check_reverse_af: " + name + " is not a reverse inequality");
}

InequalityReport check_inequality(InequalityId which, std::span<const BodyTerm> terms, const CheckParams& params) {
    if (which == InequalityId::af_lower) return check_af_lower(terms, params);
    return check_reverse_af(which, terms, params);
}

std::vector<BodyTerm> fuzz_zonotope_configuration(int n, Rng& rng, int max_generators) {
    if (n < 1 || max_generators < 1) throw ContractViolation("fuzz_zonotope_configuration: bad arguments");
    std::vector<int> parts;
    int current = 1;
    for (int i = 1; i < n; ++i) {
        if (rng.uniform() < 0.5) {
            parts.push_back(current);
            current = 1;
        } else {
            ++current;
        }
    }
    parts.push_back(current);
    std::vector<BodyTerm> out;
    for (int alpha : parts) {
        const int count = 1 + static_cast<int>(rng.uniform() * max_generators);
        Mat g(n, count);
        for (int c = 0; c < count; ++c)
            for (int r = 0; r < n; ++r) g(r, c) = 2.0 * rng.uniform() - 1.0;
        out.push_back({Zonotope(std::move(g), Vec::Zero(n)), alpha});
    }
    return out;
}

}  // namespace zonovol
