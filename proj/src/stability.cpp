#include "zonovol/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zonovol/convex_opt.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/oracle.hpp"
#include "zonovol/special.hpp"

namespace zonovol {

namespace {

constexpr double kSlackTolerance = 1e-9;
constexpr int kMaxEnumeratedGenerators = 16;

VPolytope local_copy(const VPolytope& p) {
    std::vector<Vec> pts;
    pts.reserve(p.vertices().size());
    for (const auto& v : p.vertices()) pts.push_back(p.hull().frame.to_local(v));
    return VPolytope(pts);
}

VPolytope as_polytope(const Body& body) {
    if (const auto* p = std::get_if<VPolytope>(&body)) return *p;
    if (const auto* z = std::get_if<Zonotope>(&body)) return zonotope_to_vpolytope(*z);
    throw ContractViolation("expected a polytope or a zonotope, got the ball");
}

// Ellipsoid of a polytope that is full-dimensional in its own coordinates.
Ellipsoid fit_full(const VPolytope& p) {
    const int d = p.ambient_dim();
    const HRep h = hrep(p);
    const auto ball = chebyshev_ball(h, p.centroid());
    const auto fit = max_volume_inscribed_ellipsoid(h, ball.center, ball.radius);
    const double scale = std::max(1.0, p.hull().scale);
    for (const auto& f : h.facets)
        if ((fit.shape * f.normal).norm() + f.normal.dot(fit.center) > f.offset + 1e-7 * scale)
            throw NumericalInconsistency("inscribed ellipsoid leaves the polytope");
    const Eigen::LLT<Mat> llt(fit.shape);
    for (const auto& v : p.vertices()) {
        const double r = llt.solve(v - fit.center).norm();
        if (r > d * (1.0 + 1e-6))
            throw NumericalInconsistency("John containment fails: a vertex lies at " + std::to_string(r) +
                                         " > d in the ellipsoid norm");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(fit.shape);
    Ellipsoid e{fit.center, {}};
    for (int i = d - 1; i >= 0; --i) e.semi_axes.push_back({es.eigenvectors().col(i), es.eigenvalues()[i]});
    return e;
}

std::optional<std::vector<double>> box_half_widths(const VPolytope& p) {
    const int n = p.ambient_dim();
    Vec lo = p.vertices().front(), hi = lo;
    for (const auto& v : p.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double tol = 1e-12 * std::max(1.0, p.hull().scale);
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (hi[i] - lo[i] > tol) ++k;
    if (k > 30 || p.num_vertices() != (1 << k)) return std::nullopt;
    for (const auto& v : p.vertices())
        for (int i = 0; i < n; ++i)
            if (std::abs(v[i] - lo[i]) > tol && std::abs(v[i] - hi[i]) > tol) return std::nullopt;
    std::vector<double> h;
    for (int i = 0; i < n; ++i) h.push_back(0.5 * (hi[i] - lo[i]));
    return h;
}

std::optional<std::vector<double>> orthogonal_half_widths(const Zonotope& z) {
    std::vector<Vec> dirs;
    std::vector<double> len;
    for (int i = 0; i < z.num_generators(); ++i) {
        const Vec w = z.generator(i);
        const double l = w.norm();
        const Vec u = w / l;
        bool merged = false;
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            const double c = std::abs(dirs[j].dot(u));
            if (c > 1.0 - 1e-12) {
                len[j] += l;
                merged = true;
                break;
            }
            if (c > 1e-12) return std::nullopt;
        }
        if (!merged) {
            dirs.push_back(u);
            len.push_back(l);
        }
    }
    return len;
}

double half_diameter(const VPolytope& p) {
    double best = 0.0;
    const auto& v = p.vertices();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]).squaredNorm());
    return 0.5 * std::sqrt(best);
}

double body_projection_volume(const Body& body, const Subspace& L, const EvalOptions& opts) {
    if (const auto* z = std::get_if<Zonotope>(&body)) return zonotope_projection_volume(*z, L, opts);
    if (const auto* p = std::get_if<VPolytope>(&body)) return projection_volume(*p, L);
    return kappa(L.dim());
}

Estimate intrinsic_auto(const Body& body, int j, const EvalConfig& cfg) {
    EvalConfig c = cfg;
    if (const auto* p = std::get_if<VPolytope>(&body))
        if (!intrinsic_volume_is_exact(*p, j)) c.evaluator = Evaluator::montecarlo;
    return body_intrinsic_volume(body, j, c);
}

bool projector_less(const Subspace& a, const Subspace& b) {
    const Mat pa = a.projector(), pb = b.projector();
    for (Eigen::Index i = 0; i < pa.rows(); ++i)
        for (Eigen::Index j = 0; j < pa.cols(); ++j)
            if (pa(i, j) != pb(i, j)) return pa(i, j) < pb(i, j);
    return false;
}

std::vector<Vec> sphere_directions(int n, std::uint64_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(count);
    while (out.size() < count) {
        Vec u = rng.normal_vector(n);
        const double norm = u.norm();
        if (norm > 1e-12) out.push_back(u / norm);
    }
    return out;
}

// sup over unit u of h(Z, u) - h(Z | L, u) for the centred zonotope: the smallest rho with
// Z subset Z|L + rho B.
double projection_slack(const Zonotope& z, const Subspace& L, std::uint64_t directions, std::uint64_t seed) {
    const int n = z.ambient_dim();
    const Mat& W = z.generators();
    const Mat P = L.projector();
    const Mat Q = Mat::Identity(n, n) - P;
    std::vector<Vec> dirs = sphere_directions(n, directions, seed);
    for (int i = 0; i < W.cols(); ++i) {
        const Vec q = Q * W.col(i);
        if (q.norm() > 1e-12) dirs.push_back(q.normalized());
    }
    const Mat Lp = L.orthogonal_complement().basis();
    for (int i = 0; i < Lp.cols(); ++i) dirs.push_back(Lp.col(i));
    double best = 0.0;
    for (const auto& u : dirs) {
        const double full = (W.transpose() * u).cwiseAbs().sum();
        const double proj = (W.transpose() * (P * u)).cwiseAbs().sum();
        best = std::max(best, full - proj);
    }
    return best;
}

// max over x in the centred zonotope of dist(x, L).
double distance_to_subspace(const Zonotope& z, const Subspace& L, std::uint64_t directions, std::uint64_t seed) {
    const int n = z.ambient_dim();
    const Subspace perp = L.orthogonal_complement();
    if (perp.dim() == 0) return 0.0;
    const Mat Q = perp.basis().transpose() * z.generators();  // generators in L^perp coordinates
    const int k = static_cast<int>(Q.cols());
    double best = 0.0;
    if (k <= kMaxEnumeratedGenerators) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << std::max(0, k - 1)); ++mask) {
            Vec x = k > 0 ? Vec(Q.col(0)) : Vec::Zero(Q.rows());
            for (int i = 1; i < k; ++i) x += ((mask >> (i - 1)) & 1) ? Vec(-Q.col(i)) : Vec(Q.col(i));
            best = std::max(best, x.norm());
        }
        return best;
    }
    for (const auto& u : sphere_directions(n, directions, seed)) {
        const Vec v = perp.basis().transpose() * u;
        if (v.norm() < 1e-12) continue;
        best = std::max(best, (Q.transpose() * v.normalized()).cwiseAbs().sum());
    }
    return best;
}

struct EnclosingBall {
    Vec center;
    double radius;
    Vec weights;  // center = sum weights_i p_i
};

// Minimum enclosing ball by Frank-Wolfe with away steps on the dual simplex problem. The returned
// radius is the exact enclosing radius about the returned center.
EnclosingBall minimum_enclosing_ball(const std::vector<Vec>& pts) {
    const int m = static_cast<int>(pts.size());
    if (m == 0) throw ContractViolation("minimum_enclosing_ball: empty point set");
    Vec lambda = Vec::Zero(m);
    lambda[0] = 1.0;
    Vec c = pts[0];
    for (int iter = 0; iter < 100000; ++iter) {
        Vec d(m);
        for (int i = 0; i < m; ++i) d[i] = (pts[i] - c).squaredNorm();
        const double r2 = lambda.dot(d);
        Eigen::Index far;
        const double dmax = d.maxCoeff(&far);
        if (dmax <= r2 * (1.0 + 1e-14) + 1e-300) break;
        Eigen::Index near = -1;
        double dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
            if (lambda[i] > 0.0 && d[i] < dmin) {
                dmin = d[i];
                near = i;
            }
        const double up = dmax / r2 - 1.0;
        const double down = r2 > 0.0 ? 1.0 - dmin / r2 : 0.0;
        if (r2 <= 0.0 || up >= down) {
            const double a = r2 > 0.0 ? up / (2.0 * (1.0 + up)) : 0.5;
            lambda *= 1.0 - a;
            lambda[far] += a;
        } else {
            const double a = std::min(down / (2.0 * (1.0 - down)), lambda[near] / (1.0 - lambda[near]));
            lambda *= 1.0 + a;
            lambda[near] -= a;
            lambda[near] = std::max(0.0, lambda[near]);
        }
        c = Vec::Zero(pts[0].size());
        for (int i = 0; i < m; ++i) c += lambda[i] * pts[i];
    }
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, (p - c).norm());
    return {c, r, lambda};
}

// Smallest rho with K - q subset L + rho B over q in K, with the minimizing q.
std::pair<double, Vec> flat_slack(const VPolytope& K, const Subspace& L) {
    const Subspace perp = L.orthogonal_complement();
    if (perp.dim() == 0) return {0.0, K.centroid()};
    std::vector<Vec> pts;
    for (const auto& v : K.vertices()) pts.push_back(perp.coordinates(v));
    const auto ball = minimum_enclosing_ball(pts);
    Vec q = Vec::Zero(K.ambient_dim());
    for (int i = 0; i < K.num_vertices(); ++i) q += ball.weights[i] * K.vertices()[i];
    return {ball.radius, q};
}

// Point q of K minimizing |q|_L| (Frank-Wolfe over the vertex weights).
Vec closest_to_complement(const VPolytope& K, const Subspace& L) {
    std::vector<Vec> pts;
    for (const auto& v : K.vertices()) pts.push_back(L.coordinates(v));
    const int m = static_cast<int>(pts.size());
    Vec lambda = Vec::Zero(m);
    lambda[0] = 1.0;
    Vec y = pts[0];
    for (int iter = 0; iter < 10000; ++iter) {
        int s = 0;
        for (int i = 1; i < m; ++i)
            if (pts[i].dot(y) < pts[s].dot(y)) s = i;
        const Vec d = y - pts[s];
        const double gap = y.dot(d);
        if (gap <= 1e-15 * std::max(1.0, y.squaredNorm()) || d.squaredNorm() == 0.0) break;
        const double g = std::clamp(gap / d.squaredNorm(), 0.0, 1.0);
        lambda *= 1.0 - g;
        lambda[s] += g;
        y -= g * d;
    }
    Vec q = Vec::Zero(K.ambient_dim());
    for (int i = 0; i < m; ++i) q += lambda[i] * K.vertices()[i];
    return q;
}

ZonotopeTerm centred_term(const BodyTerm& t) {
    const auto& z = std::get<Zonotope>(t.body);
    return {Zonotope(z.generators(), Vec::Zero(z.ambient_dim())), t.multiplicity};
}

Subspace recover_general(const Body& body, int alpha, const StabilityParams& params) {
    if (const auto* z = std::get_if<Zonotope>(&body)) {
        const ZonotopeTerm t{*z, alpha};
        return recover_subspaces(std::span(&t, 1), params.eval.opts).front();
    }
    return best_projection_subspace(std::get<VPolytope>(body), alpha, params.subspace_samples, params.seed).subspace;
}

StabilityCertificate not_applicable(StabilityCertificate c, std::string reason) {
    c.applicable = false;
    c.holds = false;
    c.reason = std::move(reason);
    return c;
}

std::vector<BodyTerm> active_terms(std::span<const BodyTerm> terms) {
    std::vector<BodyTerm> out;
    for (const auto& t : terms)
        if (t.multiplicity > 0) out.push_back(t);
    return out;
}

void require_class(const std::vector<BodyTerm>& terms, bool first_general, std::string_view name) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (std::holds_alternative<Ball>(terms[i].body))
            throw ApplicabilityError(std::string(name) + ": the unit ball is not allowed here");
        if (i == 0 && first_general) continue;
        if (!std::holds_alternative<Zonotope>(terms[i].body))
            throw ApplicabilityError(std::string(name) + (first_general ? ": bodies 2..m must be zonotopes"
                                                                        : ": all bodies must be zonotopes"));
    }
}

bool finish_holds(const StabilityCertificate& c) {
    bool ok = !c.bracket_bound || c.bracket_value >= *c.bracket_bound - kSlackTolerance;
    for (std::size_t i = 0; i < c.containment_slacks.size(); ++i)
        ok = ok && c.containment_slacks[i] <= c.containment_radii[i] + kSlackTolerance;
    if (c.radius_condition) ok = ok && *c.radius_condition;
    return ok;
}

}  // namespace

double inradius(const VPolytope& p) {
    if (p.dim() != p.ambient_dim()) throw DegenerateBody("inradius: polytope is not full-dimensional");
    return chebyshev_ball(hrep(p), p.centroid()).radius;
}

Ellipsoid max_inscribed_ellipsoid(const VPolytope& p) {
    if (p.dim() != p.ambient_dim())
        throw DegenerateBody("max_inscribed_ellipsoid: polytope is not full-dimensional");
    return fit_full(p);
}

Ellipsoid john_ellipsoid(const VPolytope& p) {
    if (p.dim() == 0) throw DegenerateBody("john_ellipsoid: a point has no ellipsoid");
    if (p.dim() == p.ambient_dim()) return fit_full(p);
    const auto& frame = p.hull().frame;
    Ellipsoid local = fit_full(local_copy(p));
    Ellipsoid e{frame.to_ambient(local.center), {}};
    for (auto& a : local.semi_axes) e.semi_axes.push_back({frame.basis * a.direction, a.length});
    return e;
}

std::string_view radius_method_name(RadiusMethod m) {
    switch (m) {
        case RadiusMethod::exact_box: return "exact_box";
        case RadiusMethod::mvie: return "mvie";
        case RadiusMethod::inradius_lp: return "inradius_lp";
        case RadiusMethod::diameter: return "diameter";
        case RadiusMethod::closed_form: return "closed_form";
    }
    return "?";
}

double box_radius(std::vector<double> h, int m) {
    std::sort(h.begin(), h.end(), std::greater<>());
    if (m < 1 || m > static_cast<int>(h.size())) throw ContractViolation("box_radius: m out of range");
    // With k half-widths at least r, r^2 = (sum of the others squared) / (m - k).
    double best = 0.0;
    for (int k = 0; k < m; ++k) {
        double tail = 0.0;
        for (std::size_t i = k; i < h.size(); ++i) tail += h[i] * h[i];
        const double r = std::sqrt(tail / (m - k));
        const double above = k == 0 ? std::numeric_limits<double>::infinity() : h[k - 1];
        if (r <= above * (1.0 + 1e-15) && r >= h[k] * (1.0 - 1e-15)) best = std::max(best, std::min(r, above));
    }
    return best;
}

RadiusEstimate r_m_estimate(const Body& body, int m, const RadiusOptions& opts) {
    const int n = ambient_dim(body);
    if (m < 1 || m > n) throw ContractViolation("r_m_estimate: need 1 <= m <= n");
    if (std::holds_alternative<Ball>(body)) return {m, 1.0, 1.0, RadiusMethod::closed_form};
    const int d = body_dim(body);
    if (m > d) return {m, 0.0, 0.0, RadiusMethod::closed_form};
    if (opts.box_formula) {
        std::optional<std::vector<double>> h;
        if (const auto* z = std::get_if<Zonotope>(&body))
            h = orthogonal_half_widths(*z);
        else
            h = box_half_widths(std::get<VPolytope>(body));
        if (h) {
            const double r = box_radius(*h, m);
            return {m, r, r, RadiusMethod::exact_box};
        }
    }
    const VPolytope p = as_polytope(body);
    const double r1 = half_diameter(p);
    if (m == 1) return {m, r1, r1, RadiusMethod::diameter};
    const VPolytope local = local_copy(p);
    const double rd = inradius(local);
    if (m == d) return {m, rd, rd, RadiusMethod::inradius_lp};
    const Ellipsoid e = fit_full(local);
    const double a = e.semi_axes[m - 1].length;
    const double lower = std::max(a, rd);
    const double upper = std::max(lower, std::min(d * a, r1));
    return {m, lower, upper, RadiusMethod::mvie};
}

double zonotope_projection_volume(const Zonotope& z, const Subspace& L, const EvalOptions& opts) {
    if (L.ambient_dim() != z.ambient_dim()) throw ContractViolation("zonotope_projection_volume: dimension mismatch");
    const int a = L.dim();
    if (a == 0) return 1.0;
    if (z.num_generators() < a) return 0.0;
    const GeneratorBlock block{L.basis().transpose() * z.generators(), a};
    return std::ldexp(det_tuple_sum(std::span(&block, 1), opts.exec, opts.budget), a);
}

std::vector<Subspace> recover_subspaces(std::span<const ZonotopeTerm> terms, const EvalOptions& opts) {
    std::vector<Subspace> out;
    for (const auto& t : terms) {
        if (t.body.dim() < t.multiplicity)
            throw DegenerateBody("recover_subspaces: zonotope of rank " + std::to_string(t.body.dim()) +
                                 " cannot carry a " + std::to_string(t.multiplicity) + "-dimensional subspace");
        const auto measure = projection_generating_measure(t.body, t.multiplicity, opts);
        const SubspaceAtom* best = nullptr;
        double best_value = -1.0;
        for (const auto& atom : measure.atoms()) {
            const double v = zonotope_projection_volume(t.body, atom.subspace, opts);
            const double tie = 1e-12 * std::max(std::abs(v), std::abs(best_value));
            if (!best || v > best_value + tie) {
                best = &atom;
                best_value = v;
            } else if (std::abs(v - best_value) <= tie && projector_less(atom.subspace, best->subspace)) {
                best = &atom;
                best_value = std::max(best_value, v);
            }
        }
        if (!best) throw DegenerateBody("recover_subspaces: empty projection generating measure");
        out.push_back(best->subspace);
    }
    return out;
}

ProjectionSearch best_projection_subspace(const VPolytope& K, int beta, std::uint64_t samples, std::uint64_t seed) {
    const int n = K.ambient_dim();
    if (beta < 1 || beta > n) throw ContractViolation("best_projection_subspace: need 1 <= beta <= n");
    std::vector<Subspace> candidates;
    if (K.dim() == beta) candidates.push_back(linear_hull(K));
    if (K.dim() >= beta && K.dim() >= 1) {
        const Ellipsoid e = john_ellipsoid(K);
        Mat axes(n, beta);
        for (int i = 0; i < beta; ++i) axes.col(i) = e.semi_axes[i].direction;
        candidates.push_back(orthonormalize(axes));
    }
    Rng rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) candidates.push_back(sample_grassmannian(n, beta, rng));
    if (candidates.empty()) candidates.push_back(sample_grassmannian(n, beta, rng));
    ProjectionSearch best{candidates.front(), -1.0};
    for (const auto& L : candidates) {
        const double v = projection_volume(K, L);
        if (v > best.value) best = {L, v};
    }
    return best;
}

std::string_view theorem_name(StabilityTheorem t) {
    switch (t) {
        case StabilityTheorem::thm_1_5: return "THM_1_5";
        case StabilityTheorem::thm_5_1: return "THM_5_1";
        case StabilityTheorem::prop_4_5: return "PROP_4_5";
        case StabilityTheorem::lemma_4_6: return "LEMMA_4_6";
    }
    return "?";
}

StabilityTheorem parse_theorem_id(std::string_view name) {
    for (auto t : {StabilityTheorem::thm_1_5, StabilityTheorem::thm_5_1, StabilityTheorem::prop_4_5,
                   StabilityTheorem::lemma_4_6})
        if (theorem_name(t) == name) return t;
    throw ContractViolation("unknown theorem id '" + std::string(name) + "'");
}

StabilityCertificate check_stability(StabilityTheorem theorem, std::span<const BodyTerm> input,
                                     const StabilityParams& params) {
    const auto terms = active_terms(input);
    const std::string name(theorem_name(theorem));
    StabilityCertificate c;
    c.theorem = theorem;
    require_class(terms, theorem != StabilityTheorem::thm_1_5, name);
    if (terms.size() < 2) return not_applicable(c, "needs at least two bodies with positive multiplicity");
    const int n = ambient_dim(terms.front().body);
    const double nd = n;

    CheckParams cp{params.eval, std::nullopt};
    InequalityReport report;
    if (theorem == StabilityTheorem::thm_1_5 || theorem == StabilityTheorem::lemma_4_6) {
        report = check_reverse_af(InequalityId::conj_1_1, terms, cp);
    } else {
        cp.designated = 0;
        report = check_reverse_af(InequalityId::thm_1_3, terms, cp);
    }
    if (report.degenerate || !report.epsilon)
        return not_applicable(c, "the mixed volume vanishes, so no epsilon satisfies the hypothesis");
    c.epsilon = std::max(0.0, *report.epsilon);
    const double eps = c.epsilon;

    // Every subspace: L_1 by projection volume for a general K_1, the others from measure atoms.
    auto recover_all = [&] {
        std::vector<Subspace> Ls;
        Ls.push_back(recover_general(terms[0].body, terms[0].multiplicity, params));
        std::vector<ZonotopeTerm> rest;
        for (std::size_t i = 1; i < terms.size(); ++i) rest.push_back(centred_term(terms[i]));
        for (auto& L : recover_subspaces(rest, params.eval.opts)) Ls.push_back(std::move(L));
        return Ls;
    };
    auto radius_of = [](const BodyTerm& t) { return r_m_estimate(t.body, t.multiplicity); };

    switch (theorem) {
        case StabilityTheorem::thm_1_5: {
            if (eps > 1.0 + kInequalityTolerance) return not_applicable(c, "epsilon exceeds 1");
            c.recovered_subspaces = recover_all();
            c.bracket_value = bracket(c.recovered_subspaces);
            c.bracket_bound = 1.0 - std::pow(nd, 10) * std::pow(2.0, nd / 2) * std::sqrt(eps);
            const double k = std::pow(nd, 4.5) * std::pow(2.0, nd / 2) * std::sqrt(eps);
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const auto z = centred_term(terms[i]).body;
                c.containment_slacks.push_back(
                    projection_slack(z, c.recovered_subspaces[i], params.directions, params.seed + i));
                c.containment_radii.push_back(k * radius_of(terms[i]).upper);
            }
            break;
        }
        case StabilityTheorem::thm_5_1: {
            const double limit = std::pow(nd, -16) * std::pow(2.0, -2 * nd);
            if (eps > limit * (1.0 + kInequalityTolerance)) return not_applicable(c, "epsilon exceeds n^-16 2^-2n = " + std::to_string(limit));
            c.recovered_subspaces = recover_all();
            c.bracket_value = bracket(c.recovered_subspaces);
            const double e8 = std::pow(eps, 0.125);
            c.bracket_bound = 1.0 - std::pow(nd, 13) * std::pow(2.0, 2 * nd + 4) * e8;
            const double r1 = radius_of(terms[0]).upper;
            if (const auto* z = std::get_if<Zonotope>(&terms[0].body))
                c.containment_slacks.push_back(distance_to_subspace(*z, c.recovered_subspaces[0], params.directions,
                                                                    params.seed));
            else
                c.containment_slacks.push_back(flat_slack(std::get<VPolytope>(terms[0].body),
                                                          c.recovered_subspaces[0]).first);
            c.containment_radii.push_back(std::pow(nd, 3.5) * std::pow(2.0, (nd + 2) / 2) * r1 * std::sqrt(eps));
            for (std::size_t i = 1; i < terms.size(); ++i) {
                const auto z = centred_term(terms[i]).body;
                c.containment_slacks.push_back(
                    distance_to_subspace(z, c.recovered_subspaces[i], params.directions, params.seed + i));
                c.containment_radii.push_back(std::pow(nd, 8) * std::pow(2.0, 2 * nd + 4) *
                                              radius_of(terms[i]).upper * e8);
            }
            break;
        }
        case StabilityTheorem::prop_4_5: {
            if (eps > 1.0 + kInequalityTolerance) return not_applicable(c, "epsilon exceeds 1");
            c.recovered_subspaces = recover_all();
            c.bracket_value = bracket(c.recovered_subspaces);
            const RadiusEstimate r = radius_of(terms[0]);
            const Subspace& L1 = c.recovered_subspaces[0];
            double slack;
            Body projected = Ball{1};
            if (const auto* z = std::get_if<Zonotope>(&terms[0].body)) {
                slack = distance_to_subspace(*z, L1, params.directions, params.seed);
                projected = project_to_coordinates(*z, L1);
            } else {
                const auto& K = std::get<VPolytope>(terms[0].body);
                slack = flat_slack(K, L1).first;
                projected = project_to_coordinates(K, L1);
            }
            c.containment_slacks.push_back(slack);
            c.containment_radii.push_back(std::pow(2.0, (nd + 2) / 2) * std::pow(nd, 3.5) * std::sqrt(eps) * r.upper);
            const RadiusEstimate rp = r_m_estimate(projected, terms[0].multiplicity);
            c.radius_condition = rp.upper >= r.lower / nd - kSlackTolerance;
            break;
        }
        case StabilityTheorem::lemma_4_6: {
            if (!report.holds) return not_applicable(c, "the reverse inequality itself fails on this instance");
            c.recovered_subspaces = recover_all();
            c.bracket_value = bracket(c.recovered_subspaces);
            double e = eps;
            std::vector<double> slacks, lowers;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const Subspace& L = c.recovered_subspaces[i];
                const int alpha = terms[i].multiplicity;
                double slack;
                Body projected = Ball{1};
                if (const auto* z = std::get_if<Zonotope>(&terms[i].body)) {
                    const Zonotope zc(z->generators(), Vec::Zero(n));
                    slack = projection_slack(zc, L, params.directions, params.seed + i);
                    projected = project_to_coordinates(*z, L);
                } else {
                    const auto& K = std::get<VPolytope>(terms[i].body);
                    const auto dirs = sphere_directions(n, params.directions, params.seed + i);
                    std::vector<Vec> candidates{K.centroid(), closest_to_complement(K, L)};
                    for (const auto& v : K.vertices()) candidates.push_back(v);
                    slack = std::numeric_limits<double>::infinity();
                    for (const auto& q : candidates) {
                        double worst = 0.0;
                        for (const auto& u : dirs)
                            worst = std::max(worst, support_function(K, u) - q.dot(u) - support_function(K, L.project(u)));
                        slack = std::min(slack, worst);
                    }
                    projected = project_to_coordinates(K, L);
                }
                const RadiusEstimate r = radius_of(terms[i]);
                const RadiusEstimate rp = r_m_estimate(projected, alpha);
                if (!(r.lower > 0.0) || rp.lower < r.upper / nd)
                    return not_applicable(c, "cannot verify r(K_" + std::to_string(i + 1) + " | L_" +
                                                 std::to_string(i + 1) + ") >= r(K_" + std::to_string(i + 1) +
                                                 ") / n from the radius bounds");
                slacks.push_back(slack);
                lowers.push_back(r.lower);
                e = std::max(e, slack / r.lower);
            }
            if (e > 1.0 + kInequalityTolerance) return not_applicable(c, "the containment hypothesis needs epsilon > 1");
            c.epsilon = e;
            c.bracket_bound = 1.0 - std::pow(nd, 5) * e;
            c.containment_slacks = slacks;
            for (double l : lowers) c.containment_radii.push_back(e * l);
            break;
        }
    }
    c.bound_trivial = c.bracket_bound && *c.bracket_bound <= 0.0;
    c.holds = finish_holds(c);
    return c;
}

ProjStabReport projstab_check(const Body& K, int beta, const StabilityParams& params) {
    const int n = ambient_dim(K);
    if (beta < 1 || beta > n - 1) throw ContractViolation("projstab_check: need 1 <= beta <= n - 1");
    if (body_dim(K) < beta) throw ContractViolation("projstab_check: dim K < beta");
    ProjStabReport r;
    r.beta = beta;
    const Estimate lhs = intrinsic_auto(K, beta, params.eval);
    r.lhs = lhs.value;
    r.lhs_std_error = lhs.std_error;
    r.r_beta = r_m_estimate(K, beta);
    r.r_beta1 = r_m_estimate(K, beta + 1);
    const double nd = n;
    r.factor = r.r_beta.upper > 0.0
                   ? 1.0 + r.r_beta1.lower * r.r_beta1.lower /
                               (std::pow(2.0, nd + 2) * std::pow(nd, 5) * r.r_beta.upper * r.r_beta.upper)
                   : 1.0;
    if (const auto* p = std::get_if<VPolytope>(&K)) {
        r.max_projection = best_projection_subspace(*p, beta, params.directions, params.seed).value;
    } else {
        std::vector<Subspace> candidates;
        if (const auto* z = std::get_if<Zonotope>(&K)) {
            const ZonotopeTerm t{*z, beta};
            candidates = recover_subspaces(std::span(&t, 1), params.eval.opts);
        }
        Rng rng(params.seed);
        for (std::uint64_t s = 0; s < params.directions; ++s) candidates.push_back(sample_grassmannian(n, beta, rng));
        r.max_projection = 0.0;
        for (const auto& L : candidates)
            r.max_projection = std::max(r.max_projection, body_projection_volume(K, L, params.eval.opts));
    }
    r.rhs = r.factor * r.max_projection;
    r.holds = r.lhs >= r.rhs - 3.0 * r.lhs_std_error - 1e-9 * std::max(1.0, r.rhs);
    return r;
}

BallRatio ball_intrinsic_ratio(int n, int j) {
    if (n < 1 || j < 1 || j > n) throw ContractViolation("ball_intrinsic_ratio: need 1 <= j <= n");
    const double log_ratio = log_binomial(n, j) + log_kappa(n) - log_kappa(j) - log_kappa(n - j);
    const double ratio = std::exp(log_ratio);
    const double bound = std::pow(2.0, 0.5 * n);
    return {n, j, ratio, bound, ratio <= bound};
}

CmReport cm_intrinsic_check(const Body& M, const Flat& A, int alpha, double eta, const EvalConfig& cfg) {
    const int n = ambient_dim(M);
    if (std::holds_alternative<Ball>(M)) throw ContractViolation("cm_intrinsic_check: M must be a polytope or zonotope");
    if (A.direction.ambient_dim() != n || A.offset.size() != n)
        throw ContractViolation("cm_intrinsic_check: flat lives in another dimension");
    if (A.direction.dim() != alpha) throw ContractViolation("cm_intrinsic_check: dim A must equal alpha");
    CmReport r;
    const VPolytope P = as_polytope(M);
    const Subspace perp = A.direction.orthogonal_complement();
    for (const auto& v : P.vertices()) r.slack = std::max(r.slack, (perp.coordinates(v - A.offset)).norm());
    const Body projected = project_to_coordinates(P, A.direction);
    r.factor = 1.0 + n * std::pow(2.0, n + 1) * eta;
    const Estimate lhs = intrinsic_auto(M, alpha, cfg);
    r.lhs = lhs.value;
    r.std_error = lhs.std_error;
    r.rhs = r.factor * flat_volume(std::get<VPolytope>(projected), alpha);
    r.holds = r.lhs <= r.rhs + 1e-9 * std::max({1.0, r.lhs, r.rhs}) + 3.0 * r.std_error;

    auto reject = [&](std::string why) {
        r.applicable = false;
        r.reason = std::move(why);
        return r;
    };
    if (alpha < 1 || alpha >= n) return reject("needs 1 <= alpha < n");
    if (eta < 0.0 || eta >= 1.0 / (alpha * n)) return reject("needs 0 <= eta < 1 / (alpha n)");
    r.r_alpha = r_m_estimate(M, alpha);
    r.r_alpha_projected = r_m_estimate(projected, alpha);
    if (r.slack > eta * r.r_alpha.lower + kSlackTolerance)
        return reject("M is not within eta r_alpha(M) of A (slack " + std::to_string(r.slack) + ")");
    if (r.r_alpha_projected.lower < r.r_alpha.upper / n)
        return reject("cannot verify r_alpha(M | A) >= r_alpha(M) / n from the radius bounds");
    return r;
}

}  // namespace zonovol
