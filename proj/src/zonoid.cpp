#include "zonovol/zonoid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "zonovol/errors.hpp"
#include "zonovol/random.hpp"
#include "zonovol/special.hpp"
#include "zonovol/summation.hpp"

namespace zonovol {

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

void check_terms(int n, std::span<const ZonotopeTerm> terms, int expected_sum, const char* who) {
    int sum = 0;
    for (const auto& t : terms) {
        if (t.body.ambient_dim() != n) throw ContractViolation(std::string(who) + ": dimension mismatch");
        if (t.multiplicity < 1) throw ContractViolation(std::string(who) + ": multiplicities must be >= 1");
        sum += t.multiplicity;
    }
    if (sum != expected_sum)
        throw ContractViolation(std::string(who) + ": zonotope multiplicities sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(expected_sum));
}

// Atoms of the m projection generating measures, flattened for the tuple kernels.
struct AtomTable {
    std::vector<DiscreteSubspaceMeasure> measures;
    std::vector<std::uint64_t> radices;
    int span_dim = 0;
    bool empty = false;
};

AtomTable atom_table(std::span<const ZonotopeTerm> terms, const EvalOptions& opts) {
    AtomTable t;
    for (const auto& term : terms) {
        t.measures.push_back(projection_generating_measure(term.body, term.multiplicity, opts));
        t.radices.push_back(t.measures.back().size());
        t.span_dim += term.multiplicity;
        if (t.measures.back().empty()) t.empty = true;
    }
    return t;
}

// Stacked orthonormal bases of one atom per measure, then [U_1, ..., U_m] and the mass product.
struct TupleView {
    Mat stacked;
    double bracket;
    double mass;
};

TupleView view_tuple(const AtomTable& t, int n, std::span<const std::uint64_t> digits) {
    TupleView v{Mat(n, t.span_dim), 1.0, 1.0};
    int col = 0;
    for (std::size_t i = 0; i < t.measures.size(); ++i) {
        const auto& atom = t.measures[i].atoms()[digits[i]];
        v.stacked.middleCols(col, atom.subspace.dim()) = atom.subspace.basis();
        col += atom.subspace.dim();
        v.mass *= atom.mass;
    }
    v.bracket = t.span_dim > 0 ? std::min(1.0, parallelepiped_volume(v.stacked)) : 1.0;
    return v;
}

// binom(n; beta, a_1, ..., a_m)^{-1} kappa_{a_1} ... kappa_{a_m}
double measure_prefactor(int n, int beta, std::span<const ZonotopeTerm> terms) {
    std::vector<int> parts{beta};
    double k = 1.0;
    for (const auto& t : terms) {
        parts.push_back(t.multiplicity);
        k *= kappa(t.multiplicity);
    }
    return k / multinomial(n, parts);
}

}  // namespace

DiscreteSubspaceMeasure::DiscreteSubspaceMeasure(int ambient_dim, int grassmann_dim)
    : ambient_(ambient_dim), dim_(grassmann_dim) {
    if (grassmann_dim < 0 || grassmann_dim > ambient_dim)
        throw ContractViolation("DiscreteSubspaceMeasure: Grassmannian dimension out of range");
}

DiscreteSubspaceMeasure::DiscreteSubspaceMeasure(int ambient_dim, int grassmann_dim, std::vector<SubspaceAtom> raw)
    : DiscreteSubspaceMeasure(ambient_dim, grassmann_dim) {
    const int count = static_cast<int>(raw.size());
    for (const auto& a : raw) {
        if (a.subspace.ambient_dim() != ambient_dim || a.subspace.dim() != grassmann_dim)
            throw ContractViolation("DiscreteSubspaceMeasure: atom has the wrong dimension");
        if (!(a.mass >= 0.0)) throw ContractViolation("DiscreteSubspaceMeasure: negative mass");
    }
    // |P_a(0,0) - P_b(0,0)| <= ||P_a - P_b|| = principal distance, so a sweep over the sorted
    // (0,0) projector entry only needs to compare atoms inside a window of that width.
    std::vector<double> key(count);
    for (int i = 0; i < count; ++i) key[i] = raw[i].subspace.basis().row(0).squaredNorm();
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
    std::vector<int> parent(count);
    std::iota(parent.begin(), parent.end(), 0);
    for (int p = 0; p < count; ++p) {
        const int a = order[p];
        for (int q = p + 1; q < count && key[order[q]] - key[a] < kAtomMergeDistance; ++q) {
            const int b = order[q];
            if (find_root(parent, a) == find_root(parent, b)) continue;
            if (principal_angle_distance(raw[a].subspace, raw[b].subspace) < kAtomMergeDistance) {
                const int ra = find_root(parent, a), rb = find_root(parent, b);
                parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::vector<int> slot(count, -1);
    std::vector<CompensatedSum> masses;
    for (int i = 0; i < count; ++i) {
        const int r = find_root(parent, i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(atoms_.size());
            atoms_.push_back({raw[r].subspace, 0.0});
            masses.emplace_back();
        }
        masses[slot[r]] += raw[i].mass;
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) atoms_[i].mass = masses[i].value();
}

double DiscreteSubspaceMeasure::total_mass() const {
    CompensatedSum s;
    for (const auto& a : atoms_) s += a.mass;
    return s.value();
}

double zonotope_mixed_volume(std::span<const Zonotope> slots, const EvalOptions& opts) {
    std::vector<ZonotopeTerm> terms;
    for (const auto& z : slots) {
        auto it = std::find_if(terms.begin(), terms.end(), [&](const ZonotopeTerm& t) {
            const Mat& g = t.body.generators();
            return g.rows() == z.generators().rows() && g.cols() == z.generators().cols() && g == z.generators();
        });
        if (it != terms.end())
            ++it->multiplicity;
        else
            terms.push_back({z, 1});
    }
    return zonotope_mixed_volume(terms, opts);
}

// V = (2^n / n!) prod a_i! * sum over one a_i-subset of generators per body of |det|.
double zonotope_mixed_volume(std::span<const ZonotopeTerm> terms, const EvalOptions& opts) {
    if (terms.empty()) throw ContractViolation("zonotope_mixed_volume: no bodies");
    const int n = terms.front().body.ambient_dim();
    check_terms(n, terms, n, "zonotope_mixed_volume");
    std::vector<GeneratorBlock> blocks;
    double factor = std::ldexp(1.0, n) / factorial(n);
    for (const auto& t : terms) {
        if (t.body.num_generators() < t.multiplicity) return 0.0;
        blocks.push_back({t.body.generators(), t.multiplicity});
        factor *= factorial(t.multiplicity);
    }
    return factor * det_tuple_sum(blocks, opts.exec, opts.budget);
}

// Atom lin{w_S} for each j-subset S with D_j(w_S) > 0, mass 2^j D_j(w_S) / kappa_j.
DiscreteSubspaceMeasure projection_generating_measure(const Zonotope& z, int j, const EvalOptions& opts) {
    const int n = z.ambient_dim();
    if (j < 1 || j > n) throw ContractViolation("projection_generating_measure: need 1 <= j <= n");
    if (z.num_generators() < j) return DiscreteSubspaceMeasure(n, j);
    const auto subsets = subset_volumes(z.generators(), j, opts.exec, opts.budget);
    const double w = std::ldexp(1.0, j) / kappa(j);
    std::vector<SubspaceAtom> raw;
    for (const auto& s : subsets) {
        if (s.volume <= 0.0) continue;
        Mat cols(n, j);
        for (int i = 0; i < j; ++i) cols.col(i) = z.generators().col(s.indices[i]);
        raw.push_back({orthonormalize(cols), w * s.volume});
    }
    return DiscreteSubspaceMeasure(n, j, std::move(raw));
}

double zonotope_intrinsic_volume(const Zonotope& z, int j, const EvalOptions& opts) {
    if (j < 0 || j > z.ambient_dim()) throw ContractViolation("zonotope_intrinsic_volume: need 0 <= j <= n");
    if (j == 0) return 1.0;
    return kappa(j) * projection_generating_measure(z, j, opts).total_mass();
}

double mixed_volume_zonotopes_ball(int n, std::span<const ZonotopeTerm> terms, int beta, const EvalOptions& opts) {
    if (beta < 0 || beta > n) throw ContractViolation("mixed_volume_zonotopes_ball: beta out of range");
    check_terms(n, terms, n - beta, "mixed_volume_zonotopes_ball");
    if (terms.empty()) return kappa(n);
    const AtomTable table = atom_table(terms, opts);
    if (table.empty) return 0.0;
    const double s = mixed_radix_sum(
        table.radices,
        [&](std::span<const std::uint64_t> d) {
            const auto v = view_tuple(table, n, d);
            return v.bracket * v.mass;
        },
        opts.exec, opts.budget);
    return measure_prefactor(n, beta, terms) * kappa(beta) * s;
}

Estimate mixed_volume_body_ball_zonotopes(const Zonotope& K, int gamma, int ball_copies,
                                          std::span<const ZonotopeTerm> terms, Evaluator, const McConfig&,
                                          const EvalOptions& opts) {
    const int n = K.ambient_dim();
    if (gamma < 0 || ball_copies < 0) throw ContractViolation("mixed_volume_body_ball_zonotopes: negative multiplicity");
    std::vector<ZonotopeTerm> all;
    if (gamma > 0) all.push_back({K, gamma});
    all.insert(all.end(), terms.begin(), terms.end());
    return {mixed_volume_zonotopes_ball(n, all, ball_copies, opts), 0.0, true};
}

// Inner term of each atom tuple: V_gamma(K | W) kappa_{beta-gamma} / binom(beta, gamma),
// W = (U_1 + ... + U_m)^perp, evaluated in coordinates of W.
Estimate mixed_volume_body_ball_zonotopes(const VPolytope& K, int gamma, int ball_copies,
                                          std::span<const ZonotopeTerm> terms, Evaluator evaluator,
                                          const McConfig& mc, const EvalOptions& opts) {
    const int n = K.ambient_dim();
    if (gamma < 0 || ball_copies < 0) throw ContractViolation("mixed_volume_body_ball_zonotopes: negative multiplicity");
    const int beta = gamma + ball_copies;
    if (beta > n) throw ContractViolation("mixed_volume_body_ball_zonotopes: gamma + ball copies exceed n");
    check_terms(n, terms, n - beta, "mixed_volume_body_ball_zonotopes");
    const double inner_factor = kappa(ball_copies) / binomial(beta, gamma);
    if (terms.empty()) {
        const Estimate v = intrinsic_volume(K, gamma, evaluator, mc, opts.exec);
        return {inner_factor * v.value, inner_factor * v.std_error, v.exact};
    }
    const AtomTable table = atom_table(terms, opts);
    if (table.empty) return {0.0, 0.0, true};
    const std::uint64_t count = saturating_product(table.radices);
    if (count > opts.budget) throw BudgetExceeded("mixed_volume_body_ball_zonotopes: too many atom tuples");

    std::vector<double> variance(count, 0.0);
    std::vector<char> exact(count, 1);
    const auto values = evaluate_indexed(
        count,
        [&](std::uint64_t index) -> double {
            std::vector<std::uint64_t> digits(table.radices.size());
            std::uint64_t rest = index;
            for (std::size_t p = digits.size(); p-- > 0;) {
                digits[p] = rest % table.radices[p];
                rest /= table.radices[p];
            }
            const auto v = view_tuple(table, n, digits);
            if (v.bracket <= 0.0) return 0.0;
            double inner = 1.0, inner_se = 0.0;
            if (gamma > 0) {
                const Subspace W = orthonormalize(v.stacked).orthogonal_complement();
                const VPolytope P = project_to_coordinates(K, W);
                McConfig sub = mc;
                sub.seed = Rng::substream(mc.seed, index).next_u64();
                const Estimate e = intrinsic_volume(P, gamma, evaluator, sub, Exec::serial);
                inner = e.value;
                inner_se = e.std_error;
                exact[index] = e.exact ? 1 : 0;
            }
            const double w = v.bracket * v.mass * inner_factor;
            variance[index] = (w * inner_se) * (w * inner_se);
            return w * inner;
        },
        opts.exec);
    CompensatedSum sum, var;
    bool all_exact = true;
    for (std::uint64_t i = 0; i < count; ++i) {
        sum += values[i];
        var += variance[i];
        all_exact = all_exact && exact[i];
    }
    const double pre = measure_prefactor(n, beta, terms);
    return {pre * sum.value(), pre * std::sqrt(var.value()), all_exact};
}

double mixed_volume_bodies_zonotopes(std::span<const PolytopeTerm> bodies, std::span<const ZonotopeTerm> terms,
                                     const EvalOptions& opts) {
    if (bodies.empty()) throw ContractViolation("mixed_volume_bodies_zonotopes: no general bodies");
    const int n = bodies.front().body.ambient_dim();
    int beta = 0;
    for (const auto& b : bodies) {
        if (b.body.ambient_dim() != n) throw ContractViolation("mixed_volume_bodies_zonotopes: dimension mismatch");
        if (b.multiplicity < 1) throw ContractViolation("mixed_volume_bodies_zonotopes: multiplicities must be >= 1");
        beta += b.multiplicity;
    }
    if (beta > n) throw ContractViolation("mixed_volume_bodies_zonotopes: multiplicities exceed n");
    check_terms(n, terms, n - beta, "mixed_volume_bodies_zonotopes");
    if (terms.empty()) return polarization_mixed_volume(bodies, opts);
    if (beta > kMaxPolarizationDim)
        throw BudgetExceeded("mixed_volume_bodies_zonotopes: projected dimension above the polarization limit");
    const AtomTable table = atom_table(terms, opts);
    if (table.empty) return 0.0;
    const double s = mixed_radix_sum(
        table.radices,
        [&](std::span<const std::uint64_t> d) {
            const auto v = view_tuple(table, n, d);
            if (v.bracket <= 0.0) return 0.0;
            const Subspace W = orthonormalize(v.stacked).orthogonal_complement();
            std::vector<PolytopeTerm> projected;
            for (const auto& b : bodies) projected.push_back({project_to_coordinates(b.body, W), b.multiplicity});
            return v.bracket * v.mass * polarization_mixed_volume(projected, opts);
        },
        opts.exec, opts.budget);
    return measure_prefactor(n, beta, terms) * s;
}

}  // namespace zonovol
