#include "zonovol/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zonovol/errors.hpp"
#include "zonovol/random.hpp"
#include "zonovol/special.hpp"
#include "zonovol/summation.hpp"

namespace zonovol {

namespace {

bool same_polytope(const VPolytope& a, const VPolytope& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.num_vertices() != b.num_vertices()) return false;
    for (int i = 0; i < a.num_vertices(); ++i)
        if (a.vertices()[i] != b.vertices()[i]) return false;
    return true;
}

// The polytope in coordinates of its own affine hull.
VPolytope intrinsic_copy(const VPolytope& K) {
    const auto& frame = K.hull().frame;
    std::vector<Vec> pts;
    pts.reserve(K.vertices().size());
    for (const auto& v : K.vertices()) pts.push_back(frame.to_local(v));
    return VPolytope(pts);
}

}  // namespace

double polarization_mixed_volume(std::span<const VPolytope> slots, const EvalOptions& opts) {
    std::vector<PolytopeTerm> terms;
    for (const auto& s : slots) {
        auto it = std::find_if(terms.begin(), terms.end(), [&](const PolytopeTerm& t) { return same_polytope(t.body, s); });
        if (it != terms.end())
            ++it->multiplicity;
        else
            terms.push_back({s, 1});
    }
    return polarization_mixed_volume(terms, opts);
}

double polarization_mixed_volume(std::span<const PolytopeTerm> terms, const EvalOptions& opts) {
    if (terms.empty()) throw ContractViolation("polarization_mixed_volume: no bodies");
    const int n = terms.front().body.ambient_dim();
    int total = 0;
    for (const auto& t : terms) {
        if (t.body.ambient_dim() != n) throw ContractViolation("polarization_mixed_volume: dimension mismatch");
        if (t.multiplicity < 1) throw ContractViolation("polarization_mixed_volume: multiplicities must be >= 1");
        total += t.multiplicity;
    }
    if (total != n)
        throw ContractViolation("polarization_mixed_volume: multiplicities sum to " + std::to_string(total) +
                                ", expected " + std::to_string(n));
    if (n > kMaxPolarizationDim)
        throw BudgetExceeded("polarization_mixed_volume: dimension " + std::to_string(n) + " above the oracle limit " +
                             std::to_string(kMaxPolarizationDim));

    // Mixed-radix index over k_i in [0, a_i], last term fastest. sums[idx] = sum_i k_i K_i,
    // built from sums[idx - stride(j)] + K_j for the last nonzero digit j.
    const std::size_t m = terms.size();
    std::vector<int> radix(m), stride(m);
    int count = 1;
    for (std::size_t i = m; i-- > 0;) {
        radix[i] = terms[i].multiplicity + 1;
        stride[i] = count;
        count *= radix[i];
    }
    if (static_cast<std::uint64_t>(count) > opts.budget) throw BudgetExceeded("polarization_mixed_volume: too many sums");

    std::vector<std::vector<Vec>> sums(static_cast<std::size_t>(count));
    sums[0] = {Vec::Zero(n)};
    CompensatedSum acc;
    double scale = 0.0;
    std::vector<int> k(m, 0);
    for (int idx = 1; idx < count; ++idx) {
        for (std::size_t p = m; p-- > 0;) {
            if (++k[p] < radix[p]) break;
            k[p] = 0;
        }
        std::size_t j = m;
        while (k[j - 1] == 0) --j;
        --j;
        const auto& prev = sums[static_cast<std::size_t>(idx - stride[j])];
        const auto& verts = terms[j].body.vertices();
        const std::uint64_t points = static_cast<std::uint64_t>(prev.size()) * verts.size();
        if (points > kMaxPolarizationPoints)
            throw BudgetExceeded("polarization_mixed_volume: Minkowski sum with " + std::to_string(points) +
                                 " candidate points");
        std::vector<Vec> cand;
        cand.reserve(points);
        for (const auto& a : prev)
            for (const auto& b : verts) cand.push_back(a + b);
        VPolytope sum(cand);
        sums[static_cast<std::size_t>(idx)] = sum.vertices();

        int weight_k = 0;
        double coef = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            weight_k += k[i];
            coef *= binomial(terms[i].multiplicity, k[i]);
        }
        const double vol = volume(sum);
        const double term = ((n - weight_k) % 2 == 0 ? 1.0 : -1.0) * coef * vol;
        scale = std::max(scale, std::abs(term));
        acc += term;
    }
    const double result = acc.value() / factorial(n);
    const double tol = 1e-10 * std::max(1.0, scale / factorial(n));
    if (result < 0.0) {
        if (result >= -tol) return 0.0;
        throw NumericalInconsistency("polarization_mixed_volume: negative mixed volume " + std::to_string(result));
    }
    return result;
}

double projection_volume(const VPolytope& K, const Subspace& L) {
    if (L.ambient_dim() != K.ambient_dim()) throw ContractViolation("projection_volume: dimension mismatch");
    const int i = L.dim();
    if (i == 0) return 1.0;
    if (i == 1) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        const Vec u = L.basis().col(0);
        for (const auto& v : K.vertices()) {
            const double t = u.dot(v);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        return hi - lo;
    }
    return flat_volume(project_to_coordinates(K, L), i);
}

McEstimate kubota_intrinsic_volume_mc(const VPolytope& K, int i, std::uint64_t samples, std::uint64_t seed,
                                      Exec exec) {
    const int n = K.ambient_dim();
    if (i < 1 || i > n - 1) throw ContractViolation("kubota_intrinsic_volume_mc: need 1 <= i <= n-1");
    if (samples < 100) throw ContractViolation("kubota_intrinsic_volume_mc: need at least 100 samples");
    const double c = std::exp(log_binomial(n, i) + log_kappa(n) - log_kappa(i) - log_kappa(n - i));
    const auto values = evaluate_indexed(
        samples,
        [&](std::uint64_t s) {
            Rng rng = Rng::substream(seed, s);
            return projection_volume(K, sample_grassmannian(n, i, rng));
        },
        exec);
    CompensatedSum sum;
    for (double v : values) sum += v;
    const double mean = sum.value() / static_cast<double>(samples);
    CompensatedSum dev;
    for (double v : values) dev += (v - mean) * (v - mean);
    const double var = dev.value() / static_cast<double>(samples - 1);
    McEstimate est;
    est.value = c * mean;
    est.std_error = c * std::sqrt(var / static_cast<double>(samples));
    est.samples = samples;
    est.seed = seed;
    est.algorithm = std::string(Rng::algorithm);
    return est;
}

double surface_area(const VPolytope& K) {
    if (K.dim() < K.ambient_dim()) throw DegenerateBody("surface_area: body is not full-dimensional");
    return K.hull().boundary;
}

bool intrinsic_volume_is_exact(const VPolytope& K, int i) {
    const int d = K.dim();
    return i == 0 || d <= i || i == d - 1;
}

Estimate intrinsic_volume(const VPolytope& K, int i, Evaluator evaluator, const McConfig& mc, Exec exec) {
    const int n = K.ambient_dim();
    if (i < 0 || i > n) throw ContractViolation("intrinsic_volume: index out of range");
    const int d = K.dim();
    if (i == 0) return {1.0, 0.0, true};
    if (d <= i) return {flat_volume(K, i), 0.0, true};
    if (i == d - 1) return {0.5 * K.hull().boundary, 0.0, true};
    if (evaluator == Evaluator::exact)
        throw NeedsMonteCarlo("intrinsic volume V_" + std::to_string(i) + " of a " + std::to_string(d) +
                              "-dimensional polytope has no exact path; rerun with Monte Carlo");
    const VPolytope local = d < n ? intrinsic_copy(K) : K;
    const auto est = kubota_intrinsic_volume_mc(local, i, mc.samples, mc.seed, exec);
    return {est.value, est.std_error, false};
}

}  // namespace zonovol
