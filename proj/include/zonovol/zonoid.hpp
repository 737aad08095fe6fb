#pragma once

#include <span>
#include <vector>

#include "zonovol/bodies.hpp"
#include "zonovol/options.hpp"
#include "zonovol/oracle.hpp"

namespace zonovol {

struct SubspaceAtom {
    Subspace subspace;
    double mass;
};

// Finite measure on G(n, j). Atoms closer than kAtomMergeDistance (sine of the largest
// principal angle) are merged and their masses added.
class DiscreteSubspaceMeasure {
public:
    static constexpr double kAtomMergeDistance = 1e-8;

    DiscreteSubspaceMeasure(int ambient_dim, int grassmann_dim);
    // Builds the measure from raw atoms, merging near-duplicates. The first atom of each
    // cluster (in input order) becomes its representative.
    DiscreteSubspaceMeasure(int ambient_dim, int grassmann_dim, std::vector<SubspaceAtom> raw);

    int ambient_dim() const noexcept { return ambient_; }
    int grassmann_dim() const noexcept { return dim_; }
    const std::vector<SubspaceAtom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    double total_mass() const;

private:
    int ambient_;
    int dim_;
    std::vector<SubspaceAtom> atoms_;
};

struct ZonotopeTerm {
    Zonotope body;
    int multiplicity;
};

// V(Z_1, ..., Z_n): one slot per zonotope. Identical slots are grouped so the enumeration
// runs over subsets instead of ordered tuples.
double zonotope_mixed_volume(std::span<const Zonotope> slots, const EvalOptions& opts = {});
// V(Z_1[a_1], ..., Z_m[a_m]) with a_1 + ... + a_m = n.
double zonotope_mixed_volume(std::span<const ZonotopeTerm> terms, const EvalOptions& opts = {});

DiscreteSubspaceMeasure projection_generating_measure(const Zonotope& z, int j, const EvalOptions& opts = {});

double zonotope_intrinsic_volume(const Zonotope& z, int j, const EvalOptions& opts = {});

// V(Z_1[a_1], ..., Z_m[a_m], B^n[beta]).
double mixed_volume_zonotopes_ball(int n, std::span<const ZonotopeTerm> terms, int beta,
                                   const EvalOptions& opts = {});

// V(K[gamma], B^n[ball_copies], Z_1[a_1], ..., Z_m[a_m]).
Estimate mixed_volume_body_ball_zonotopes(const VPolytope& K, int gamma, int ball_copies,
                                          std::span<const ZonotopeTerm> terms,
                                          Evaluator evaluator = Evaluator::exact, const McConfig& mc = {},
                                          const EvalOptions& opts = {});
Estimate mixed_volume_body_ball_zonotopes(const Zonotope& K, int gamma, int ball_copies,
                                          std::span<const ZonotopeTerm> terms,
                                          Evaluator evaluator = Evaluator::exact, const McConfig& mc = {},
                                          const EvalOptions& opts = {});

// V(K_1[g_1], ..., K_p[g_p], Z_1[a_1], ..., Z_m[a_m]) for general polytopes K_i; the mixed volume
// of their projections onto each (U_1 + ... + U_m)^perp is evaluated by polarization.
double mixed_volume_bodies_zonotopes(std::span<const PolytopeTerm> bodies, std::span<const ZonotopeTerm> terms,
                                     const EvalOptions& opts = {});

}  // namespace zonovol
