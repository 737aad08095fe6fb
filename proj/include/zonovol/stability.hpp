#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zonovol/bodies.hpp"
#include "zonovol/inequality.hpp"
#include "zonovol/zonoid.hpp"

namespace zonovol {

struct SemiAxis {
    Vec direction;  // unit
    double length;
};

struct Ellipsoid {
    Vec center;
    std::vector<SemiAxis> semi_axes;  // lengths descending
};

// Largest n-ball inside a full-dimensional polytope (DegenerateBody otherwise).
double inradius(const VPolytope& p);

// Maximum-volume inscribed ellipsoid of a full-dimensional polytope. Its d-fold dilate about the
// center is checked to contain every vertex; NumericalInconsistency when it does not.
Ellipsoid max_inscribed_ellipsoid(const VPolytope& p);

// Same for a polytope of any dimension d >= 1: a d-dimensional ellipsoid in its affine hull.
Ellipsoid john_ellipsoid(const VPolytope& p);

enum class RadiusMethod { exact_box, mvie, inradius_lp, diameter, closed_form };
std::string_view radius_method_name(RadiusMethod m);

struct RadiusEstimate {
    int m = 0;
    double lower = 0.0;
    double upper = 0.0;
    RadiusMethod method = RadiusMethod::closed_form;
};

struct RadiusOptions {
    // Use the closed form for axis-aligned boxes and orthogonal zonotopes. When false such
    // bodies go through the ellipsoid bounds like any other.
    bool box_formula = true;
};

// r_m for an orthogonal box with the given half-widths: the largest r with
// sum_i min(1, h_i^2 / r^2) >= m.
double box_radius(std::vector<double> half_widths, int m);

// Interval for r_m(K): exact for m = 1 (half the diameter), boxes, m = dim K (inradius in the
// affine hull) and m > dim K (zero); otherwise [max(a_m, r_d), min(d a_m, r_1)] from the John
// ellipsoid of the d-dimensional body.
RadiusEstimate r_m_estimate(const Body& body, int m, const RadiusOptions& opts = {});

// For each (Z_i, alpha_i), the atom L of rho_(alpha_i)(Z_i) maximizing V_alpha(Z_i | L).
// Near-ties (1e-12 relative) go to the lexicographically smallest projector matrix.
std::vector<Subspace> recover_subspaces(std::span<const ZonotopeTerm> terms, const EvalOptions& opts = {});

// V_alpha(Z | L) for an alpha-dimensional L.
double zonotope_projection_volume(const Zonotope& z, const Subspace& L, const EvalOptions& opts = {});

struct ProjectionSearch {
    Subspace subspace;
    double value;
};

// Best beta-subspace for V_beta(K | L) among the John-ellipsoid axes, the linear hull when it has
// dimension beta, and `samples` Haar subspaces.
ProjectionSearch best_projection_subspace(const VPolytope& K, int beta, std::uint64_t samples, std::uint64_t seed);

enum class StabilityTheorem { thm_1_5, thm_5_1, prop_4_5, lemma_4_6 };
std::string_view theorem_name(StabilityTheorem t);
StabilityTheorem parse_theorem_id(std::string_view name);

struct StabilityParams {
    EvalConfig eval;
    std::uint64_t directions = 1000;    // support-function samples per body
    std::uint64_t subspace_samples = 256;  // Haar candidates for a general K_1
    std::uint64_t seed = 0;
};

struct StabilityCertificate {
    StabilityTheorem theorem;
    bool applicable = true;
    std::string reason;  // why not applicable
    double epsilon = 0.0;
    std::vector<Subspace> recovered_subspaces;
    double bracket_value = 0.0;
    std::optional<double> bracket_bound;  // absent for PROP_4_5, which bounds no bracket
    bool bound_trivial = false;           // bound <= 0
    std::vector<double> containment_slacks;
    std::vector<double> containment_radii;
    std::optional<bool> radius_condition;  // PROP_4_5: r(K_1 | A_1) >= r(K_1) / n
    bool holds = false;
};

// Computes epsilon from the reverse inequality, recovers L_i, evaluates the bracket against the
// theorem's bound and the containment conclusions. Hypotheses that fail (epsilon out of range,
// unverifiable radius conditions) give applicable = false; bodies outside the theorem's class
// raise ApplicabilityError.
StabilityCertificate check_stability(StabilityTheorem theorem, std::span<const BodyTerm> terms,
                                     const StabilityParams& params = {});

struct ProjStabReport {
    int beta;
    double lhs;
    double lhs_std_error;
    double max_projection;
    double factor;
    double rhs;
    RadiusEstimate r_beta;
    RadiusEstimate r_beta1;
    bool holds;
};

// V_beta(K) against (1 + r_{beta+1}^2 / (2^{n+2} n^5 r_beta^2)) max_L V_beta(K | L), with the
// maximum over Haar samples and structured candidates and the radii at their conservative ends.
ProjStabReport projstab_check(const Body& K, int beta, const StabilityParams& params = {});

struct BallRatio {
    int n;
    int j;
    double ratio;  // V_j(B^n) / kappa_j
    double bound;  // 2^{n/2}
    bool holds;
};

BallRatio ball_intrinsic_ratio(int n, int j);

struct CmReport {
    bool applicable = true;
    std::string reason;
    double slack = 0.0;
    RadiusEstimate r_alpha;
    RadiusEstimate r_alpha_projected;
    double lhs = 0.0;
    double rhs = 0.0;
    double factor = 0.0;
    double std_error = 0.0;
    bool holds = false;
};

// V_alpha(M) <= (1 + n 2^{n+1} eta) V_alpha(M | A) once M lies within eta r_alpha(M) of the
// alpha-flat A and r_alpha(M | A) >= r_alpha(M) / n.
CmReport cm_intrinsic_check(const Body& M, const Flat& A, int alpha, double eta, const EvalConfig& cfg = {});

}  // namespace zonovol
