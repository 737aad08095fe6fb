#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zonovol/bodies.hpp"
#include "zonovol/options.hpp"

namespace zonovol {

struct BodyTerm {
    Body body;
    int multiplicity;
};

enum class InequalityId { af_lower, conj_1_1, thm_1_3, thm_1_4, zonolate };

std::string_view inequality_name(InequalityId id);  // "AF_LOWER", "CONJ_1_1", ...
InequalityId parse_inequality_id(std::string_view name);

struct EvalConfig {
    Evaluator evaluator = Evaluator::exact;
    McConfig mc;
    EvalOptions opts;
};

// Mixed volume of the terms (multiplicities summing to n). Zero multiplicities are dropped.
// Zonotopes and balls only: exact generator sums. One polytope with balls and zonotopes:
// projection formula. Several polytopes without balls: polarization inside each projection.
Estimate mixed_volume(std::span<const BodyTerm> terms, const EvalConfig& cfg = {});

// V_j of any body; exact for zonotopes and the ball.
Estimate body_intrinsic_volume(const Body& body, int j, const EvalConfig& cfg = {});

struct EqualityDiagnostics {
    std::vector<int> dims;
    std::vector<int> multiplicities;
    // Bracket of the linear hulls of bodies i and j inside their sum; 0 when
    // dim_i + dim_j > n or the sum is not direct.
    Mat pairwise_brackets;
    bool dims_match = false;                   // dim K_i = alpha_i for every non-ball body
    bool outside_equality_hypotheses = false;  // some dim K_i < alpha_i
};

EqualityDiagnostics equality_diagnostics(std::span<const BodyTerm> terms);

struct InequalityReport {
    InequalityId id;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> epsilon;  // rhs / lhs - 1, absent when lhs vanishes
    bool holds = false;
    bool equality_within = false;
    bool degenerate = false;
    bool proven = false;  // a theorem guarantees holds on this instance
    double std_error = 0.0;
    EqualityDiagnostics diagnostics;
};

inline constexpr double kEqualityTolerance = 1e-7;
inline constexpr double kInequalityTolerance = 1e-9;

struct CheckParams {
    EvalConfig eval;
    // THM_1_3: index of the general body K. Defaults to the unique polytope of the input,
    // else the first non-ball term.
    std::optional<std::size_t> designated;
};

// lhs = prod V_n(K_i)^{alpha_i / n}, rhs = V(K_1[alpha_1], ...); holds when rhs >= lhs - tol.
InequalityReport check_af_lower(std::span<const BodyTerm> terms, const CheckParams& params = {});

// lhs = multinomial * mixed volume; rhs = product of intrinsic volumes, with a factor
// kappa_{beta - gamma} (THM_1_3) or kappa_beta (ZONOLATE) for the ball copies.
// ApplicabilityError when the instance is outside the inequality's class.
InequalityReport check_reverse_af(InequalityId which, std::span<const BodyTerm> terms,
                                  const CheckParams& params = {});

InequalityReport check_inequality(InequalityId which, std::span<const BodyTerm> terms,
                                  const CheckParams& params = {});

// Random zonotopes (1..max_generators generators, coordinates in [-1, 1]) with a random
// composition of n as multiplicities.
std::vector<BodyTerm> fuzz_zonotope_configuration(int n, Rng& rng, int max_generators = 4);

}  // namespace zonovol
