#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zonovol/bodies.hpp"
#include "zonovol/options.hpp"

namespace zonovol {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(samples), on the estimate's scale
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
};

inline constexpr int kMaxPolarizationDim = 5;
// Largest point cloud handed to a single hull inside the polarization oracle.
inline constexpr std::uint64_t kMaxPolarizationPoints = 2'000'000;

struct PolytopeTerm {
    VPolytope body;
    int multiplicity;
};

// (1/n!) sum over nonempty S of (-1)^{n-|S|} V_n(sum_{i in S} K_i). Repeated slots are
// grouped, so the sum runs over multiplicity vectors.
double polarization_mixed_volume(std::span<const VPolytope> slots, const EvalOptions& opts = {});
double polarization_mixed_volume(std::span<const PolytopeTerm> terms, const EvalOptions& opts = {});

// Kubota: V_i(K) = binom(n,i) kappa_n / (kappa_i kappa_{n-i}) * E_L lambda_i(K|L).
McEstimate kubota_intrinsic_volume_mc(const VPolytope& K, int i, std::uint64_t samples, std::uint64_t seed,
                                      Exec exec = Exec::parallel);

// lambda_i(K|L) for an i-dimensional L.
double projection_volume(const VPolytope& K, const Subspace& L);

// Exact when i = 0, dim K <= i, i = n or i = n - 1; otherwise Kubota Monte Carlo
// (NeedsMonteCarlo when the evaluator is exact).
Estimate intrinsic_volume(const VPolytope& K, int i, Evaluator evaluator = Evaluator::exact,
                          const McConfig& mc = {}, Exec exec = Exec::parallel);
bool intrinsic_volume_is_exact(const VPolytope& K, int i);

// Sum of the facet areas of a full-dimensional polytope.
double surface_area(const VPolytope& K);

}  // namespace zonovol
