#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "zonovol/linalg.hpp"

namespace zonovol {

enum class Exec { parallel, serial };

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

// Tuples per reduction chunk. Chunk boundaries depend only on the tuple count, so the
// parallel sums are identical for any thread count.
inline constexpr std::uint64_t kChunkSize = 4096;

// Saturates at UINT64_MAX.
std::uint64_t binomial_count(int n, int k);
std::uint64_t saturating_product(std::span<const std::uint64_t> factors);

// Choose `take` columns of `generators`.
struct GeneratorBlock {
    Mat generators;
    int take;
};

struct SubsetVolume {
    std::vector<int> indices;  // increasing
    double volume;             // D_j of the chosen columns
};

// Number of tuples formed by one take-subset per block.
std::uint64_t subset_tuple_count(std::span<const GeneratorBlock> blocks);

// Sum over one take-subset per block of |det| of the stacked columns (sum of takes = rows).
double det_tuple_sum(std::span<const GeneratorBlock> blocks, Exec exec = Exec::parallel,
                     std::uint64_t budget = kDefaultBudget);

// Every j-subset of the columns with its parallelepiped volume, in lexicographic order.
std::vector<SubsetVolume> subset_volumes(const Mat& generators, int j, Exec exec = Exec::parallel,
                                         std::uint64_t budget = kDefaultBudget);

// Compensated sum of term(i) for i < count, with a fixed reduction order.
double ordered_sum(std::uint64_t count, const std::function<double(std::uint64_t)>& term,
                   Exec exec = Exec::parallel);

// Sum of term(digits) over the mixed-radix space radices[0] x ... x radices[k-1].
double mixed_radix_sum(std::span<const std::uint64_t> radices,
                       const std::function<double(std::span<const std::uint64_t>)>& term,
                       Exec exec = Exec::parallel, std::uint64_t budget = kDefaultBudget);

// values[i] = f(i); evaluated concurrently when exec is parallel.
std::vector<double> evaluate_indexed(std::uint64_t count, const std::function<double(std::uint64_t)>& f,
                                     Exec exec = Exec::parallel);

namespace serial {

double det_tuple_sum(std::span<const GeneratorBlock> blocks);
std::vector<SubsetVolume> subset_volumes(const Mat& generators, int j);
double ordered_sum(std::uint64_t count, const std::function<double(std::uint64_t)>& term);
double mixed_radix_sum(std::span<const std::uint64_t> radices,
                       const std::function<double(std::span<const std::uint64_t>)>& term);

}  // namespace serial

}  // namespace zonovol
