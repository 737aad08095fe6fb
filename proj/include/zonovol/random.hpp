#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace zonovol {

// xoshiro256** seeded through splitmix64. Chosen because it is fully specified
// and trivially reimplemented elsewhere; std::normal_distribution is not.
class Rng {
public:
    static constexpr std::string_view algorithm = "xoshiro256** (splitmix64 seeding, Box-Muller normals)";

    explicit Rng(std::uint64_t seed);

    // Independent stream for sample `index` of a computation seeded with `seed`.
    static Rng substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    double uniform();  // [0, 1), 53 bits
    double normal();
    Eigen::VectorXd normal_vector(int n);

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace zonovol
