#pragma once

#include <cstdint>

#include "zonovol/kernels.hpp"

namespace zonovol {

struct EvalOptions {
    Exec exec = Exec::parallel;
    std::uint64_t budget = kDefaultBudget;
};

enum class Evaluator { exact, montecarlo };

struct McConfig {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
};

// A mixed or intrinsic volume; std_error is 0 for exact values.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    bool exact = true;
};

}  // namespace zonovol
