#include <doctest.h>

#include "test_util.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/kernels.hpp"

using namespace zonovol;
using namespace zonovol::testing;

namespace {

Mat random_gens(int n, int count, Rng& rng) {
    Mat g(n, count);
    for (int c = 0; c < count; ++c) g.col(c) = uniform_vec(n, rng);
    return g;
}

}  // namespace

TEST_CASE("binomial counts") {
    CHECK(binomial_count(5, 2) == 10);
    CHECK(binomial_count(20, 10) == 184756);
    CHECK(binomial_count(3, 4) == 0);
    CHECK(binomial_count(62, 31) == 465428353255261088ULL);
    CHECK(binomial_count(200, 100) == UINT64_MAX);
}

TEST_CASE("det tuple sum: parallel agrees with the serial reference") {
    Rng rng(1);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + t % 3;
        std::vector<GeneratorBlock> blocks;
        int left = n;
        while (left > 0) {
            const int take = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(left));
            blocks.push_back({random_gens(n, take + static_cast<int>(rng.next_u64() % 5), rng), take});
            left -= take;
        }
        const double par = det_tuple_sum(blocks, Exec::parallel);
        const double ser = det_tuple_sum(blocks, Exec::serial);
        CHECK(rel_close(par, ser, 1e-12));
        CHECK(det_tuple_sum(blocks, Exec::parallel) == par);
    }
}

TEST_CASE("det tuple sum over a large enumeration spans many chunks") {
    Rng rng(2);
    std::vector<GeneratorBlock> blocks{{random_gens(3, 30, rng), 1}, {random_gens(3, 30, rng), 2}};
    CHECK(subset_tuple_count(blocks) == 30 * 435);
    CHECK(rel_close(det_tuple_sum(blocks, Exec::parallel), det_tuple_sum(blocks, Exec::serial), 1e-12));
}

TEST_CASE("det tuple sum contracts and budget") {
    Rng rng(3);
    std::vector<GeneratorBlock> bad{{random_gens(3, 2, rng), 1}};
    CHECK_THROWS_AS(det_tuple_sum(bad), ContractViolation);
    std::vector<GeneratorBlock> big{{random_gens(2, 100, rng), 1}, {random_gens(2, 100, rng), 1}};
    CHECK_THROWS_AS(det_tuple_sum(big, Exec::parallel, 9999), BudgetExceeded);
    CHECK_NOTHROW(det_tuple_sum(big, Exec::parallel, 10000));
}

TEST_CASE("subset volumes match the serial enumeration") {
    Rng rng(4);
    const Mat g = random_gens(4, 9, rng);
    for (int j = 1; j <= 4; ++j) {
        const auto a = subset_volumes(g, j, Exec::parallel);
        const auto b = subset_volumes(g, j, Exec::serial);
        REQUIRE(a.size() == b.size());
        CHECK(a.size() == binomial_count(9, j));
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].indices == b[i].indices);
            CHECK(a[i].volume == b[i].volume);
        }
    }
}

TEST_CASE("ordered and mixed-radix sums") {
    auto f = [](std::uint64_t i) { return 1.0 / static_cast<double>(i + 1); };
    const double par = ordered_sum(100000, f, Exec::parallel);
    CHECK(rel_close(par, ordered_sum(100000, f, Exec::serial), 1e-14));
    CHECK(ordered_sum(100000, f, Exec::parallel) == par);
    std::vector<std::uint64_t> radices{3, 4, 5};
    auto g = [](std::span<const std::uint64_t> d) { return static_cast<double>(d[0] * 100 + d[1] * 10 + d[2]); };
    // each digit averages (r-1)/2 over 60 tuples
    const double expected = 60.0 * (100.0 * 1.0 + 10.0 * 1.5 + 2.0);
    CHECK(mixed_radix_sum(radices, g, Exec::parallel) == doctest::Approx(expected));
    CHECK(mixed_radix_sum(radices, g, Exec::serial) == doctest::Approx(expected));
    std::vector<std::uint64_t> empty_axis{3, 0};
    CHECK(mixed_radix_sum(empty_axis, g) == 0.0);
}

TEST_CASE("exceptions inside parallel regions propagate") {
    auto f = [](std::uint64_t i) -> double {
        if (i == 5000) throw NeedsMonteCarlo("boom");
        return 1.0;
    };
    CHECK_THROWS_AS(ordered_sum(10000, f, Exec::parallel), NeedsMonteCarlo);
    CHECK_THROWS_AS(evaluate_indexed(10000, f, Exec::parallel), NeedsMonteCarlo);
}
