#include <doctest.h>

#include <numbers>

#include "test_util.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/oracle.hpp"
#include "zonovol/zonoid.hpp"

using namespace zonovol;
using namespace zonovol::testing;

TEST_CASE("polarization examples") {
    std::vector<VPolytope> a{VPolytope({vec({0, 0}), vec({1, 0})}), VPolytope({vec({0, 0}), vec({0, 1})})};
    CHECK(polarization_mixed_volume(a) == doctest::Approx(0.5));
    std::vector<VPolytope> b{cube01(2), cube01(2)};
    CHECK(polarization_mixed_volume(b) == doctest::Approx(1.0));
    const double h = std::sqrt(0.5);
    std::vector<VPolytope> c{cube01(2), VPolytope({vec({h, 0}), vec({0, h}), vec({-h, 0}), vec({0, -h})})};
    CHECK(polarization_mixed_volume(c) == doctest::Approx(std::sqrt(2.0)));
    std::vector<VPolytope> bad{cube01(2)};
    CHECK_THROWS_AS(polarization_mixed_volume(bad), ContractViolation);
    std::vector<VPolytope> big(6, cube01(6));
    CHECK_THROWS_AS(polarization_mixed_volume(big), BudgetExceeded);
}

TEST_CASE("polarization symmetry, diagonal and zonotope agreement") {
    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 3;
        std::vector<VPolytope> slots;
        for (int i = 0; i < n; ++i) slots.push_back(random_polytope(n, 6, rng));
        const double v = polarization_mixed_volume(slots);
        auto rev = slots;
        std::reverse(rev.begin(), rev.end());
        CHECK(rel_close(polarization_mixed_volume(rev), v, 1e-9, 1e-12));
        std::vector<VPolytope> same(n, slots[0]);
        CHECK(rel_close(polarization_mixed_volume(same), volume(slots[0]), 1e-9, 1e-12));
        // distinct but equal copies take the ungrouped path
        std::vector<VPolytope> copies;
        for (int i = 0; i < n; ++i) copies.push_back(slots[0].translated(Vec::Constant(n, 0.1 * i)));
        CHECK(rel_close(polarization_mixed_volume(copies), volume(slots[0]), 1e-9, 1e-12));
    }
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 3;
        std::vector<Zonotope> zs;
        std::vector<VPolytope> ps;
        for (int i = 0; i < n; ++i) {
            zs.push_back(random_zonotope(n, 4, rng));
            ps.push_back(zonotope_to_vpolytope(zs.back()));
        }
        CHECK(rel_close(polarization_mixed_volume(ps), zonotope_mixed_volume(zs), 1e-7, 1e-12));
    }
}

TEST_CASE("Kubota estimates") {
    const auto cube = cube01(3);
    for (int i = 1; i <= 2; ++i) {
        const auto e = kubota_intrinsic_volume_mc(cube, i, 10000, 0);
        CHECK(std::abs(e.value - 3.0) <= 3.0 * e.std_error);
        CHECK(e.samples == 10000);
        CHECK(e.algorithm.find("xoshiro256") != std::string::npos);
    }
    const VPolytope segment({vec({0, 0, 0}), vec({1, 0, 0})});
    const auto s = kubota_intrinsic_volume_mc(segment, 1, 10000, 5);
    CHECK(std::abs(s.value - 1.0) <= 3.0 * s.std_error);
    const auto a = kubota_intrinsic_volume_mc(cube, 1, 1000, 9);
    const auto b = kubota_intrinsic_volume_mc(cube, 1, 1000, 9, Exec::serial);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK_THROWS_AS(kubota_intrinsic_volume_mc(cube, 0, 1000, 0), ContractViolation);
    CHECK_THROWS_AS(kubota_intrinsic_volume_mc(cube, 1, 10, 0), ContractViolation);
}

TEST_CASE("Kubota standard error scales like samples^-1/2") {
    const auto cube = cube01(3);
    const auto lo = kubota_intrinsic_volume_mc(cube, 2, 10000, 1);
    const auto hi = kubota_intrinsic_volume_mc(cube, 2, 40000, 2);
    CHECK(lo.std_error / hi.std_error == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("exact intrinsic volume paths") {
    const VPolytope tri({vec({0, 0}), vec({1, 0}), vec({0, 1})});
    CHECK(intrinsic_volume(tri, 1).value == doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0));
    CHECK(intrinsic_volume(tri, 2).value == doctest::Approx(0.5));
    CHECK(intrinsic_volume(tri, 0).value == 1.0);
    CHECK(intrinsic_volume(cube01(3), 2).value == doctest::Approx(3.0));
    CHECK_THROWS_AS(intrinsic_volume(cube01(3), 1), NeedsMonteCarlo);
    const auto mc = intrinsic_volume(cube01(3), 1, Evaluator::montecarlo, {10000, 4});
    CHECK_FALSE(mc.exact);
    CHECK(std::abs(mc.value - 3.0) <= 3.0 * mc.std_error);
    // lower-dimensional bodies are handled in their own affine hull
    const VPolytope tri3({vec({0, 0, 1}), vec({1, 0, 1}), vec({0, 1, 1})});
    CHECK(intrinsic_volume(tri3, 1).value == doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0));
    CHECK(intrinsic_volume(tri3, 2).value == doctest::Approx(0.5));
    CHECK(intrinsic_volume(tri3, 3).value == 0.0);
}

TEST_CASE("projection never increases intrinsic volume") {
    Rng rng(20);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 2;
        const auto K = random_polytope(n, 8, rng);
        const int a = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1));
        const int d = a + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - a + 1));
        const Subspace A = sample_grassmannian(n, d, rng);
        const auto full = intrinsic_volume(K, a, Evaluator::montecarlo, {2000, 1});
        const auto proj = intrinsic_volume(project(K, A), a, Evaluator::montecarlo, {2000, 2});
        CHECK(proj.value <= full.value + 3.0 * std::hypot(full.std_error, proj.std_error) + 1e-9);
    }
}
