#include <doctest.h>

#include <numbers>

#include "test_util.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/oracle.hpp"
#include "zonovol/special.hpp"
#include "zonovol/zonoid.hpp"

using namespace zonovol;
using namespace zonovol::testing;

namespace {

constexpr double pi = std::numbers::pi;

Zonotope seg(int n, int axis, double length = 1.0) { return Zonotope(n, {Vec(0.5 * length * Vec::Unit(n, axis))}); }

Zonotope square(int n, int a, int b) { return Zonotope(n, {Vec(0.5 * Vec::Unit(n, a)), Vec(0.5 * Vec::Unit(n, b))}); }

}  // namespace

TEST_CASE("kappa and multinomial") {
    CHECK(kappa(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kappa(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(kappa(2) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(kappa(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
    KappaTable table(10);
    for (int j = 0; j <= 10; ++j) CHECK(table[j] == doctest::Approx(kappa(j)));
    CHECK(std::exp(log_kappa(7)) == doctest::Approx(kappa(7)).epsilon(1e-13));
    std::vector<int> parts{1, 2, 3};
    CHECK(multinomial(6, parts) == 60.0);
    CHECK_THROWS_AS(multinomial(5, parts), ContractViolation);
    CHECK(binomial(10, 3) == 120.0);
}

TEST_CASE("zonotope mixed volume examples") {
    std::vector<Zonotope> a{seg(2, 0), seg(2, 1)};
    CHECK(zonotope_mixed_volume(a) == doctest::Approx(0.5));
    std::vector<Zonotope> b{square(2, 0, 1), square(2, 0, 1)};
    CHECK(zonotope_mixed_volume(b) == doctest::Approx(1.0));
    const double th = deg(60);
    std::vector<Zonotope> c{seg(2, 0), Zonotope(2, {vec({std::cos(th) / 2, std::sin(th) / 2})})};
    CHECK(zonotope_mixed_volume(c) == doctest::Approx(std::sqrt(3.0) / 4.0));
    std::vector<ZonotopeTerm> bad{{seg(2, 0), 1}};
    CHECK_THROWS_AS(zonotope_mixed_volume(bad), ContractViolation);
    CHECK_THROWS_AS(zonotope_mixed_volume(std::vector<ZonotopeTerm>{{seg(2, 0), 1}, {seg(3, 0), 1}}), ContractViolation);
}

TEST_CASE("zonotope mixed volume budget") {
    Rng rng(1);
    std::vector<Zonotope> big;
    for (int i = 0; i < 2; ++i) {
        std::vector<Vec> g;
        for (int k = 0; k < 200; ++k) g.push_back(uniform_vec(2, rng));
        big.emplace_back(2, g);
    }
    EvalOptions tight;
    tight.budget = 1000;
    CHECK_THROWS_AS(zonotope_mixed_volume(big, tight), BudgetExceeded);
}

TEST_CASE("projection generating measure examples") {
    const Zonotope cube = cube_zonotope(3);
    const auto m2 = projection_generating_measure(cube, 2);
    REQUIRE(m2.size() == 3);
    for (const auto& a : m2.atoms()) CHECK(a.mass == doctest::Approx(1.0 / pi));
    CHECK(kappa(2) * m2.total_mass() == doctest::Approx(3.0));
    // coordinate planes
    int found = 0;
    for (int i = 0; i < 3; ++i)
        for (const auto& a : m2.atoms())
            if (!a.subspace.contains(unit(3, i))) ++found;
    CHECK(found == 3);

    const auto m1 = projection_generating_measure(seg(2, 0), 1);
    REQUIRE(m1.size() == 1);
    CHECK(m1.atoms()[0].mass == doctest::Approx(0.5));
    CHECK(m1.atoms()[0].subspace.contains(unit(2, 0)));
    CHECK(projection_generating_measure(seg(3, 0), 2).empty());
    CHECK(projection_generating_measure(Zonotope(3, {vec({1, 0, 0}), vec({2, 0, 0})}), 2).empty());
}

TEST_CASE("parallel generators coalesce into one atom") {
    const double eps = 1e-12;
    Zonotope z(2, {vec({1, 0}), vec({2, 0}), vec({-1, eps}), vec({0, 1})});
    const auto m = projection_generating_measure(z, 1);
    REQUIRE(m.size() == 2);
    CHECK(m.atoms()[0].mass == doctest::Approx(4.0));
    CHECK(m.atoms()[1].mass == doctest::Approx(1.0));
}

TEST_CASE("zonotope intrinsic volumes") {
    const Zonotope cube = cube_zonotope(3);
    CHECK(zonotope_intrinsic_volume(cube, 0) == 1.0);
    CHECK(zonotope_intrinsic_volume(cube, 1) == doctest::Approx(3.0));
    CHECK(zonotope_intrinsic_volume(cube, 2) == doctest::Approx(3.0));
    CHECK(zonotope_intrinsic_volume(cube, 3) == doctest::Approx(1.0));
    CHECK(zonotope_intrinsic_volume(seg(3, 0), 1) == doctest::Approx(1.0));
    CHECK(zonotope_intrinsic_volume(seg(3, 0), 2) == 0.0);
    Zonotope hex(2, {vec({0.5, 0}), vec({0, 0.5}), vec({0.5, 0.5})});
    CHECK(zonotope_intrinsic_volume(hex, 2) == doctest::Approx(3.0));
    CHECK(volume(zonotope_to_vpolytope(hex)) == doctest::Approx(3.0));

    Rng rng(6);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + t % 3;
        const Zonotope z = random_zonotope(n, 6, rng);
        const auto p = zonotope_to_vpolytope(z);
        if (z.dim() == n) {
            CHECK(rel_close(zonotope_intrinsic_volume(z, n), volume(p), 1e-9));
            CHECK(rel_close(zonotope_intrinsic_volume(z, n - 1), 0.5 * surface_area(p), 1e-9));
        }
        for (int j = 1; j <= n; ++j)
            CHECK(rel_close(kappa(j) * projection_generating_measure(z, j).total_mass(), zonotope_intrinsic_volume(z, j),
                            1e-12));
    }
}

TEST_CASE("mixed volumes with ball copies") {
    std::vector<ZonotopeTerm> one{{seg(2, 0), 1}};
    CHECK(mixed_volume_zonotopes_ball(2, one, 1) == doctest::Approx(1.0));
    CHECK(mixed_volume_zonotopes_ball(2, {}, 2) == doctest::Approx(pi));
    std::vector<ZonotopeTerm> two{{seg(3, 0), 1}, {seg(3, 1), 1}};
    CHECK(mixed_volume_zonotopes_ball(3, two, 1) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(mixed_volume_zonotopes_ball(3, two, 2), ContractViolation);

    Rng rng(8);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 3;
        // beta = 0 agrees with the determinant formula
        std::vector<ZonotopeTerm> terms;
        std::vector<Zonotope> slots;
        for (int i = 0; i < n; ++i) {
            terms.push_back({random_zonotope(n, 4, rng), 1});
            slots.push_back(terms.back().body);
        }
        CHECK(rel_close(mixed_volume_zonotopes_ball(n, terms, 0), zonotope_mixed_volume(slots), 1e-8, 1e-12));
        // V(Z[n-1], B) = kappa_1 V_{n-1}(Z) / n, and in the plane the boundary length gives V_1 independently
        std::vector<ZonotopeTerm> zb{{terms[0].body, n - 1}};
        const double v = mixed_volume_zonotopes_ball(n, zb, 1);
        CHECK(rel_close(v, 2.0 * zonotope_intrinsic_volume(terms[0].body, n - 1) / n, 1e-10, 1e-12));
        if (n == 2 && terms[0].body.dim() == 2)
            CHECK(rel_close(v, 0.5 * surface_area(zonotope_to_vpolytope(terms[0].body)), 1e-9));
    }
}

TEST_CASE("zonolate upper bound with orthogonal equality") {
    Rng rng(10);
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + t % 3;
        const int beta = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
        std::vector<ZonotopeTerm> terms;
        std::vector<int> parts{beta};
        int left = n - beta;
        double rhs = kappa(beta);
        while (left > 0) {
            const int a = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(left));
            terms.push_back({random_zonotope(n, 4, rng), a});
            parts.push_back(a);
            rhs *= zonotope_intrinsic_volume(terms.back().body, a);
            left -= a;
        }
        const double lhs = multinomial(n, parts) * mixed_volume_zonotopes_ball(n, terms, beta);
        CHECK(lhs <= rhs + 1e-9 * std::max(1.0, rhs));
    }
    // orthogonally placed: square in e1e2, segment along e3 and e4, one ball copy in R^5
    std::vector<ZonotopeTerm> ortho{{square(5, 0, 1), 2}, {seg(5, 2, 1.7), 1}, {seg(5, 3, 0.3), 1}};
    std::vector<int> parts{1, 2, 1, 1};
    const double lhs = multinomial(5, parts) * mixed_volume_zonotopes_ball(5, ortho, 1);
    const double rhs = kappa(1) * 1.0 * 1.7 * 0.3;
    CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
}

TEST_CASE("mixed volume symmetry, multilinearity and translation invariance") {
    Rng rng(12);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 3;
        std::vector<Zonotope> slots;
        for (int i = 0; i < n; ++i) slots.push_back(random_zonotope(n, 4, rng));
        const double v = zonotope_mixed_volume(slots);
        auto swapped = slots;
        std::swap(swapped[0], swapped[n - 1]);
        CHECK(rel_close(zonotope_mixed_volume(swapped), v, 1e-12, 1e-14));
        auto scaled = slots;
        scaled[0] = scaled[0].scaled(2.5);
        CHECK(rel_close(zonotope_mixed_volume(scaled), 2.5 * v, 1e-12, 1e-14));
        auto moved = slots;
        for (auto& z : moved) z = z.translated(uniform_vec(n, rng, -3, 3));
        CHECK(std::abs(zonotope_mixed_volume(moved) - v) <= 1e-10);
        // the same body in every slot gives its volume
        std::vector<Zonotope> same(n, slots[0]);
        CHECK(rel_close(zonotope_mixed_volume(same), zonotope_intrinsic_volume(slots[0], n), 1e-10, 1e-14));
        CHECK(zonotope_mixed_volume(slots, {Exec::serial, kDefaultBudget}) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("general body with ball copies and zonotopes") {
    // n=3: K segment e1 (gamma=1), one ball copy, Z segment e3
    const VPolytope K({vec({0, 0, 0}), vec({1, 0, 0})});
    std::vector<ZonotopeTerm> z3{{seg(3, 2), 1}};
    const auto v = mixed_volume_body_ball_zonotopes(K, 1, 1, z3);
    CHECK(v.exact);
    CHECK(v.value == doctest::Approx(1.0 / 3.0));
    // gamma = 0 reduces to the zonotope-ball formula
    std::vector<ZonotopeTerm> two{{seg(3, 0), 1}, {seg(3, 1), 1}};
    CHECK(mixed_volume_body_ball_zonotopes(K, 0, 1, two).value == doctest::Approx(1.0 / 3.0));
    // no zonotopes, no balls: V_2 of the unit square
    CHECK(mixed_volume_body_ball_zonotopes(cube01(2), 2, 0, {}).value == doctest::Approx(1.0));

    // a zonotope handed in as a V-polytope matches the exact zonotope path
    Rng rng(14);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 3;
        const Zonotope kz = random_zonotope(n, 4, rng);
        const VPolytope kp = zonotope_to_vpolytope(kz);
        const int gamma = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1));
        // beta in {gamma, gamma+1} keeps the inner term exact (V_beta or V_{beta-1})
        const int balls = static_cast<int>(rng.next_u64() % 2);
        if (gamma + balls >= n) continue;
        std::vector<ZonotopeTerm> terms;
        int left = n - gamma - balls;
        while (left > 0) {
            terms.push_back({random_zonotope(n, 3, rng), 1});
            --left;
        }
        const auto exact = mixed_volume_body_ball_zonotopes(kz, gamma, balls, terms);
        const auto poly = mixed_volume_body_ball_zonotopes(kp, gamma, balls, terms);
        CHECK(poly.exact);
        CHECK(rel_close(poly.value, exact.value, 1e-8, 1e-12));
    }
}

TEST_CASE("Monte Carlo inner terms") {
    // R^4: K cube, gamma=1, two ball copies, one segment: inner V_1 of a 3-dim projection needs MC
    const VPolytope K = cube01(4);
    std::vector<ZonotopeTerm> z{{seg(4, 3), 1}};
    CHECK_THROWS_AS(mixed_volume_body_ball_zonotopes(K, 1, 2, z), NeedsMonteCarlo);
    McConfig mc{4000, 3};
    const auto est = mixed_volume_body_ball_zonotopes(K, 1, 2, z, Evaluator::montecarlo, mc);
    CHECK_FALSE(est.exact);
    const auto exact = mixed_volume_zonotopes_ball(4, std::vector<ZonotopeTerm>{{cube_zonotope(4), 1}, {seg(4, 3), 1}}, 2);
    CHECK(std::abs(est.value - exact) <= 4.0 * est.std_error);
    const auto again = mixed_volume_body_ball_zonotopes(K, 1, 2, z, Evaluator::montecarlo, mc);
    CHECK(again.value == est.value);
}

TEST_CASE("two general bodies with zonotopes") {
    Rng rng(16);
    for (int t = 0; t < 10; ++t) {
        const int n = 3;
        const Zonotope z1 = random_zonotope(n, 3, rng), z2 = random_zonotope(n, 3, rng), z3 = random_zonotope(n, 3, rng);
        std::vector<PolytopeTerm> bodies{{zonotope_to_vpolytope(z1), 1}, {zonotope_to_vpolytope(z2), 1}};
        std::vector<ZonotopeTerm> terms{{z3, 1}};
        std::vector<Zonotope> slots{z1, z2, z3};
        CHECK(rel_close(mixed_volume_bodies_zonotopes(bodies, terms), zonotope_mixed_volume(slots), 1e-7, 1e-12));
    }
}
