#include <doctest.h>

#include <numbers>

#include "test_util.hpp"
#include "zonovol/bodies.hpp"
#include "zonovol/errors.hpp"

using namespace zonovol;
using namespace zonovol::testing;

namespace {

VPolytope rotated_square_45() {
    const double h = std::sqrt(0.5);
    return VPolytope({vec({h, 0}), vec({0, h}), vec({-h, 0}), vec({0, -h})});
}

VPolytope unit_square_centered() { return VPolytope({vec({-0.5, -0.5}), vec({0.5, -0.5}), vec({0.5, 0.5}), vec({-0.5, 0.5})}); }

}  // namespace

TEST_CASE("zonotope to vpolytope examples") {
    Zonotope sq(2, {vec({0.5, 0}), vec({0, 0.5})});
    auto p = zonotope_to_vpolytope(sq);
    CHECK(p.num_vertices() == 4);
    CHECK(volume(p) == doctest::Approx(1.0));
    Zonotope seg(3, {vec({1, 0, 0})});
    auto s = zonotope_to_vpolytope(seg);
    CHECK(s.num_vertices() == 2);
    CHECK(s.dim() == 1);
    Zonotope hex(2, {vec({0.5, 0}), vec({0, 0.5}), vec({0.5, 0.5})});
    CHECK(zonotope_to_vpolytope(hex).num_vertices() == 6);

    std::vector<Vec> many(21, vec({1, 0}));
    for (int i = 0; i < 21; ++i) many[i] = vec({std::cos(i * 0.1), std::sin(i * 0.1)});
    CHECK_THROWS_AS(zonotope_to_vpolytope(Zonotope(2, many)), BudgetExceeded);
}

TEST_CASE("zero generators are dropped") {
    Zonotope z(3, {vec({0, 0, 0}), vec({1, 0, 0})});
    CHECK(z.num_generators() == 1);
    CHECK(z.dim() == 1);
}

TEST_CASE("support function of zonotope matches its vertex form") {
    Rng rng(8);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 3;
        Zonotope z = random_zonotope(n, 6, rng).translated(uniform_vec(n, rng));
        VPolytope p = zonotope_to_vpolytope(z);
        for (int k = 0; k < 100; ++k) {
            Vec u = rng.normal_vector(n).normalized();
            CHECK(std::abs(support_function(p, u) - support_function(z, u)) < 1e-9);
        }
    }
    CHECK(support_function(cube01(2), vec({1, 1})) == doctest::Approx(2.0));
    CHECK(support_function(Zonotope(2, {vec({0.5, 0})}), vec({1, 0})) == doctest::Approx(0.5));
    CHECK(support_function(Zonotope(2, {vec({0.5, 0}), vec({0, 0.5})}), vec({1, 1})) == doctest::Approx(1.0));
}

TEST_CASE("minkowski sum examples") {
    VPolytope a({vec({0, 0}), vec({1, 0})});
    VPolytope b({vec({0, 0}), vec({0, 1})});
    auto sq = minkowski_sum(a, b);
    CHECK(sq.num_vertices() == 4);
    CHECK(volume(sq) == doctest::Approx(1.0));

    VPolytope pt({vec({2, -1})});
    auto moved = minkowski_sum(cube01(2), pt);
    CHECK(volume(moved) == doctest::Approx(1.0));
    CHECK(support_function(moved, vec({1, 0})) == doctest::Approx(3.0));

    auto oct = minkowski_sum(unit_square_centered(), rotated_square_45());
    CHECK(oct.num_vertices() == 8);
    CHECK(hrep(oct).facets.size() == 8);
    // hull of 16 sums: octagon area = 1 + 1 + perimeter-mixed term 2*sqrt(2)
    CHECK(volume(oct) == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)));

    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 3;
        auto p = random_polytope(n, 8, rng);
        auto q = random_polytope(n, 8, rng);
        auto s = minkowski_sum(p, q);
        for (int k = 0; k < 30; ++k) {
            Vec u = rng.normal_vector(n);
            CHECK(std::abs(support_function(s, u) - support_function(p, u) - support_function(q, u)) < 1e-8);
        }
        CHECK(rel_close(volume(minkowski_sum(p, p)), std::pow(2.0, n) * volume(p), 1e-9));
    }
}

TEST_CASE("volume examples") {
    CHECK(volume(cube01(3)) == doctest::Approx(1.0));
    CHECK(volume(VPolytope({vec({0, 0}), vec({1, 1})})) == 0.0);
    VPolytope simplex({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})});
    CHECK(volume(simplex) == doctest::Approx(1.0 / 6.0));
    for (int n = 1; n <= 6; ++n) CHECK(volume(cube01(n)) == doctest::Approx(1.0));
}

TEST_CASE("volume is translation and rotation invariant") {
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 4;
        auto p = random_polytope(n, 12, rng);
        const double v = volume(p);
        CHECK(std::abs(volume(p.translated(uniform_vec(n, rng, -5, 5))) - v) < 1e-9);
        CHECK(std::abs(volume(p.transformed(random_rotation(n, rng))) - v) < 1e-9);
    }
}

TEST_CASE("hrep examples and vertex duality") {
    auto cube = hrep(cube01(3));
    CHECK(cube.facets.size() == 6);
    for (const auto& f : cube.facets) CHECK(f.normal.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(hrep(VPolytope({vec({0, 0}), vec({1, 0}), vec({0, 1})})).facets.size() == 3);
    CHECK_THROWS_AS(hrep(VPolytope({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0})})), DegenerateBody);

    // vertices are recovered as n-fold intersections of tight facets
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 2;
        auto p = random_polytope(n, 10, rng);
        auto h = hrep(p);
        for (const auto& v : p.vertices())
            for (const auto& f : h.facets) CHECK(f.normal.dot(v) <= f.offset + 1e-8);
        for (const auto& v : p.vertices()) {
            std::vector<int> tight;
            for (std::size_t i = 0; i < h.facets.size(); ++i)
                if (std::abs(h.facets[i].normal.dot(v) - h.facets[i].offset) < 1e-8) tight.push_back(static_cast<int>(i));
            REQUIRE(static_cast<int>(tight.size()) >= n);
            Mat A(static_cast<Eigen::Index>(tight.size()), n);
            Vec b(static_cast<Eigen::Index>(tight.size()));
            for (std::size_t i = 0; i < tight.size(); ++i) {
                A.row(static_cast<Eigen::Index>(i)) = h.facets[tight[i]].normal.transpose();
                b[static_cast<Eigen::Index>(i)] = h.facets[tight[i]].offset;
            }
            Vec x = A.colPivHouseholderQr().solve(b);
            CHECK((x - v).norm() < 1e-7);
        }
    }
}

TEST_CASE("non-extreme points are removed") {
    VPolytope p({vec({0, 0}), vec({1, 0}), vec({0.5, 0}), vec({1, 1}), vec({0, 1}), vec({0.5, 0.5}), vec({0, 0})});
    CHECK(p.num_vertices() == 4);
    auto cube = cube01(3);
    std::vector<Vec> pts = cube.vertices();
    pts.push_back(vec({0.5, 0.5, 1}));  // face centre
    pts.push_back(vec({0.5, 0, 0}));    // edge midpoint
    CHECK(VPolytope(pts).num_vertices() == 8);
}

TEST_CASE("lower dimensional bodies") {
    VPolytope tri3({vec({0, 0, 1}), vec({1, 0, 1}), vec({0, 1, 1})});
    CHECK(tri3.dim() == 2);
    CHECK(flat_volume(tri3, 2) == doctest::Approx(0.5));
    CHECK(linear_hull(tri3).dim() == 2);
    CHECK(volume(tri3) == 0.0);
}
