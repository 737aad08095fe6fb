#include <doctest.h>

#include "test_util.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/linalg.hpp"

using namespace zonovol;
using namespace zonovol::testing;

TEST_CASE("parallelepiped volume examples") {
    std::vector<Vec> a{vec({3, 4})};
    CHECK(parallelepiped_volume(a) == doctest::Approx(5.0));
    std::vector<Vec> b{vec({1, 0, 0}), vec({1, 1, 0})};
    CHECK(parallelepiped_volume(b) == doctest::Approx(1.0));
    for (int n = 1; n <= 6; ++n) CHECK(parallelepiped_volume(Mat(Mat::Identity(n, n))) == doctest::Approx(1.0));
    std::vector<Vec> dep{vec({1, 2, 3}), vec({2, 4, 6})};
    CHECK(parallelepiped_volume(dep) == 0.0);
    std::vector<Vec> too_many{vec({1, 0}), vec({0, 1}), vec({1, 1})};
    CHECK_THROWS_AS(parallelepiped_volume(too_many), ContractViolation);
    std::vector<Vec> mismatch{vec({1, 0}), vec({0, 1, 0})};
    CHECK_THROWS_AS(parallelepiped_volume(mismatch), ContractViolation);
}

TEST_CASE("parallelepiped volume is permutation and rotation invariant") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const int k = 1 + trial % n;
        Mat m(n, k);
        for (int c = 0; c < k; ++c) m.col(c) = uniform_vec(n, rng);
        const double v = parallelepiped_volume(m);
        Mat rev = m.rowwise().reverse();  // rows reversed: orthogonal map (permutation)
        CHECK(rel_close(parallelepiped_volume(rev), v, 1e-12));
        Mat cols = m.rowwise().reverse().rowwise().reverse();
        cols = m.colwise().reverse();
        CHECK(rel_close(parallelepiped_volume(cols), v, 1e-12));
        Mat q = random_rotation(n, rng);
        CHECK(rel_close(parallelepiped_volume(Mat(q * m)), v, 1e-12));
    }
}

TEST_CASE("orthonormalize examples") {
    std::vector<Vec> a{vec({2, 0})};
    auto s = orthonormalize(a, 2);
    CHECK(s.dim() == 1);
    CHECK(std::abs(s.basis()(0, 0)) == doctest::Approx(1.0));
    std::vector<Vec> b{vec({1, 0, 0}), vec({2, 0, 0})};
    CHECK(orthonormalize(b, 3).dim() == 1);
    std::vector<Vec> c{vec({1, 1, 0}), vec({1, -1, 0})};
    auto sc = orthonormalize(c, 3);
    CHECK(sc.dim() == 2);
    CHECK(sc.contains(unit(3, 0)));
    CHECK(sc.contains(unit(3, 1)));
    CHECK(orthonormalize(std::vector<Vec>{}, 4).dim() == 0);
}

TEST_CASE("bracket examples and bounds") {
    Subspace e1 = orthonormalize(std::vector<Vec>{unit(2, 0)}, 2);
    Subspace e2 = orthonormalize(std::vector<Vec>{unit(2, 1)}, 2);
    Subspace l30 = orthonormalize(std::vector<Vec>{vec({std::cos(deg(30)), std::sin(deg(30))})}, 2);
    CHECK(bracket(std::vector<Subspace>{e1, e2}, 2) == doctest::Approx(1.0));
    CHECK(bracket(std::vector<Subspace>{e1, l30}, 2) == doctest::Approx(0.5));
    Subspace f1 = orthonormalize(std::vector<Vec>{unit(3, 0)}, 3);
    Subspace f2 = orthonormalize(std::vector<Vec>{unit(3, 1)}, 3);
    CHECK(bracket(std::vector<Subspace>{f1, f2}, 2) == doctest::Approx(1.0));
    CHECK(bracket(std::vector<Subspace>{f1, f1}, 2) == 0.0);
    CHECK_THROWS_AS(bracket(std::vector<Subspace>{Subspace::full(2), e1}, 3), ContractViolation);
    CHECK_THROWS_AS(bracket(std::vector<Subspace>{e1, e2}, 1), ContractViolation);

    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 5;
        std::vector<Subspace> subs;
        int left = n;
        while (left > 0) {
            int d = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(left));
            subs.push_back(sample_grassmannian(n, d, rng));
            left -= d;
        }
        const double b = bracket(subs, n);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
    }
}

// D_{n-beta}(u) = [U_1..U_m] * prod D_{alpha_i}(block i)
TEST_CASE("bracket factorises parallelepiped volume over blocks") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + t % 5;
        const int total = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
        std::vector<Mat> blocks;
        std::vector<Subspace> spans;
        int left = total;
        while (left > 0) {
            int d = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(left));
            Mat blk(n, d);
            for (int c = 0; c < d; ++c) blk.col(c) = uniform_vec(n, rng);
            spans.push_back(orthonormalize(blk));
            blocks.push_back(blk);
            left -= d;
        }
        Mat all(n, total);
        int col = 0;
        double prod = 1.0;
        for (const auto& b : blocks) {
            all.middleCols(col, b.cols()) = b;
            col += static_cast<int>(b.cols());
            prod *= parallelepiped_volume(b);
        }
        CHECK(rel_close(parallelepiped_volume(all), bracket(spans, total) * prod, 1e-8));
    }
}

TEST_CASE("projection examples and properties") {
    Subspace xy = orthonormalize(std::vector<Vec>{unit(3, 0), unit(3, 1)}, 3);
    Vec p = project(vec({1, 2, 3}), xy);
    CHECK((p - vec({1, 2, 0})).norm() < 1e-12);
    Vec x = vec({0.3, -2, 5});
    CHECK((project(x, Subspace::full(3)) - x).norm() < 1e-12);
    Subspace line = orthonormalize(std::vector<Vec>{vec({1, 0})}, 2);
    CHECK((project(vec({1, 1}), line) - vec({1, 0})).norm() < 1e-12);

    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 6;
        const int i = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n + 1));
        Subspace L = sample_grassmannian(n, i, rng);
        Vec y = uniform_vec(n, rng);
        Vec once = project(y, L);
        CHECK((project(once, L) - once).norm() < 1e-12);
        CHECK(once.norm() <= y.norm() + 1e-12);
    }
    CHECK_THROWS_AS(project(vec({1, 2}), xy), ContractViolation);
}

TEST_CASE("grassmannian sampling") {
    Rng rng(0);
    CHECK(sample_grassmannian(4, 0, rng).dim() == 0);
    CHECK(sample_grassmannian(4, 4, rng).dim() == 4);
    // E[u_1^2] = 1/3 for a Haar line in R^3
    const int samples = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
        Subspace L = sample_grassmannian(3, 1, rng);
        const double x = L.basis()(0, 0) * L.basis()(0, 0);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / samples;
    const double sd = std::sqrt(sum2 / samples - mean * mean);
    CHECK(std::abs(mean - 1.0 / 3.0) < 3.0 * sd / std::sqrt(static_cast<double>(samples)));

    Rng a(42), b(42);
    CHECK((sample_grassmannian(5, 2, a).basis() - sample_grassmannian(5, 2, b).basis()).norm() == 0.0);
}

TEST_CASE("principal angle distance") {
    Subspace e1 = orthonormalize(std::vector<Vec>{unit(2, 0)}, 2);
    Subspace l = orthonormalize(std::vector<Vec>{vec({std::cos(1e-6), std::sin(1e-6)})}, 2);
    CHECK(principal_angle_distance(e1, l) == doctest::Approx(std::sin(1e-6)).epsilon(1e-6));
    CHECK(principal_angle_distance(e1, Subspace::full(2)) == 1.0);
}
