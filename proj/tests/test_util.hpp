#pragma once

#include <cmath>
#include <vector>

#include "zonovol/bodies.hpp"
#include "zonovol/random.hpp"

namespace zonovol::testing {

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

inline Vec unit(int n, int i) { return Vec::Unit(n, i); }

inline double deg(double d) { return d * M_PI / 180.0; }

inline Mat random_rotation(int n, Rng& rng) {
    Mat g(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    return q;
}

inline Vec uniform_vec(int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * rng.uniform();
    return v;
}

inline Zonotope random_zonotope(int n, int max_gens, Rng& rng) {
    const int count = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_gens));
    std::vector<Vec> gens;
    for (int i = 0; i < count; ++i) gens.push_back(uniform_vec(n, rng));
    return Zonotope(n, gens);
}

inline VPolytope random_polytope(int n, int points, Rng& rng) {
    std::vector<Vec> pts;
    for (int i = 0; i < points; ++i) pts.push_back(uniform_vec(n, rng));
    return VPolytope(pts);
}

inline VPolytope cube01(int n) {
    std::vector<Vec> pts;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
        pts.push_back(v);
    }
    return VPolytope(pts);
}

inline VPolytope box(const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    std::vector<Vec> pts;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = ((mask >> i) & 1) ? hi[i] : lo[i];
        pts.push_back(v);
    }
    return VPolytope(pts);
}

inline Zonotope segment(const Vec& direction_full_length) { return Zonotope(static_cast<int>(direction_full_length.size()), {Vec(direction_full_length / 2.0)}); }

inline Zonotope cube_zonotope(int n) {
    std::vector<Vec> gens;
    for (int i = 0; i < n; ++i) gens.push_back(0.5 * Vec::Unit(n, i));
    return Zonotope(n, gens);
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 1e-14) {
    return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace zonovol::testing
