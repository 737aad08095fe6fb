#pragma once

#include "zonovol/bodies.hpp"

namespace zonovol {

struct InscribedBall {
    Vec center;
    double radius;
    int iterations;
};

// max r subject to <a_i, x> + r <= b_i (unit normals), by a log-barrier path-following method
// started from the strictly interior point `start`.
InscribedBall chebyshev_ball(const HRep& h, const Vec& start);

struct EllipsoidFit {
    Vec center;
    Mat shape;  // symmetric positive definite B, E = center + B * unit ball
    int iterations;
    double gap;  // bound on log det suboptimality at termination
};

inline constexpr int kMaxEllipsoidIterations = 2000;

// Maximum-volume ellipsoid inscribed in { x : Ax <= b }: maximize log det B subject to
// |B a_i| + <a_i, d> <= b_i. SolverError when the Newton budget runs out.
EllipsoidFit max_volume_inscribed_ellipsoid(const HRep& h, const Vec& start_center, double start_radius);

}  // namespace zonovol
