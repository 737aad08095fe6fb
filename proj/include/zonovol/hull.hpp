#pragma once

#include <vector>

#include "zonovol/linalg.hpp"

namespace zonovol {

// Orthonormal frame of the affine hull of a point set.
struct AffineFrame {
    Vec origin;
    Mat basis;  // n x dim, orthonormal
    int dim() const noexcept { return static_cast<int>(basis.cols()); }
    Vec to_local(const Vec& x) const { return basis.transpose() * (x - origin); }
    Vec to_ambient(const Vec& y) const { return origin + basis * y; }
};

// A merged (maximal) facet in local frame coordinates: { y : <normal, y> <= offset }.
struct HullFacet {
    Vec normal;
    double offset = 0.0;
    double area = 0.0;          // (dim-1)-volume
    std::vector<int> vertices;  // indices into the input point list, sorted
};

// Convex hull computed in the affine hull of the input (quickhull in dim >= 2).
struct Hull {
    AffineFrame frame;
    std::vector<int> vertices;  // indices of extreme input points, sorted ascending
    std::vector<HullFacet> facets;
    double volume = 0.0;        // dim-volume inside the affine hull (0 for dim 0)
    double boundary = 0.0;      // (dim-1)-volume of the relative boundary
    double scale = 1.0;         // coordinate magnitude used for tolerances
};

// Tolerance is relative: tol * max(1, coordinate scale).
Hull convex_hull(const std::vector<Vec>& points, double tol = 1e-9);

// Affine frame with rank decided by kRankTolerance.
AffineFrame affine_frame(const std::vector<Vec>& points);

}  // namespace zonovol
