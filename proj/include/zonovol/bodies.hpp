#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "zonovol/hull.hpp"
#include "zonovol/linalg.hpp"

namespace zonovol {

// Z = offset + sum_i [-w_i, w_i]. Zero generators are dropped.
class Zonotope {
public:
    Zonotope(int ambient_dim, const std::vector<Vec>& generators);
    Zonotope(int ambient_dim, const std::vector<Vec>& generators, Vec offset);
    Zonotope(Mat generators, Vec offset);

    int ambient_dim() const noexcept { return static_cast<int>(offset_.size()); }
    int num_generators() const noexcept { return static_cast<int>(gens_.cols()); }
    const Mat& generators() const noexcept { return gens_; }
    Vec generator(int i) const { return gens_.col(i); }
    const Vec& offset() const noexcept { return offset_; }
    int dim() const;  // rank of the generator matrix

    Zonotope translated(const Vec& t) const;
    Zonotope scaled(double lambda) const;            // about the origin
    Zonotope transformed(const Mat& linear) const;   // x -> linear * x

    friend bool operator==(const Zonotope& a, const Zonotope& b);

private:
    Mat gens_;
    Vec offset_;
};

// Convex hull of a finite point set, stored by its extreme points.
class VPolytope {
public:
    explicit VPolytope(const std::vector<Vec>& points);

    int ambient_dim() const noexcept { return ambient_; }
    int dim() const noexcept { return hull_->frame.dim(); }
    const std::vector<Vec>& vertices() const noexcept { return vertices_; }
    int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    // Hull whose facet vertex indices refer to vertices().
    const Hull& hull() const noexcept { return *hull_; }
    Vec centroid() const;  // vertex average (lies in the relative interior)

    VPolytope translated(const Vec& t) const;
    VPolytope scaled(double lambda) const;
    VPolytope transformed(const Mat& linear) const;

private:
    int ambient_;
    std::vector<Vec> vertices_;
    std::shared_ptr<const Hull> hull_;
};

// The Euclidean unit ball, kept symbolic.
struct Ball {
    int ambient_dim;
};

using Body = std::variant<Zonotope, VPolytope, Ball>;

struct HalfSpace {
    Vec normal;  // unit
    double offset;
};

// { x : <a_i, x> <= b_i } for a full-dimensional polytope.
struct HRep {
    std::vector<HalfSpace> facets;
    Mat A() const;
    Vec b() const;
};

inline constexpr int kMaxZonotopeGenerators = 20;

VPolytope zonotope_to_vpolytope(const Zonotope& z);
VPolytope minkowski_sum(const VPolytope& p, const VPolytope& q);
double volume(const VPolytope& p);  // n-volume, 0 when lower-dimensional
HRep hrep(const VPolytope& p);

double support_function(const Zonotope& z, const Vec& u);
double support_function(const VPolytope& p, const Vec& u);
double support_function(const Body& body, const Vec& u);

int ambient_dim(const Body& body);
int body_dim(const Body& body);
// Linear subspace parallel to the affine hull.
Subspace linear_hull(const Zonotope& z);
Subspace linear_hull(const VPolytope& p);
Subspace linear_hull(const Body& body);

// Orthogonal projection onto L expressed in an orthonormal basis of L (a body in R^dim L).
VPolytope project_to_coordinates(const VPolytope& p, const Subspace& L);
Zonotope project_to_coordinates(const Zonotope& z, const Subspace& L);
// Orthogonal projection kept in ambient coordinates (K|L).
Zonotope project(const Zonotope& z, const Subspace& L);
VPolytope project(const VPolytope& p, const Subspace& L);

// Lebesgue measure of the body inside its own affine hull when its dimension equals k,
// 0 when the dimension is below k. Throws ContractViolation when dim > k.
double flat_volume(const VPolytope& p, int k);

}  // namespace zonovol
