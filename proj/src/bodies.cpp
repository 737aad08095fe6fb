#include "zonovol/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zonovol/errors.hpp"

namespace zonovol {
namespace {

Mat drop_zero_columns(const Mat& g) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        if (g.col(c).norm() > 1e-14) keep.push_back(c);
    Mat out(g.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = g.col(keep[i]);
    return out;
}

std::vector<Vec> hull_points(const std::vector<Vec>& pts) {
    Hull h = convex_hull(pts);
    std::vector<Vec> out;
    out.reserve(h.vertices.size());
    for (int i : h.vertices) out.push_back(pts[i]);
    return out;
}

}  // namespace

Zonotope::Zonotope(int ambient_dim, const std::vector<Vec>& generators)
    : Zonotope(ambient_dim, generators, Vec::Zero(ambient_dim)) {}

Zonotope::Zonotope(int ambient_dim, const std::vector<Vec>& generators, Vec offset) : offset_(std::move(offset)) {
    if (ambient_dim < 1) throw ContractViolation("Zonotope: ambient dimension must be >= 1");
    if (offset_.size() != ambient_dim) throw ContractViolation("Zonotope: offset dimension mismatch");
    Mat g(ambient_dim, static_cast<Eigen::Index>(generators.size()));
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].size() != ambient_dim) throw ContractViolation("Zonotope: generator dimension mismatch");
        g.col(static_cast<Eigen::Index>(i)) = generators[i];
    }
    gens_ = drop_zero_columns(g);
}

Zonotope::Zonotope(Mat generators, Vec offset) : offset_(std::move(offset)) {
    if (generators.rows() != offset_.size() || offset_.size() < 1) throw ContractViolation("Zonotope: dimension mismatch");
    gens_ = drop_zero_columns(generators);
}

int Zonotope::dim() const { return orthonormalize(gens_).dim(); }

Zonotope Zonotope::translated(const Vec& t) const { return Zonotope(gens_, offset_ + t); }
Zonotope Zonotope::scaled(double lambda) const { return Zonotope(Mat(lambda * gens_), Vec(lambda * offset_)); }
Zonotope Zonotope::transformed(const Mat& linear) const { return Zonotope(Mat(linear * gens_), Vec(linear * offset_)); }

bool operator==(const Zonotope& a, const Zonotope& b) {
    return a.gens_.rows() == b.gens_.rows() && a.gens_.cols() == b.gens_.cols() && a.gens_ == b.gens_ && a.offset_ == b.offset_;
}

VPolytope::VPolytope(const std::vector<Vec>& points) {
    if (points.empty()) throw ContractViolation("VPolytope: empty vertex list");
    ambient_ = static_cast<int>(points.front().size());
    Hull h = convex_hull(points);
    std::vector<int> remap(points.size(), -1);
    for (std::size_t k = 0; k < h.vertices.size(); ++k) {
        remap[h.vertices[k]] = static_cast<int>(k);
        vertices_.push_back(points[h.vertices[k]]);
    }
    for (auto& f : h.facets)
        for (auto& v : f.vertices) v = remap[v];
    for (std::size_t k = 0; k < h.vertices.size(); ++k) h.vertices[k] = static_cast<int>(k);
    hull_ = std::make_shared<const Hull>(std::move(h));
}

Vec VPolytope::centroid() const {
    Vec c = Vec::Zero(ambient_);
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
}

VPolytope VPolytope::translated(const Vec& t) const {
    std::vector<Vec> pts;
    for (const auto& v : vertices_) pts.push_back(v + t);
    return VPolytope(pts);
}

VPolytope VPolytope::scaled(double lambda) const {
    std::vector<Vec> pts;
    for (const auto& v : vertices_) pts.push_back(lambda * v);
    return VPolytope(pts);
}

VPolytope VPolytope::transformed(const Mat& linear) const {
    std::vector<Vec> pts;
    for (const auto& v : vertices_) pts.push_back(linear * v);
    return VPolytope(pts);
}

Mat HRep::A() const {
    if (facets.empty()) return Mat(0, 0);
    Mat a(static_cast<Eigen::Index>(facets.size()), facets.front().normal.size());
    for (std::size_t i = 0; i < facets.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = facets[i].normal.transpose();
    return a;
}

Vec HRep::b() const {
    Vec b(static_cast<Eigen::Index>(facets.size()));
    for (std::size_t i = 0; i < facets.size(); ++i) b[static_cast<Eigen::Index>(i)] = facets[i].offset;
    return b;
}

// Sign-pattern vertices sum_i eps_i w_i, generated one segment at a time so the
// intermediate point sets stay at hull size instead of 2^N.
VPolytope zonotope_to_vpolytope(const Zonotope& z) {
    if (z.num_generators() > kMaxZonotopeGenerators)
        throw BudgetExceeded("too many generators: " + std::to_string(z.num_generators()) + " > " + std::to_string(kMaxZonotopeGenerators));
    std::vector<Vec> pts{z.offset()};
    for (int i = 0; i < z.num_generators(); ++i) {
        const Vec w = z.generator(i);
        std::vector<Vec> next;
        next.reserve(2 * pts.size());
        for (const auto& p : pts) {
            next.push_back(p + w);
            next.push_back(p - w);
        }
        pts = hull_points(next);
    }
    return VPolytope(pts);
}

VPolytope minkowski_sum(const VPolytope& p, const VPolytope& q) {
    if (p.ambient_dim() != q.ambient_dim()) throw ContractViolation("minkowski_sum: dimension mismatch");
    std::vector<Vec> sums;
    sums.reserve(p.vertices().size() * q.vertices().size());
    for (const auto& a : p.vertices())
        for (const auto& b : q.vertices()) sums.push_back(a + b);
    return VPolytope(sums);
}

double volume(const VPolytope& p) { return p.dim() < p.ambient_dim() ? 0.0 : p.hull().volume; }

HRep hrep(const VPolytope& p) {
    if (p.dim() < p.ambient_dim())
        throw DegenerateBody("degenerate body: dimension " + std::to_string(p.dim()) + " < " + std::to_string(p.ambient_dim()));
    const auto& h = p.hull();
    HRep out;
    for (const auto& f : h.facets) {
        Vec a = h.frame.basis * f.normal;
        a.normalize();
        // offset from a supporting vertex, in ambient coordinates
        double b = -std::numeric_limits<double>::infinity();
        for (int v : f.vertices) b = std::max(b, a.dot(p.vertices()[v]));
        out.facets.push_back(HalfSpace{a, b});
    }
    return out;
}

double support_function(const Zonotope& z, const Vec& u) {
    if (u.size() != z.ambient_dim()) throw ContractViolation("support_function: dimension mismatch");
    return z.offset().dot(u) + (z.generators().transpose() * u).cwiseAbs().sum();
}

double support_function(const VPolytope& p, const Vec& u) {
    if (u.size() != p.ambient_dim()) throw ContractViolation("support_function: dimension mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertices()) best = std::max(best, v.dot(u));
    return best;
}

double support_function(const Body& body, const Vec& u) {
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>) {
                if (u.size() != b.ambient_dim) throw ContractViolation("support_function: dimension mismatch");
                return u.norm();
            } else {
                return support_function(b, u);
            }
        },
        body);
}

int ambient_dim(const Body& body) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>)
                return b.ambient_dim;
            else
                return b.ambient_dim();
        },
        body);
}

int body_dim(const Body& body) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>)
                return b.ambient_dim;
            else
                return b.dim();
        },
        body);
}

Subspace linear_hull(const Zonotope& z) { return orthonormalize(z.generators()); }

Subspace linear_hull(const VPolytope& p) {
    const auto& basis = p.hull().frame.basis;
    if (basis.cols() == 0) return Subspace(p.ambient_dim());
    return orthonormalize(basis);
}

Subspace linear_hull(const Body& body) {
    return std::visit(
        [](const auto& b) -> Subspace {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Ball>)
                return Subspace::full(b.ambient_dim);
            else
                return linear_hull(b);
        },
        body);
}

VPolytope project_to_coordinates(const VPolytope& p, const Subspace& L) {
    if (L.ambient_dim() != p.ambient_dim()) throw ContractViolation("project_to_coordinates: dimension mismatch");
    if (L.dim() == 0) throw ContractViolation("project_to_coordinates: target subspace is trivial");
    std::vector<Vec> pts;
    pts.reserve(p.vertices().size());
    for (const auto& v : p.vertices()) pts.push_back(L.coordinates(v));
    return VPolytope(pts);
}

Zonotope project_to_coordinates(const Zonotope& z, const Subspace& L) {
    if (L.ambient_dim() != z.ambient_dim()) throw ContractViolation("project_to_coordinates: dimension mismatch");
    if (L.dim() == 0) throw ContractViolation("project_to_coordinates: target subspace is trivial");
    return Zonotope(Mat(L.basis().transpose() * z.generators()), L.coordinates(z.offset()));
}

Zonotope project(const Zonotope& z, const Subspace& L) {
    const Mat P = L.projector();
    return Zonotope(Mat(P * z.generators()), Vec(P * z.offset()));
}

VPolytope project(const VPolytope& p, const Subspace& L) {
    std::vector<Vec> pts;
    for (const auto& v : p.vertices()) pts.push_back(L.project(v));
    return VPolytope(pts);
}

double flat_volume(const VPolytope& p, int k) {
    if (p.dim() > k) throw ContractViolation("flat_volume: body has dimension above " + std::to_string(k));
    if (p.dim() < k) return 0.0;
    return p.hull().volume;
}

}  // namespace zonovol
