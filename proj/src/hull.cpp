#include "zonovol/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "zonovol/errors.hpp"

namespace zonovol {
namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Greedy farthest-point simplex. Returns the chosen indices and an orthonormal basis of
// their differences; stops when every point is within eps of the current affine hull.
struct GreedySimplex {
    std::vector<int> indices;
    Mat basis;
    Vec origin;
};

GreedySimplex greedy_simplex(const std::vector<Vec>& pts, double eps) {
    const int n = static_cast<int>(pts.front().size());
    const int count = static_cast<int>(pts.size());
    GreedySimplex gs;
    int first = 0;
    for (int i = 1; i < count; ++i)
        if (pts[i][0] < pts[first][0]) first = i;
    gs.indices.push_back(first);
    gs.origin = pts[first];

    std::vector<Vec> residual(count);
    for (int i = 0; i < count; ++i) residual[i] = pts[i] - gs.origin;
    std::vector<Vec> dirs;
    while (static_cast<int>(dirs.size()) < n) {
        int best = -1;
        double best_d = eps;
        for (int i = 0; i < count; ++i) {
            const double d = residual[i].norm();
            if (d > best_d) {
                best_d = d;
                best = i;
            }
        }
        if (best < 0) break;
        Vec u = residual[best] / best_d;
        // re-orthogonalize against earlier directions for stability
        for (const auto& q : dirs) u -= q.dot(u) * q;
        u.normalize();
        dirs.push_back(u);
        gs.indices.push_back(best);
        for (int i = 0; i < count; ++i) residual[i] -= u.dot(residual[i]) * u;
    }
    gs.basis = Mat(n, static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t k = 0; k < dirs.size(); ++k) gs.basis.col(static_cast<Eigen::Index>(k)) = dirs[k];
    return gs;
}

double coordinate_scale(const std::vector<Vec>& pts) {
    double s = 0.0;
    for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
    return s;
}

struct QFacet {
    std::vector<int> v;
    std::vector<int> nb;
    Vec normal;
    double offset = 0.0;
    std::vector<int> outside;
    bool alive = true;
    int visit = -1;
};

class Quickhull {
public:
    Quickhull(const std::vector<Vec>& y, double eps) : y_(y), d_(static_cast<int>(y.front().size())), eps_(eps) {}

    void run(const std::vector<int>& simplex) {
        interior_ = Vec::Zero(d_);
        for (int i : simplex) interior_ += y_[i];
        interior_ /= static_cast<double>(simplex.size());

        // initial d+1 facets, facet k omits simplex vertex k
        for (int k = 0; k <= d_; ++k) {
            QFacet f;
            for (int j = 0; j <= d_; ++j)
                if (j != k) f.v.push_back(simplex[j]);
            f.nb.assign(d_, -1);
            set_plane(f);
            facets_.push_back(std::move(f));
        }
        for (int k = 0; k <= d_; ++k) {
            auto& f = facets_[k];
            for (int s = 0; s < d_; ++s) {
                // the simplex vertex missing from slot s, other than k
                const int missing = f.v[s];
                int idx = static_cast<int>(std::find(simplex.begin(), simplex.end(), missing) - simplex.begin());
                f.nb[s] = idx;
            }
        }

        std::vector<char> in_simplex(y_.size(), 0);
        for (int i : simplex) in_simplex[i] = 1;
        for (int i = 0; i < static_cast<int>(y_.size()); ++i) {
            if (in_simplex[i]) continue;
            for (int k = 0; k <= d_; ++k) {
                if (distance(facets_[k], i) > eps_) {
                    facets_[k].outside.push_back(i);
                    break;
                }
            }
        }

        std::vector<int> work;
        for (int k = 0; k <= d_; ++k)
            if (!facets_[k].outside.empty()) work.push_back(k);
        int round = 0;
        while (!work.empty()) {
            const int fid = work.back();
            work.pop_back();
            if (!facets_[fid].alive || facets_[fid].outside.empty()) continue;
            add_point(fid, round++, work);
        }
    }

    std::vector<const QFacet*> alive() const {
        std::vector<const QFacet*> out;
        for (const auto& f : facets_)
            if (f.alive) out.push_back(&f);
        return out;
    }
    const Vec& interior() const { return interior_; }

private:
    double distance(const QFacet& f, int p) const { return f.normal.dot(y_[p]) - f.offset; }

    void set_plane(QFacet& f) {
        Mat m(d_, d_ - 1);
        for (int k = 1; k < d_; ++k) m.col(k - 1) = y_[f.v[k]] - y_[f.v[0]];
        Eigen::HouseholderQR<Mat> qr(m);
        Mat q = qr.householderQ() * Mat::Identity(d_, d_);
        f.normal = q.col(d_ - 1);
        f.offset = f.normal.dot(y_[f.v[0]]);
        if (f.normal.dot(interior_) - f.offset > 0.0) {
            f.normal = -f.normal;
            f.offset = -f.offset;
        }
    }

    void add_point(int fid, int round, std::vector<int>& work) {
        auto& start = facets_[fid];
        int apex = start.outside.front();
        double best = distance(start, apex);
        for (int p : start.outside) {
            const double dd = distance(start, p);
            if (dd > best) {
                best = dd;
                apex = p;
            }
        }

        std::vector<int> visible{fid};
        facets_[fid].visit = round;
        std::vector<std::pair<int, int>> horizon;  // (visible facet, slot)
        for (std::size_t q = 0; q < visible.size(); ++q) {
            const int cur = visible[q];
            for (int s = 0; s < d_; ++s) {
                const int g = facets_[cur].nb[s];
                if (facets_[g].visit == round) {
                    if (!facets_[g].alive) continue;  // visible already
                    continue;
                }
                if (distance(facets_[g], apex) > eps_) {
                    facets_[g].visit = round;
                    visible.push_back(g);
                } else {
                    horizon.emplace_back(cur, s);
                }
            }
        }
        // a facet reached twice through different neighbours may have been pushed as
        // horizon before being found visible; drop those ridges.
        std::vector<char> is_visible_mark(facets_.size(), 0);
        for (int v : visible) is_visible_mark[v] = 1;
        horizon.erase(std::remove_if(horizon.begin(), horizon.end(),
                                     [&](const auto& h) { return is_visible_mark[facets_[h.first].nb[h.second]] != 0; }),
                      horizon.end());

        std::vector<int> orphans;
        for (int v : visible) {
            for (int p : facets_[v].outside)
                if (p != apex) orphans.push_back(p);
            facets_[v].outside.clear();
            facets_[v].alive = false;
        }

        std::map<std::vector<int>, std::pair<int, int>> open_faces;
        std::vector<int> created;
        created.reserve(horizon.size());
        for (const auto& [vis, slot] : horizon) {
            QFacet nf;
            nf.v = facets_[vis].v;
            nf.v[slot] = apex;
            nf.nb.assign(d_, -1);
            const int g = facets_[vis].nb[slot];
            nf.nb[slot] = g;
            set_plane(nf);
            const int nid = static_cast<int>(facets_.size());
            for (int s = 0; s < d_; ++s)
                if (facets_[g].nb[s] == vis) facets_[g].nb[s] = nid;
            for (int s = 0; s < d_; ++s) {
                if (s == slot) continue;
                std::vector<int> key;
                key.reserve(d_ - 1);
                for (int t = 0; t < d_; ++t)
                    if (t != s) key.push_back(nf.v[t]);
                std::sort(key.begin(), key.end());
                auto it = open_faces.find(key);
                if (it == open_faces.end()) {
                    open_faces.emplace(std::move(key), std::make_pair(nid, s));
                } else {
                    nf.nb[s] = it->second.first;
                    facets_[it->second.first].nb[it->second.second] = nid;
                    open_faces.erase(it);
                }
            }
            facets_.push_back(std::move(nf));
            created.push_back(nid);
        }
        if (!open_faces.empty()) throw NumericalInconsistency("convex_hull: horizon is not a closed ridge cycle");

        for (int p : orphans) {
            for (int nid : created) {
                if (distance(facets_[nid], p) > eps_) {
                    facets_[nid].outside.push_back(p);
                    break;
                }
            }
        }
        for (int nid : created)
            if (!facets_[nid].outside.empty()) work.push_back(nid);
    }

    const std::vector<Vec>& y_;
    int d_;
    double eps_;
    Vec interior_;
    std::vector<QFacet> facets_;
};

}  // namespace

AffineFrame affine_frame(const std::vector<Vec>& points) {
    if (points.empty()) throw ContractViolation("affine_frame: empty point set");
    const double eps = 1e-9 * std::max(1.0, coordinate_scale(points));
    auto gs = greedy_simplex(points, eps);
    return AffineFrame{gs.origin, gs.basis};
}

Hull convex_hull(const std::vector<Vec>& points, double tol) {
    if (points.empty()) throw ContractViolation("convex_hull: empty point set");
    const int n = static_cast<int>(points.front().size());
    for (const auto& p : points)
        if (p.size() != n) throw ContractViolation("convex_hull: dimension mismatch");

    Hull hull;
    hull.scale = std::max(1.0, coordinate_scale(points));
    const double eps = tol * hull.scale;
    auto gs = greedy_simplex(points, eps);
    const int d = static_cast<int>(gs.basis.cols());
    hull.frame = AffineFrame{gs.origin, gs.basis};

    if (d == 0) {
        hull.vertices = {gs.indices.front()};
        hull.volume = 1.0;  // counting measure of a point
        return hull;
    }

    std::vector<Vec> y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) y[i] = hull.frame.to_local(points[i]);

    if (d == 1) {
        int lo = 0, hi = 0;
        for (int i = 1; i < static_cast<int>(y.size()); ++i) {
            if (y[i][0] < y[lo][0]) lo = i;
            if (y[i][0] > y[hi][0]) hi = i;
        }
        hull.vertices = {std::min(lo, hi), std::max(lo, hi)};
        hull.volume = y[hi][0] - y[lo][0];
        hull.boundary = 2.0;
        hull.facets.push_back(HullFacet{Vec::Constant(1, -1.0), -y[lo][0], 1.0, {lo}});
        hull.facets.push_back(HullFacet{Vec::Constant(1, 1.0), y[hi][0], 1.0, {hi}});
        return hull;
    }

    Quickhull qh(y, eps);
    qh.run(gs.indices);
    auto simplices = qh.alive();
    const Vec& c = qh.interior();

    // volume and facet areas
    std::vector<double> areas(simplices.size());
    double vol = 0.0;
    const double dfact = factorial(d);
    const double d1fact = factorial(d - 1);
    Mat cone(d, d);
    for (std::size_t k = 0; k < simplices.size(); ++k) {
        const auto& f = *simplices[k];
        for (int j = 0; j < d; ++j) cone.col(j) = y[f.v[j]] - c;
        vol += std::abs(cone.determinant()) / dfact;
        Mat edges(d, d - 1);
        for (int j = 1; j < d; ++j) edges.col(j - 1) = y[f.v[j]] - y[f.v[0]];
        areas[k] = parallelepiped_volume(edges) / d1fact;
    }
    hull.volume = vol;

    // merge coplanar simplices into maximal facets, largest first
    std::vector<std::size_t> order(simplices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return areas[a] > areas[b]; });
    std::vector<std::vector<int>> group_members;
    for (std::size_t k : order) {
        const auto& f = *simplices[k];
        bool placed = false;
        for (std::size_t g = 0; g < hull.facets.size() && !placed; ++g) {
            auto& G = hull.facets[g];
            if (G.normal.dot(f.normal) <= 0.0) continue;
            bool coplanar = true;
            for (int vi : f.v)
                if (std::abs(G.normal.dot(y[vi]) - G.offset) > eps) {
                    coplanar = false;
                    break;
                }
            if (!coplanar) continue;
            G.area += areas[k];
            group_members[g].insert(group_members[g].end(), f.v.begin(), f.v.end());
            placed = true;
        }
        if (!placed) {
            hull.facets.push_back(HullFacet{f.normal, f.offset, areas[k], {}});
            group_members.emplace_back(f.v.begin(), f.v.end());
        }
    }
    for (const auto& G : hull.facets) hull.boundary += G.area;

    // extreme points: incident facet normals must span R^d
    std::vector<int> candidates;
    for (const auto* f : simplices) candidates.insert(candidates.end(), f->v.begin(), f->v.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<char> extreme(points.size(), 0);
    for (int vi : candidates) {
        std::vector<int> incident;
        for (std::size_t g = 0; g < hull.facets.size(); ++g)
            if (std::abs(hull.facets[g].normal.dot(y[vi]) - hull.facets[g].offset) <= eps) incident.push_back(static_cast<int>(g));
        if (static_cast<int>(incident.size()) < d) continue;
        Mat normals(d, static_cast<Eigen::Index>(incident.size()));
        for (std::size_t j = 0; j < incident.size(); ++j) normals.col(static_cast<Eigen::Index>(j)) = hull.facets[incident[j]].normal;
        Eigen::JacobiSVD<Mat> svd(normals);
        const auto& s = svd.singularValues();
        if (s[d - 1] > 1e-9 * s[0]) extreme[vi] = 1;
    }
    for (int vi : candidates)
        if (extreme[vi]) hull.vertices.push_back(vi);

    for (std::size_t g = 0; g < hull.facets.size(); ++g) {
        auto& members = group_members[g];
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (int vi : members)
            if (extreme[vi]) hull.facets[g].vertices.push_back(vi);
    }
    return hull;
}

}  // namespace zonovol
