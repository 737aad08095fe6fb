#include "zonovol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zonovol/errors.hpp"

namespace zonovol {

Mat stack_columns(std::span<const Vec> vectors) {
    if (vectors.empty()) return Mat(0, 0);
    const auto n = vectors.front().size();
    Mat m(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != n) throw ContractViolation("stack_columns: dimension mismatch");
        m.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return m;
}

// Column-pivoted QR gives |det| inside the span as the product of |R_ii| without the
// sqrt(eps) loss a Gram determinant suffers near dependence.
double parallelepiped_volume(const Mat& columns) {
    const auto n = columns.rows();
    const auto k = columns.cols();
    if (k < 1 || k > n) throw ContractViolation("parallelepiped_volume: need 1 <= k <= n, got k=" + std::to_string(k));
    Eigen::ColPivHouseholderQR<Mat> qr(columns);
    const auto& r = qr.matrixQR();
    const double top = std::abs(r(0, 0));
    if (top == 0.0) return 0.0;
    double vol = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double d = std::abs(r(i, i));
        if (d <= kRankTolerance * top) return 0.0;
        vol *= d;
    }
    return vol;
}

double parallelepiped_volume(std::span<const Vec> vectors) {
    if (vectors.empty()) throw ContractViolation("parallelepiped_volume: empty input");
    return parallelepiped_volume(stack_columns(vectors));
}

Subspace::Subspace(int ambient_dim) : basis_(Mat(ambient_dim, 0)) {
    if (ambient_dim < 1) throw ContractViolation("Subspace: ambient dimension must be >= 1");
}

Subspace Subspace::full(int ambient_dim) { return Subspace(Mat(Mat::Identity(ambient_dim, ambient_dim))); }

Subspace Subspace::from_orthonormal(Mat basis) {
    const auto d = basis.cols();
    if (basis.rows() < 1 || d > basis.rows()) throw ContractViolation("Subspace: bad basis shape");
    const double err = (basis.transpose() * basis - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (d > 0 && err > 1e-10) throw ContractViolation("Subspace: basis is not orthonormal (err " + std::to_string(err) + ")");
    return Subspace(std::move(basis));
}

Subspace Subspace::orthogonal_complement() const {
    const int n = ambient_dim();
    if (dim() == 0) return full(n);
    if (dim() == n) return Subspace(n);
    Eigen::HouseholderQR<Mat> qr(basis_);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    return Subspace(Mat(q.rightCols(n - dim())));
}

bool Subspace::contains(const Vec& x, double tol) const {
    return (x - project(x)).norm() <= tol * std::max(1.0, x.norm());
}

Subspace orthonormalize(const Mat& columns) {
    const auto n = columns.rows();
    if (n < 1) throw ContractViolation("orthonormalize: ambient dimension must be >= 1");
    if (columns.cols() == 0) return Subspace(static_cast<int>(n));
    Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return Subspace(static_cast<int>(n));
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > kRankTolerance * s[0]) ++rank;
    return Subspace::from_orthonormal(svd.matrixU().leftCols(rank));
}

Subspace orthonormalize(std::span<const Vec> spanning, int ambient_dim) {
    if (spanning.empty()) return Subspace(ambient_dim);
    Mat cols = stack_columns(spanning);
    if (cols.rows() != ambient_dim) throw ContractViolation("orthonormalize: dimension mismatch");
    return orthonormalize(cols);
}

double bracket(std::span<const Subspace> subspaces, int span_dim) {
    if (subspaces.empty()) {
        if (span_dim != 0) throw ContractViolation("bracket: empty tuple needs span_dim 0");
        return 1.0;
    }
    const int n = subspaces.front().ambient_dim();
    int total = 0;
    for (const auto& s : subspaces) {
        if (s.ambient_dim() != n) throw ContractViolation("bracket: ambient dimension mismatch");
        total += s.dim();
    }
    if (total != span_dim) throw ContractViolation("bracket: dimensions sum to " + std::to_string(total) + ", expected " + std::to_string(span_dim));
    if (span_dim > n) throw ContractViolation("bracket: dimension sum exceeds ambient dimension");
    if (span_dim == 0) return 1.0;
    Mat stacked(n, span_dim);
    int col = 0;
    for (const auto& s : subspaces) {
        stacked.middleCols(col, s.dim()) = s.basis();
        col += s.dim();
    }
    return std::min(1.0, parallelepiped_volume(stacked));
}

double bracket(std::span<const Subspace> subspaces) {
    int total = 0;
    for (const auto& s : subspaces) total += s.dim();
    return bracket(subspaces, total);
}

Vec project(const Vec& point, const Subspace& L) {
    if (point.size() != L.ambient_dim()) throw ContractViolation("project: dimension mismatch");
    return L.project(point);
}

Vec project(const Vec& point, const Flat& A) {
    if (point.size() != A.direction.ambient_dim() || A.offset.size() != point.size())
        throw ContractViolation("project: dimension mismatch");
    return A.offset + A.direction.project(point - A.offset);
}

Subspace subspace_sum(std::span<const Subspace> subspaces) {
    if (subspaces.empty()) throw ContractViolation("subspace_sum: empty input");
    const int n = subspaces.front().ambient_dim();
    int total = 0;
    for (const auto& s : subspaces) total += s.dim();
    Mat cols(n, total);
    int c = 0;
    for (const auto& s : subspaces) {
        cols.middleCols(c, s.dim()) = s.basis();
        c += s.dim();
    }
    return orthonormalize(cols);
}

double principal_angle_distance(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw ContractViolation("principal_angle_distance: ambient mismatch");
    if (a.dim() != b.dim()) return 1.0;
    if (a.dim() == 0) return 0.0;
    Mat residual = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
    Eigen::JacobiSVD<Mat> svd(residual);
    return std::min(1.0, svd.singularValues()[0]);
}

Subspace sample_grassmannian(int n, int i, Rng& rng) {
    if (i < 0 || i > n) throw ContractViolation("sample_grassmannian: need 0 <= i <= n");
    if (i == 0) return Subspace(n);
    if (i == n) return Subspace::full(n);
    Mat g(n, i);
    for (int c = 0; c < i; ++c)
        for (int r = 0; r < n; ++r) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, i);
    return Subspace::from_orthonormal(std::move(q));
}

double abs_det_inplace(double* a, int n) {
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(a[c * n + c]);
        for (int r = c + 1; r < n; ++r) {
            const double v = std::abs(a[r * n + c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != c)
            for (int k = c; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
        const double d = a[c * n + c];
        det *= d;
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / d;
            if (f == 0.0) continue;
            for (int k = c + 1; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        }
    }
    return std::abs(det);
}

}  // namespace zonovol
