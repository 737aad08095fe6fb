#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zonovol/random.hpp"

namespace zonovol {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

// k-volume of the parallelepiped spanned by the columns (k <= n). Zero iff dependent.
double parallelepiped_volume(const Mat& columns);
double parallelepiped_volume(std::span<const Vec> vectors);

// Stack vectors as columns; all must share one dimension.
Mat stack_columns(std::span<const Vec> vectors);

// Linear subspace of R^n stored by an orthonormal basis (n x dim).
class Subspace {
public:
    explicit Subspace(int ambient_dim);  // the trivial subspace {o}
    static Subspace full(int ambient_dim);
    // Columns must already be orthonormal (checked to 1e-10).
    static Subspace from_orthonormal(Mat basis);

    int ambient_dim() const noexcept { return static_cast<int>(basis_.rows()); }
    int dim() const noexcept { return static_cast<int>(basis_.cols()); }
    const Mat& basis() const noexcept { return basis_; }

    Mat projector() const { return basis_ * basis_.transpose(); }
    Vec project(const Vec& x) const { return basis_ * (basis_.transpose() * x); }
    Vec coordinates(const Vec& x) const { return basis_.transpose() * x; }
    Subspace orthogonal_complement() const;
    bool contains(const Vec& x, double tol = 1e-9) const;

private:
    explicit Subspace(Mat basis) : basis_(std::move(basis)) {}
    Mat basis_;
};

// Affine flat: direction + offset (any point of the flat).
struct Flat {
    Subspace direction;
    Vec offset;
};

Subspace orthonormalize(std::span<const Vec> spanning, int ambient_dim);
Subspace orthonormalize(const Mat& columns);

// [U_1, ..., U_m]_{span_dim}: |det| of the stacked orthonormal bases inside their sum,
// zero when the sum is not direct.
double bracket(std::span<const Subspace> subspaces, int span_dim);
double bracket(std::span<const Subspace> subspaces);  // span_dim = sum of dims

Vec project(const Vec& point, const Subspace& L);
Vec project(const Vec& point, const Flat& A);

// Linear sum U_1 + ... + U_m.
Subspace subspace_sum(std::span<const Subspace> subspaces);

// sin of the largest principal angle; 1 when the dimensions differ.
double principal_angle_distance(const Subspace& a, const Subspace& b);

// Haar-distributed i-dimensional subspace of R^n.
Subspace sample_grassmannian(int n, int i, Rng& rng);

// |det| of a square matrix by partial pivoting; destroys its argument.
double abs_det_inplace(double* a, int n);

}  // namespace zonovol
