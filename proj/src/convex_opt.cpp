#include "zonovol/convex_opt.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "zonovol/errors.hpp"

namespace zonovol {

namespace {

constexpr double kGapTolerance = 1e-12;
constexpr double kEllipsoidGap = 1e-10;
constexpr double kBarrierGrowth = 8.0;

Vec slacks_lp(const Mat& A, const Vec& b, const Vec& z) {
    const auto n = A.cols();
    return b - A * z.head(n) - Vec::Constant(A.rows(), z[n]);
}

}  // namespace

InscribedBall chebyshev_ball(const HRep& h, const Vec& start) {
    const Mat A = h.A();
    const Vec b = h.b();
    const auto m = A.rows();
    const auto n = A.cols();
    if (start.size() != n) throw ContractViolation("chebyshev_ball: start point has the wrong dimension");
    const double start_slack = (b - A * start).minCoeff();
    if (!(start_slack > 0.0)) throw DegenerateBody("chebyshev_ball: start point is not interior");

    Mat C(m, n + 1);
    C << A, Vec::Ones(m);
    Vec z(n + 1);
    z << start, 0.5 * start_slack;
    const Vec e_r = Vec::Unit(n + 1, n);
    int iterations = 0;
    double t = 1.0 / std::max(start_slack, 1e-300);
    while (true) {
        for (int inner = 0; inner < 100; ++inner) {
            const Vec s = slacks_lp(A, b, z);
            const Vec inv = s.cwiseInverse();
            const Vec grad = -t * e_r + C.transpose() * inv;
            const Mat H = C.transpose() * inv.cwiseAbs2().asDiagonal() * C;
            const Vec step = -H.ldlt().solve(grad);
            const double decrement = -grad.dot(step);
            ++iterations;
            if (decrement < 1e-10 * std::max(1.0, t * 1e-10)) break;
            double alpha = 1.0;
            const Vec ds = -C * step;
            for (Eigen::Index i = 0; i < m; ++i)
                if (ds[i] < 0.0) alpha = std::min(alpha, -0.99 * s[i] / ds[i]);
            auto f = [&](const Vec& zz) {
                const Vec ss = slacks_lp(A, b, zz);
                return -t * zz[n] - ss.array().log().sum();
            };
            const double f0 = f(z);
            while (alpha > 1e-10 && f(z + alpha * step) > f0 - 0.25 * alpha * decrement) alpha *= 0.5;
            if (alpha <= 1e-10) break;
            z += alpha * step;
            if (iterations > 5000) throw SolverError("chebyshev_ball: Newton iterations exhausted", decrement);
        }
        if (static_cast<double>(m) / t < kGapTolerance * std::max(1.0, z[n])) break;
        t *= kBarrierGrowth;
    }
    return {z.head(n), z[n], iterations};
}

EllipsoidFit max_volume_inscribed_ellipsoid(const HRep& h, const Vec& start_center, double start_radius) {
    const Mat A = h.A();
    const Vec b = h.b();
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (!(start_radius > 0.0)) throw DegenerateBody("max_volume_inscribed_ellipsoid: start radius must be positive");

    // Symmetric basis E_k of the shape matrix; B a_i = G_i * z_B is linear in the shape part.
    std::vector<Mat> basis;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Mat e = Mat::Zero(n, n);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            basis.push_back(e);
        }
    const int p = static_cast<int>(basis.size());
    const int N = p + n;
    std::vector<Mat> G(m, Mat::Zero(n, N));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < p; ++k) G[i].col(k) = basis[k] * A.row(i).transpose();

    auto shape_of = [&](const Vec& z) {
        Mat B = Mat::Zero(n, n);
        for (int k = 0; k < p; ++k) B += z[k] * basis[k];
        return B;
    };
    Vec z = Vec::Zero(N);
    {
        const Mat B0 = 0.5 * start_radius * Mat::Identity(n, n);
        int k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++k) z[k] = B0(i, j);
        z.tail(n) = start_center;
    }

    // Returns +inf outside the domain.
    auto objective = [&](const Vec& zz, double t) {
        const Mat B = shape_of(zz);
        Eigen::LLT<Mat> llt(B);
        if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
        double logdet = 0.0;
        for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
        double f = -t * logdet;
        for (int i = 0; i < m; ++i) {
            const double s = b[i] - A.row(i).dot(zz.tail(n)) - (G[i] * zz).norm();
            if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
            f -= std::log(s);
        }
        return f;
    };
    if (!std::isfinite(objective(z, 1.0)))
        throw DegenerateBody("max_volume_inscribed_ellipsoid: start ellipsoid is not strictly inside");

    int iterations = 0;
    double t = 1.0;
    while (true) {
        for (int inner = 0; inner < 200; ++inner) {
            const Mat B = shape_of(z);
            const Mat Binv = B.inverse();
            Vec grad = Vec::Zero(N);
            Mat H = Mat::Zero(N, N);
            std::vector<Mat> BinvE(p);
            for (int k = 0; k < p; ++k) {
                BinvE[k] = Binv * basis[k];
                grad[k] = -t * BinvE[k].trace();
            }
            for (int k = 0; k < p; ++k)
                for (int l = k; l < p; ++l) {
                    const double v = t * (BinvE[k].cwiseProduct(BinvE[l].transpose())).sum();
                    H(k, l) += v;
                    if (l != k) H(l, k) += v;
                }
            for (int i = 0; i < m; ++i) {
                const Vec g = G[i] * z;
                const double eta = g.norm();
                const double s = b[i] - A.row(i).dot(z.tail(n)) - eta;
                Vec ds = -(G[i].transpose() * g) / eta;
                ds.tail(n) -= A.row(i).transpose();
                const Mat proj = Mat::Identity(n, n) - (g * g.transpose()) / (eta * eta);
                const Mat curv = (G[i].transpose() * proj * G[i]) / eta;  // = -Hess(s)
                grad -= ds / s;
                H += (ds * ds.transpose()) / (s * s) + curv / s;
            }
            const Vec step = -H.ldlt().solve(grad);
            const double decrement = -grad.dot(step);
            ++iterations;
            if (iterations > kMaxEllipsoidIterations)
                throw SolverError("max_volume_inscribed_ellipsoid: no convergence after " +
                                      std::to_string(kMaxEllipsoidIterations) + " Newton steps",
                                  decrement);
            if (!(decrement >= 0.0)) throw SolverError("max_volume_inscribed_ellipsoid: indefinite Newton system", decrement);
            if (decrement < 1e-8 * std::max(1.0, t * 1e-10)) break;
            const double f0 = objective(z, t);
            double alpha = 1.0;
            while (alpha > 1e-10 && !(objective(z + alpha * step, t) <= f0 - 0.25 * alpha * decrement)) alpha *= 0.5;
            if (alpha <= 1e-10) break;
            z += alpha * step;
        }
        if (static_cast<double>(m) / t < kEllipsoidGap) break;
        t *= kBarrierGrowth;
    }
    return {z.tail(n), shape_of(z), iterations, static_cast<double>(m) / t};
}

}  // namespace zonovol
