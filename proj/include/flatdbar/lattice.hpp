#pragma once

// Real-linear algebra of a rank-2d lattice in C^d: period matrix, dual basis,
// the c-map onto C^d and its image lattice Lambda_c, and closest-vector
// reduction into the Voronoi cell of Lambda_c.
//
// Everything here is header-only and templated on the real scalar type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flatdbar/types.hpp"

namespace flatdbar {

template <typename T>
using CVec = VectorX<std::complex<T>>;

// C^d -> R^{2d}, (Re v ; Im v).
template <typename Derived>
auto realify(const Eigen::MatrixBase<Derived>& v) {
    using T = typename Derived::RealScalar;
    VectorX<T> out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

// R^{2d} -> C^d, inverse of realify.
template <typename Derived>
auto complexify(const Eigen::MatrixBase<Derived>& x) {
    using T = typename Derived::Scalar;
    const Eigen::Index d = x.size() / 2;
    CVec<T> out(d);
    for (Eigen::Index j = 0; j < d; ++j) out(j) = std::complex<T>(x(j), x(j + d));
    return out;
}

/// Rank-2d lattice in C^d given by 2d generators (columns of a d x 2d matrix).
///
/// Construction validates that the generators form an R-basis of C^d with a
/// period matrix whose condition number is below `kMaxCondition`; the period
/// matrix, its inverse and the Lambda_c basis are cached.
template <typename T>
class BasicLattice {
public:
    using Real = T;
    using Cx = std::complex<T>;

    static constexpr double kMaxCondition = 1e8;

    BasicLattice() = default;

    explicit BasicLattice(MatrixX<Cx> generators) : gens_(std::move(generators)) {
        d_ = static_cast<int>(gens_.rows());
        if (d_ < 1) throw ValidationError("lattice dimension must be positive");
        if (gens_.cols() != 2 * d_)
            throw ValidationError("lattice needs exactly 2d generators, got " +
                                  std::to_string(gens_.cols()) + " for d=" + std::to_string(d_));
        if (!gens_.allFinite()) throw ValidationError("lattice generators must be finite");

        const int n = 2 * d_;
        period_.resize(n, n);
        for (int k = 0; k < n; ++k) {
            period_.row(k).head(d_) = gens_.col(k).real().transpose();
            period_.row(k).tail(d_) = gens_.col(k).imag().transpose();
        }
        Eigen::JacobiSVD<MatrixX<T>> svd(period_);
        const auto& sv = svd.singularValues();
        const T smax = sv(0);
        const T smin = sv(n - 1);
        if (!(smin > T(0)) || smin <= smax * std::numeric_limits<T>::epsilon() * n)
            throw SingularLattice("generators are R-linearly dependent");
        if (smax / smin > T(kMaxCondition))
            throw SingularLattice("period matrix condition number exceeds 1e8");

        period_inv_ = period_.inverse();
        volume_ = std::abs(period_.determinant());
        condition_ = smax / smin;

        dual_.resize(d_, n);
        for (int l = 0; l < n; ++l) dual_.col(l) = complexify(period_inv_.col(l));

        lambda_c_ = Cx(0, kPi) * dual_;
        lambda_c_real_.resize(n, n);
        for (int k = 0; k < n; ++k) lambda_c_real_.col(k) = realify(lambda_c_.col(k));
        lambda_c_real_inv_ = lambda_c_real_.inverse();
    }

    int dim() const { return d_; }
    int rank() const { return 2 * d_; }

    const MatrixX<Cx>& generators() const { return gens_; }
    CVec<T> generator(int k) const { return gens_.col(k); }

    /// Rows (Re lambda_k^t, Im lambda_k^t).
    const MatrixX<T>& period_matrix() const { return period_; }
    const MatrixX<T>& period_matrix_inverse() const { return period_inv_; }

    /// Dual R-basis, column l is lambda^vee_l.
    const MatrixX<Cx>& dual() const { return dual_; }

    /// Generators of Lambda_c = i pi Lambda^vee, as columns.
    const MatrixX<Cx>& lambda_c() const { return lambda_c_; }
    const MatrixX<T>& lambda_c_real() const { return lambda_c_real_; }
    const MatrixX<T>& lambda_c_real_inverse() const { return lambda_c_real_inv_; }

    /// Euclidean volume of C^d / Lambda.
    T volume() const { return volume_; }
    /// 2-norm condition number of the period matrix.
    T condition_number() const { return condition_; }

    /// z = sum_k t_k lambda_k for lattice coordinates t.
    template <typename Derived>
    CVec<T> point(const Eigen::MatrixBase<Derived>& t) const {
        return gens_ * t.template cast<Cx>();
    }

    /// Lattice coordinates of z, t = A^{-T} (Re z ; Im z).
    template <typename Derived>
    VectorX<T> coordinates(const Eigen::MatrixBase<Derived>& z) const {
        return period_inv_.transpose() * realify(z);
    }

private:
    int d_ = 0;
    MatrixX<Cx> gens_;
    MatrixX<T> period_;
    MatrixX<T> period_inv_;
    MatrixX<Cx> dual_;
    MatrixX<Cx> lambda_c_;
    MatrixX<T> lambda_c_real_;
    MatrixX<T> lambda_c_real_inv_;
    T volume_ = T(0);
    T condition_ = T(1);
};

using Lattice = BasicLattice<double>;

template <typename T>
struct BasicDualBasis {
    MatrixX<std::complex<T>> vectors;  // d x 2d, column l is lambda^vee_l
};
using DualBasis = BasicDualBasis<double>;

/// A point of C^d standing for c(rho). `reduced` marks it as the Voronoi
/// representative of its Lambda_c coset.
template <typename T>
struct BasicCVector {
    CVec<T> c;
    bool reduced = false;

    T norm() const { return c.norm(); }
    int dim() const { return static_cast<int>(c.size()); }
};
using CVector = BasicCVector<double>;

template <typename T>
const MatrixX<T>& period_matrix(const BasicLattice<T>& lat) {
    return lat.period_matrix();
}

template <typename T>
BasicDualBasis<T> dual_basis(const BasicLattice<T>& lat) {
    return {lat.dual()};
}

namespace detail {

template <typename T, typename Derived>
void require_imaginary(const Eigen::MatrixBase<Derived>& s, int rank) {
    if (s.size() != rank)
        throw DimensionMismatch("c-map input needs " + std::to_string(rank) + " entries");
    const T scale = std::max<T>(T(1), s.cwiseAbs().maxCoeff());
    const T tol = T(1e-12) * scale;
    for (Eigen::Index l = 0; l < s.size(); ++l)
        if (std::abs(s(l).real()) > tol)
            throw NonImaginaryInput("c-map input entry " + std::to_string(l) +
                                    " is not purely imaginary");
}

}  // namespace detail

/// c(s) = i B A^{-1} (-i s) with B(a, b) = (a + i b) / 2.
template <typename T, typename Derived>
CVec<T> c_map(const BasicLattice<T>& lat, const Eigen::MatrixBase<Derived>& s) {
    using Cx = std::complex<T>;
    detail::require_imaginary<T>(s, lat.rank());
    const VectorX<T> theta = (Cx(0, -1) * s.template cast<Cx>()).real();
    const VectorX<T> ab = lat.period_matrix_inverse() * theta;
    const int d = lat.dim();
    CVec<T> out(d);
    for (int j = 0; j < d; ++j) out(j) = Cx(0, 1) * Cx(ab(j), ab(j + d)) / T(2);
    return out;
}

/// Closed form c(s) = (1/2) sum_l s_l lambda^vee_l.
template <typename T, typename Derived>
CVec<T> c_map_dual(const BasicLattice<T>& lat, const Eigen::MatrixBase<Derived>& s) {
    using Cx = std::complex<T>;
    detail::require_imaginary<T>(s, lat.rank());
    return (lat.dual() * s.template cast<Cx>()) / T(2);
}

/// Columns c(2 pi i e_k), k = 1..2d, computed through the matrix definition.
template <typename T>
MatrixX<std::complex<T>> lambda_c_generators(const BasicLattice<T>& lat) {
    using Cx = std::complex<T>;
    const int n = lat.rank();
    MatrixX<Cx> out(lat.dim(), n);
    for (int k = 0; k < n; ++k) {
        CVec<T> s = CVec<T>::Zero(n);
        s(k) = Cx(0, 2 * kPi);
        out.col(k) = c_map(lat, s);
    }
    return out;
}

/// || M (-conj(c), c)^t - s || where M has rows (lambda_k^t | conj(lambda_k)^t).
template <typename T, typename Derived>
T key_identity_residual(const BasicLattice<T>& lat, const Eigen::MatrixBase<Derived>& s) {
    using Cx = std::complex<T>;
    const int d = lat.dim();
    const int n = lat.rank();
    const CVec<T> c = c_map(lat, s);
    MatrixX<Cx> m(n, n);
    m.leftCols(d) = lat.generators().transpose();
    m.rightCols(d) = lat.generators().conjugate().transpose();
    CVec<T> rhs(n);
    rhs.head(d) = -c.conjugate();
    rhs.tail(d) = c;
    return (m * rhs - s.template cast<Cx>()).norm();
}

/// Result of a closest-vector search: integer coefficients of the lattice
/// vector g and the residual x - g.
template <typename T>
struct ClosestVector {
    VectorXi coeffs;
    VectorX<T> residual;
    T distance = T(0);
};

/// Babai rounding followed by exhaustive search over base + {-radius..radius}^n.
/// `basis` holds the lattice generators as columns and `basis_inv` its inverse.
/// Ties (within a relative 1e-12) go to the lexicographically smallest
/// coefficient vector.
template <typename T>
ClosestVector<T> closest_vector(const MatrixX<T>& basis, const MatrixX<T>& basis_inv,
                                const VectorX<T>& x, int radius = 2) {
    const Eigen::Index n = basis.cols();
    const VectorX<T> a = basis_inv * x;
    VectorXi base(n);
    for (Eigen::Index k = 0; k < n; ++k) base(k) = static_cast<int>(std::llround(a(k)));

    VectorXi off = VectorXi::Constant(n, -radius);
    VectorXi best_coeffs;
    VectorX<T> best_res;
    T best = std::numeric_limits<T>::infinity();
    const auto lex_less = [](const VectorXi& u, const VectorXi& v) {
        return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(),
                                            v.data() + v.size());
    };
    for (;;) {
        const VectorXi coeffs = base + off;
        VectorX<T> res = x;
        for (Eigen::Index k = 0; k < n; ++k)
            if (coeffs(k) != 0) res -= T(coeffs(k)) * basis.col(k);
        const T nrm = res.squaredNorm();
        const T tol = T(1e-12) * std::max<T>(T(1), best);
        if (best_coeffs.size() == 0 || nrm < best - tol ||
            (std::abs(nrm - best) <= tol && lex_less(coeffs, best_coeffs))) {
            if (best_coeffs.size() == 0 || nrm < best) best = nrm;
            best_coeffs = coeffs;
            best_res = std::move(res);
        }
        Eigen::Index k = 0;
        while (k < n && off(k) == radius) off(k++) = -radius;
        if (k == n) break;
        ++off(k);
    }
    return {best_coeffs, best_res, std::sqrt(best_res.squaredNorm())};
}

/// Maps v to its Voronoi representative modulo Lambda_c.
template <typename T, typename Derived>
BasicCVector<T> reduce(const Eigen::MatrixBase<Derived>& v, const BasicLattice<T>& lat) {
    if (v.size() != lat.dim()) throw DimensionMismatch("reduce: vector has wrong dimension");
    const VectorX<T> x = realify(v.template cast<std::complex<T>>());
    const auto cv = closest_vector<T>(lat.lambda_c_real(), lat.lambda_c_real_inverse(), x);
    return {complexify(cv.residual), true};
}

/// Distance from v to the nearest point of Lambda_c.
template <typename T, typename Derived>
T distance_to_lambda_c(const Eigen::MatrixBase<Derived>& v, const BasicLattice<T>& lat) {
    return reduce(v, lat).c.norm();
}

/// Lagrange-Gauss reduction of a planar basis (columns). Output spans the
/// same lattice with |b1| <= |b2| and |<b1, b2>| <= |b1|^2 / 2.
template <typename T>
Eigen::Matrix<T, 2, 2> gauss_reduce(Eigen::Matrix<T, 2, 2> b) {
    if (b.col(0).squaredNorm() > b.col(1).squaredNorm()) b.col(0).swap(b.col(1));
    for (int iter = 0; iter < 256; ++iter) {
        const T mu = std::round(b.col(0).dot(b.col(1)) / b.col(0).squaredNorm());
        b.col(1) -= mu * b.col(0);
        if (b.col(1).squaredNorm() >= b.col(0).squaredNorm()) break;
        b.col(0).swap(b.col(1));
    }
    return b;
}

/// Vertices, counterclockwise, of the Voronoi cell at the origin of the planar
/// lattice spanned by the columns of `basis`.
template <typename T>
std::vector<Eigen::Matrix<T, 2, 1>> voronoi_polygon(const Eigen::Matrix<T, 2, 2>& basis) {
    using P = Eigen::Matrix<T, 2, 1>;
    const Eigen::Matrix<T, 2, 2> b = gauss_reduce(basis);
    const T box = T(2) * (b.col(0).norm() + b.col(1).norm());
    std::vector<P> poly{P(-box, -box), P(box, -box), P(box, box), P(-box, box)};
    for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
            if (i == 0 && j == 0) continue;
            const P v = T(i) * b.col(0) + T(j) * b.col(1);
            const T rhs = v.squaredNorm() / T(2);
            std::vector<P> out;
            const std::size_t m = poly.size();
            for (std::size_t k = 0; k < m; ++k) {
                const P& a = poly[k];
                const P& c = poly[(k + 1) % m];
                const T fa = a.dot(v) - rhs;
                const T fc = c.dot(v) - rhs;
                if (fa <= T(0)) out.push_back(a);
                if ((fa < T(0) && fc > T(0)) || (fa > T(0) && fc < T(0)))
                    out.push_back(a + (c - a) * (fa / (fa - fc)));
            }
            poly = std::move(out);
        }
    }
    return poly;
}

/// Covering radius of Lambda_c for d = 1: the largest distance from the origin
/// to a vertex of its Voronoi cell.
template <typename T>
T covering_radius(const BasicLattice<T>& lat) {
    if (lat.dim() != 1) throw DimensionMismatch("covering_radius is implemented for d = 1");
    const Eigen::Matrix<T, 2, 2> b = lat.lambda_c_real();
    T r = T(0);
    for (const auto& v : voronoi_polygon<T>(b)) r = std::max(r, v.norm());
    return r;
}

}  // namespace flatdbar
