#pragma once

// The conformal group SO_0(1,n) acting projectively on S^{n-1}.
//
// Points of the sphere are unit vectors x in R^n, identified with the
// isotropic line through (1, x) in R^{1,n}. A group element g acts by
// (1, g(x)) = g.(1,x) / (g.(1,x))_0 and its conformal factor at x is
// kappa(g, x) = 1 / (g.(1,x))_0.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "conftri/dimension.hpp"

namespace conftri {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A unit vector of R^n.
template <typename Scalar>
class SpherePointT {
public:
    static constexpr double kTolerance = 1e-12;

    explicit SpherePointT(VectorX<Scalar> x) : x_(std::move(x)) {
        using std::abs;
        if (x_.size() < 3 || !(abs(x_.norm() - Scalar(1)) <= Scalar(kTolerance)))
            throw Error("SpherePoint: not a unit vector of R^n, n >= 3");
    }

    /// Normalizes x; rejects zero or non-finite input.
    static SpherePointT normalized(const VectorX<Scalar>& x) {
        const Scalar r = x.norm();
        if (!(r > Scalar(0)) || !std::isfinite(double(r))) throw Error("SpherePoint: cannot normalize");
        return SpherePointT(x / r);
    }

    /// The base point 1 = (1, 0, ..., 0).
    static SpherePointT base(const Dimension& dim) {
        VectorX<Scalar> e = VectorX<Scalar>::Zero(dim.n());
        e(0) = Scalar(1);
        return SpherePointT(std::move(e));
    }

    const VectorX<Scalar>& coords() const { return x_; }
    Eigen::Index size() const { return x_.size(); }
    Scalar operator[](Eigen::Index i) const { return x_(i); }

private:
    VectorX<Scalar> x_;
};

/// Element of SO_0(1,n) as an (n+1)x(n+1) matrix, validated on construction.
template <typename Scalar>
class ConformalMapT {
public:
    static constexpr double kTolerance = 1e-10;

    explicit ConformalMapT(MatrixX<Scalar> m) : m_(std::move(m)) { validate(); }

    static ConformalMapT identity(const Dimension& dim) {
        return ConformalMapT(MatrixX<Scalar>::Identity(dim.n() + 1, dim.n() + 1), Unchecked{});
    }

    const MatrixX<Scalar>& matrix() const { return m_; }
    int n() const { return int(m_.rows()) - 1; }
    Dimension dim() const { return Dimension(n()); }

    ConformalMapT operator*(const ConformalMapT& other) const {
        if (other.m_.rows() != m_.rows()) throw Error("ConformalMap: dimension mismatch");
        return ConformalMapT(m_ * other.m_);
    }

    /// g^{-1} = J g^T J.
    ConformalMapT inverse() const {
        MatrixX<Scalar> inv = m_.transpose();
        inv.row(0).tail(n()) *= Scalar(-1);
        inv.col(0).tail(n()) *= Scalar(-1);
        return ConformalMapT(std::move(inv), Unchecked{});
    }

    /// (g.(1,x))_0; positive on the identity component.
    Scalar lift_0(const VectorX<Scalar>& x) const {
        return m_(0, 0) + m_.row(0).tail(n()).dot(x);
    }

private:
    struct Unchecked {};
    ConformalMapT(MatrixX<Scalar> m, Unchecked) : m_(std::move(m)) {}

    void validate() const {
        using std::abs;
        const Eigen::Index d = m_.rows();
        if (d < 4 || m_.cols() != d) throw Error("ConformalMap: matrix must be (n+1)x(n+1), n >= 3");
        if (!m_.allFinite()) throw Error("ConformalMap: non-finite entries");
        MatrixX<Scalar> J = MatrixX<Scalar>::Identity(d, d) * Scalar(-1);
        J(0, 0) = Scalar(1);
        const Scalar scale = std::max(Scalar(1), m_.squaredNorm() / Scalar(d));
        const Scalar err = (m_.transpose() * J * m_ - J).cwiseAbs().maxCoeff();
        if (err > Scalar(kTolerance) * scale) throw Error("ConformalMap: m^T J m != J");
        if (abs(m_.determinant() - Scalar(1)) > Scalar(kTolerance) * scale)
            throw Error("ConformalMap: det != 1");
        if (!(m_(0, 0) > Scalar(0))) throw Error("ConformalMap: not in the identity component");
    }

    MatrixX<Scalar> m_;
};

using SpherePoint = SpherePointT<double>;
using ConformalMap = ConformalMapT<double>;

/// The one-parameter subgroup A: hyperbolic rotation in the (0,1) plane.
template <typename Scalar = double>
ConformalMapT<Scalar> boost(Scalar t, const Dimension& dim) {
    using std::cosh;
    using std::sinh;
    if (!std::isfinite(double(t))) throw Error("boost: t must be finite");
    MatrixX<Scalar> m = MatrixX<Scalar>::Identity(dim.n() + 1, dim.n() + 1);
    m(0, 0) = m(1, 1) = cosh(t);
    m(0, 1) = m(1, 0) = sinh(t);
    return ConformalMapT<Scalar>(std::move(m));
}

/// The nilpotent subgroup N, xi in R^{n-1}.
template <typename Scalar = double>
ConformalMapT<Scalar> translation(const VectorX<Scalar>& xi, const Dimension& dim) {
    const int n = dim.n();
    if (xi.size() != n - 1) throw Error("translation: xi must have n-1 components");
    if (!xi.allFinite()) throw Error("translation: xi must be finite");
    const Scalar h = xi.squaredNorm() / Scalar(2);
    MatrixX<Scalar> m = MatrixX<Scalar>::Identity(n + 1, n + 1);
    m(0, 0) = Scalar(1) + h;
    m(0, 1) = -h;
    m(1, 0) = h;
    m(1, 1) = Scalar(1) - h;
    m.row(0).tail(n - 1) = xi.transpose();
    m.row(1).tail(n - 1) = xi.transpose();
    m.col(0).tail(n - 1) = xi;
    m.col(1).tail(n - 1) = -xi;
    return ConformalMapT<Scalar>(std::move(m));
}

/// Embeds k in SO(n) as diag(1, k).
template <typename Scalar = double>
ConformalMapT<Scalar> rotation(const MatrixX<Scalar>& k, const Dimension& dim) {
    using std::abs;
    const int n = dim.n();
    if (k.rows() != n || k.cols() != n) throw Error("rotation: k must be n x n");
    const Scalar orth = (k.transpose() * k - MatrixX<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(orth <= Scalar(ConformalMapT<Scalar>::kTolerance)) ||
        !(abs(k.determinant() - Scalar(1)) <= Scalar(ConformalMapT<Scalar>::kTolerance)))
        throw Error("rotation: k is not in SO(n)");
    MatrixX<Scalar> m = MatrixX<Scalar>::Identity(n + 1, n + 1);
    m.bottomRightCorner(n, n) = k;
    return ConformalMapT<Scalar>(std::move(m));
}

template <typename Scalar>
SpherePointT<Scalar> act(const ConformalMapT<Scalar>& g, const SpherePointT<Scalar>& x) {
    if (x.size() != g.n()) throw Error("act: dimension mismatch");
    const Scalar l0 = g.lift_0(x.coords());
    if (!(l0 > Scalar(0)) || !std::isfinite(double(l0))) throw Error("act: degenerate normalization");
    VectorX<Scalar> y = (g.matrix().bottomLeftCorner(g.n(), 1) +
                         g.matrix().bottomRightCorner(g.n(), g.n()) * x.coords()) / l0;
    // Renormalize away the rounding drift; the exact image is a unit vector.
    return SpherePointT<Scalar>(y / y.norm());
}

template <typename Scalar>
Scalar conformal_factor(const ConformalMapT<Scalar>& g, const SpherePointT<Scalar>& x) {
    if (x.size() != g.n()) throw Error("conformal_factor: dimension mismatch");
    return Scalar(1) / g.lift_0(x.coords());
}

template <typename Scalar>
ConformalMapT<Scalar> compose(const ConformalMapT<Scalar>& g1, const ConformalMapT<Scalar>& g2) {
    return g1 * g2;
}

template <typename Scalar>
ConformalMapT<Scalar> inverse(const ConformalMapT<Scalar>& g) {
    return g.inverse();
}

/// Haar-random element of SO(n): QR of a Gaussian matrix with the sign fixed.
template <typename Scalar = double, typename Rng>
MatrixX<Scalar> random_orthogonal(int n, Rng& rng) {
    std::normal_distribution<double> normal;
    MatrixX<Scalar> a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Scalar(normal(rng));
    Eigen::HouseholderQR<MatrixX<Scalar>> qr(a);
    MatrixX<Scalar> q = qr.householderQ();
    const MatrixX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < Scalar(0)) q.col(j) *= Scalar(-1);
    if (q.determinant() < Scalar(0)) q.col(0) *= Scalar(-1);
    return q;
}

/// Deterministic random element: a word of length 1..4 alternating rotations
/// and boosts with |t| <= max_boost.
template <typename Scalar = double>
ConformalMapT<Scalar> random_element(const Dimension& dim, std::uint64_t seed, double max_boost = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int length = 1 + int(rng() % 4);
    bool rotate = (rng() & 1u) != 0;
    ConformalMapT<Scalar> g = ConformalMapT<Scalar>::identity(dim);
    for (int i = 0; i < length; ++i, rotate = !rotate) {
        if (rotate)
            g = g * rotation<Scalar>(random_orthogonal<Scalar>(dim.n(), rng), dim);
        else
            g = g * boost<Scalar>(Scalar(max_boost * unit(rng)), dim);
    }
    return g;
}

/// A boost of rapidity exactly t along a random axis: k a_t k^{-1}.
template <typename Scalar = double>
ConformalMapT<Scalar> random_boost(const Dimension& dim, std::uint64_t seed, double t) {
    std::mt19937_64 rng(seed);
    const ConformalMapT<Scalar> k = rotation<Scalar>(random_orthogonal<Scalar>(dim.n(), rng), dim);
    return k * boost<Scalar>(Scalar(t), dim) * k.inverse();
}

}  // namespace conftri
