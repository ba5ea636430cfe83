#pragma once

// Quadrature and spherical-harmonic transforms on S^2, plus 1-D zonal
// integration on S^{n-1} for general n.
//
// Coordinates on S^2 put the polar axis along the base point 1 = (1,0,0):
//   x = (cos theta, sin theta cos phi, sin theta sin phi).
// Spherical harmonics are orthonormal and complex with the Condon-Shortley
// phase, Y_l^{-m} = (-1)^m conj(Y_l^m), so Y_l^0(1) = sqrt((2l+1)/(4 pi)).

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "conftri/dimension.hpp"

namespace conftri {

using Vec3 = Eigen::Vector3d;

/// Gauss-Legendre in cos(theta) times a uniform azimuth grid on S^2.
class Grid {
public:
    /// Grid exact for harmonics of degree <= L: n_theta = L+1, n_phi = 2L+2.
    explicit Grid(int L) : Grid(L + 1, 2 * L + 2) {}
    Grid(int n_theta, int n_phi);

    /// Largest degree whose products integrate exactly against conjugates.
    int L() const { return std::min(n_theta_ - 1, (n_phi_ - 1) / 2); }
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    Eigen::Index size() const { return Eigen::Index(n_theta_) * n_phi_; }
    double dphi() const { return dphi_; }

    const Eigen::VectorXd& cos_theta() const { return cos_theta_; }
    const Eigen::VectorXd& sin_theta() const { return sin_theta_; }
    /// Gauss weights in cos(theta); a node's area weight is weight(i) * dphi().
    const Eigen::VectorXd& weights() const { return weights_; }
    double phi(int j) const { return j * dphi_; }

    Vec3 point(int i, int j) const;
    /// Flat node index used by GridFunction storage (row-major rings).
    Eigen::Index flat(int i, int j) const { return Eigen::Index(i) * n_phi_ + j; }
    double area_weight(int i) const { return weights_(i) * dphi_; }

private:
    int n_theta_;
    int n_phi_;
    double dphi_;
    Eigen::VectorXd cos_theta_, sin_theta_, weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int L);
GridPtr make_grid(int n_theta, int n_phi);

/// Function sampled on a grid; values(i, j) at ring i, azimuth j.
struct GridFunction {
    GridPtr grid;
    Eigen::ArrayXXcd values;

    GridFunction() = default;
    explicit GridFunction(GridPtr g)
        : grid(std::move(g)), values(Eigen::ArrayXXcd::Zero(grid->n_theta(), grid->n_phi())) {}
    GridFunction(GridPtr g, Eigen::ArrayXXcd v);
};

/// Spherical-harmonic coefficients c(l, m), 0 <= l <= L, |m| <= l.
class HarmonicCoeffs {
public:
    HarmonicCoeffs() : HarmonicCoeffs(0) {}
    explicit HarmonicCoeffs(int L) : L_(L), c_(Eigen::VectorXcd::Zero(size_for(L))) {
        if (L < 0) throw Error("HarmonicCoeffs: negative degree");
    }
    HarmonicCoeffs(int L, Eigen::VectorXcd c);

    static Eigen::Index size_for(int L) { return Eigen::Index(L + 1) * (L + 1); }
    static Eigen::Index index(int l, int m) { return Eigen::Index(l) * l + l + m; }

    int L() const { return L_; }
    cplx operator()(int l, int m) const { return c_(index(l, m)); }
    cplx& operator()(int l, int m) { return c_(index(l, m)); }
    const Eigen::VectorXcd& data() const { return c_; }
    Eigen::VectorXcd& data() { return c_; }

    /// Zero-padded or truncated copy.
    HarmonicCoeffs resized(int L) const;
    /// True when c(l,-m) = (-1)^m conj(c(l,m)) within tol, i.e. the function is real.
    bool is_real(double tol = 1e-12) const;

private:
    int L_;
    Eigen::VectorXcd c_;
};

/// Seeded random coefficients, standard normal real and imaginary parts for
/// every (l, m) with l <= L; `real` imposes c(l,-m) = (-1)^m conj c(l,m).
HarmonicCoeffs random_coeffs(int L, std::uint64_t seed, bool real = false);

/// Pointwise function on S^2.
using SphereFunction = std::function<cplx(const Vec3&)>;

/// Normalized associated Legendre values Pbar_l^m(t), m >= 0, with
/// Y_l^m = Pbar_l^m(cos theta) e^{i m phi}. Layout tri(l,m) = l(l+1)/2 + m.
void legendre_table(int L, double t, double sin_theta, double* out);
inline Eigen::Index tri_index(int l, int m) { return Eigen::Index(l) * (l + 1) / 2 + m; }

cplx spherical_harmonic(int l, int m, const Vec3& x);
/// (theta, phi) of a unit vector in the coordinates above.
std::pair<double, double> angles(const Vec3& x);

GridFunction sample(const GridPtr& grid, const SphereFunction& f);

/// Integral over S^2 by the grid rule (compensated).
cplx quad(const GridFunction& f);
/// sqrt(quad(|f|^2)).
double l2_norm(const GridFunction& f);

/// Analysis to degree L (defaults to the grid's exact degree).
HarmonicCoeffs sht_forward(const GridFunction& f, int L = -1);
/// Synthesis on any grid; degrees above the grid's resolution are aliased exactly.
GridFunction sht_inverse(const HarmonicCoeffs& c, const GridPtr& grid);
/// Point evaluation of sum c(l,m) Y_l^m(x).
cplx synthesize(const HarmonicCoeffs& c, const Vec3& x);
/// Closure over a copy of the coefficients.
SphereFunction as_function(HarmonicCoeffs c);

// ---------------------------------------------------------------------------
// Zonal integration on S^{n-1}.

/// Zonal profile given as a function of the chord length d = |x - y| in [0, 2]
/// (t = <x,y> = 1 - d^2/2). Chord parametrization keeps the singular point
/// d = 0 resolved.
using ChordProfile = std::function<cplx(double d)>;
using TProfile = std::function<cplx(double t)>;

/// Nodes and weights in theta for integrals of zonal profiles over S^{n-1}:
/// sum_k weight_k G(theta_k) approximates
/// |S^{n-2}| int_0^pi G(theta) sin^{n-2}(theta) d theta.
/// The first panel is refined geometrically toward theta = 0 so that
/// integrable singularities d^c with Re c > -(n-1) + 1/2 are resolved.
struct ZonalRule {
    Eigen::VectorXd theta;
    Eigen::VectorXd weight;
};
ZonalRule zonal_rule(const Dimension& dim, int lmax);

cplx zonal_integral(const Dimension& dim, const TProfile& F);
cplx zonal_integral_chord(const Dimension& dim, const ChordProfile& G);

/// Funk-Hecke eigenvalue: convolution with F(<x,y>) multiplies degree-l
/// harmonics by |S^{n-2}| int F(t) Q_l(t) (1-t^2)^{(n-3)/2} dt, Q_l the
/// ultraspherical polynomial normalized by Q_l(1) = 1.
cplx funk_hecke(const Dimension& dim, const TProfile& F, int l);
/// All eigenvalues l = 0..lmax of a chord profile.
Eigen::VectorXcd funk_hecke_chord(const Dimension& dim, const ChordProfile& G, int lmax);

/// Eigenvalues e_l(s), l = 0..lmax, of the Riesz kernel |x-y|^s by direct
/// quadrature. Requires Re s > -(n-1) + margin (throws otherwise); accuracy
/// degrades as the margin shrinks below 1/2.
Eigen::VectorXcd riesz_multipliers_direct(const Dimension& dim, cplx s, int lmax, double margin = 0.5);

}  // namespace conftri
