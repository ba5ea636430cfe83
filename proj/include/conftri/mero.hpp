#pragma once

// Regularized pairings with the Riesz distributions h_s = |1 - x|^s and
// k_alpha(x, y) = |x - y|^{-rho+alpha}, continued meromorphically through the
// Bernstein-Sato descent, and residue extraction by contour sampling.

#include <functional>
#include <utility>
#include <vector>

#include "conftri/spectral_ops.hpp"
#include "conftri/sphgrid.hpp"

namespace conftri {

/// Laurent data of a function sampled on a circle around `center`.
struct LaurentFit {
    cplx center;
    double radius;
    cplx residue;        ///< coefficient of (z - center)^{-1}
    cplx regular_value;  ///< coefficient of (z - center)^0
    int ring_size;
    /// |a_{-2}| / (radius |a_{-1}|): zero for a simple pole at the center,
    /// below 1 when a single simple pole lies inside the ring.
    double condition;
    /// center + a_{-2}/a_{-1}: the pole position when exactly one simple pole lies inside.
    cplx location;
};

using ComplexFunction = std::function<cplx(cplx)>;

/// Trapezoid rule on the circle |z - center| = radius with m samples at
/// angles 2 pi (j + 1/2) / m (no sample on the real axis).
LaurentFit residue_ring(const ComplexFunction& F, cplx center, double radius, int m = 16);

/// Poles of s -> h_s: s = -(n-1) - 2k.
cplx hs_pole(const Dimension& dim, int k);

/// (h_s, f) from the degree-l projections of f evaluated at 1:
/// sum_l e_l(s) proj_l(f)(1). Works for every n.
cplx pair_hs_projections(const Dimension& dim, cplx s, const Eigen::VectorXcd& proj_at_one, double margin = 0.5);

/// (h_s, f) for band-limited f on S^2.
cplx pair_hs(const Dimension& dim, cplx s, const HarmonicCoeffs& f, double margin = 0.5);

/// proj_l(f)(1) = c(l,0) sqrt((2l+1)/(4 pi)) for l = 0..L.
Eigen::VectorXcd projections_at_base(const HarmonicCoeffs& f);

struct RingOptions {
    double radius = 0.1;
    int size = 16;
};

/// Ring fit of s -> (h_s, f) at s = -(n-1) - 2k.
LaurentFit residue_pair_hs(const Dimension& dim, int k, const HarmonicCoeffs& f, RingOptions ring = {});

/// Residue of s -> (h_s, f) at s = -(n-1)-2k from the multiplier residues:
/// 2 c_k (Delta_k f)(1).
cplx residue_pair_hs_expected(const Dimension& dim, int k, const HarmonicCoeffs& f);

/// Double pairing (k_alpha, f1 (x) f2) = sum_l e_l(alpha) sum_m c1(l,m) (-1)^m c2(l,-m).
cplx pair_kalpha(const Dimension& dim, cplx alpha, const HarmonicCoeffs& f1, const HarmonicCoeffs& f2,
                 double margin = 0.5);

/// Same for a finite sum of products sum_i f1_i (x) f2_i.
cplx pair_kalpha(const Dimension& dim, cplx alpha,
                 const std::vector<std::pair<HarmonicCoeffs, HarmonicCoeffs>>& terms, double margin = 0.5);

/// Ring fit of alpha -> (k_alpha, f1 (x) f2) at alpha = -rho - 2k.
LaurentFit residue_pair_kalpha(const Dimension& dim, int k, const HarmonicCoeffs& f1, const HarmonicCoeffs& f2,
                               RingOptions ring = {});

enum class Variable { first, second };

/// int_S R_k^{(v)} (f1 (x) f2)(x, x) dsigma by grid quadrature: R_k applied to
/// f1 (first) or f2 (second), product integrated on a grid exact for the data.
cplx kalpha_residue_on_diagonal(const Dimension& dim, int k, const HarmonicCoeffs& f1, const HarmonicCoeffs& f2,
                                Variable v);

}  // namespace conftri
