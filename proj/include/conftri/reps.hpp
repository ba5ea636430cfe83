#pragma once

// Spherical principal series pi_lambda(g) f(x) = kappa(g^{-1}, x)^{rho+lambda} f(g^{-1}(x))
// on S^2. Pullbacks are evaluated by harmonic synthesis at the mapped points,
// never by interpolation between grid nodes.

#include "conftri/lorentz.hpp"
#include "conftri/sphgrid.hpp"

namespace conftri {

/// The parameter lambda of pi_lambda.
struct RepParameter {
    cplx lambda;
};

/// kappa^z for kappa > 0 (principal branch of the real logarithm).
inline cplx real_power(double kappa, cplx z) { return std::exp(z * std::log(kappa)); }

Vec3 act3(const ConformalMap& g, const Vec3& x);
double kappa3(const ConformalMap& g, const Vec3& x);

/// Exact pointwise pi_lambda(g) f.
SphereFunction pi_function(const Dimension& dim, RepParameter lambda, const ConformalMap& g, SphereFunction f);

/// pi_lambda(g) f sampled on grid, f given by band-limited coefficients.
GridFunction pi_act(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& f,
                    const GridPtr& grid);
/// pi_lambda(g) f for grid data: analysed at the grid's degree, then pulled back.
GridFunction pi_act(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const GridFunction& f);

/// | int pi_lambda(g) f . phi - int f . pi_{-lambda}(g^{-1}) phi |, both by quadrature on grid.
double duality_defect(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& f,
                      const HarmonicCoeffs& phi, const GridPtr& grid);

/// ||R_k pi_{-k}(g) f - pi_k(g) R_k f||_2 / ||f||_2. pi_{-k}(g) f is sampled on a
/// grid of degree `truncation` (>= f.L()), expanded to that degree, and R_k is
/// applied spectrally; both sides are compared on the same grid.
double intertwining_defect(const Dimension& dim, int k, const ConformalMap& g, const HarmonicCoeffs& f, int truncation);

/// (pi_lambda(g) delta_1, phi) = kappa(g, 1)^{rho - lambda} phi(g(1)).
cplx dirac_pair(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& phi);

/// The same pairing through the dual action: (delta_1, pi_{-lambda}(g^{-1}) phi).
cplx dirac_pair_dual(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& phi);

}  // namespace conftri
