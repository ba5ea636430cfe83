#pragma once

// Rotation-invariant operators on the sphere, all diagonal on spherical
// harmonics: the Laplacian, the GJMS-type products Delta_k, the residue
// operators R_k = c_k Delta_k and the Knapp-Stein convolutions K_alpha with
// kernel |x-y|^{-rho+alpha}.

#include <Eigen/Dense>

#include "conftri/dimension.hpp"
#include "conftri/sphgrid.hpp"

namespace conftri {

enum class MultiplierKind { identity, laplacian, gjms, bernstein, knapp_stein, residue };

const char* to_string(MultiplierKind kind);

/// Multiplier values per degree l = 0..L.
struct MultiplierFamily {
    Dimension dim;
    int L;
    Eigen::VectorXcd values;
    cplx param;
    MultiplierKind kind;
};

/// Raised when a Bernstein descent step would divide by (nearly) zero.
class DescentError : public Error {
public:
    using Error::Error;
};

/// -l(l+n-2).
double laplacian_multiplier(const Dimension& dim, int l);

/// prod_{j=1..k} (-l(l+n-2) - (rho+j-1)(rho-j)); 1 for k = 0.
double gjms_multiplier(const Dimension& dim, int k, int l);

struct GjmsConstant {
    int k;
    double c;
};

/// c_k = pi^rho / (4^k Gamma(rho+k) Gamma(k+1)), so that R_k = c_k Delta_k.
GjmsConstant gjms_constant(const Dimension& dim, int k);

/// Residue of s -> e_l(s) at s = -(n-1)-2k. Equals 2 c_k Delta_k(l): the
/// factor Gamma(s/2 + rho) of the Riesz multipliers has residue 2 in s, so the
/// residue is twice the operator R_k = c_k Delta_k.
double riesz_multiplier_residue(const Dimension& dim, int k, int l);

MultiplierFamily identity_family(const Dimension& dim, int L);
MultiplierFamily laplacian_family(const Dimension& dim, int L);
MultiplierFamily gjms_family(const Dimension& dim, int k, int L);
MultiplierFamily residue_family(const Dimension& dim, int k, int L);
/// Bernstein-Sato operator Delta + (s/2)(s/2 + n - 2).
MultiplierFamily bernstein_family(const Dimension& dim, cplx s, int L);
MultiplierFamily knapp_stein_family(const Dimension& dim, cplx alpha, int L, double margin = 0.5);

/// c'(l,m) = fam(l) c(l,m); only defined on S^2 coefficient vectors.
HarmonicCoeffs apply_multiplier(const MultiplierFamily& fam, const HarmonicCoeffs& c);

HarmonicCoeffs bernstein_apply(const Dimension& dim, cplx s, const HarmonicCoeffs& f);
HarmonicCoeffs residue_operator_apply(const Dimension& dim, int k, const HarmonicCoeffs& f);

/// Number of downward Bernstein steps needed before Re(s + 2m) > -(n-1) + margin.
int descent_steps(const Dimension& dim, cplx s, double margin = 0.5);

/// Ratio e_l(s-2) / e_l(s) from the Bernstein-Sato identity. Throws
/// DescentError when |s| or |s+n-3| is below 1e-6.
cplx descent_factor(const Dimension& dim, cplx s, int l);

/// Riesz multipliers e_l(s) of |x-y|^s, l = 0..lmax: direct quadrature when
/// Re s > -(n-1) + margin, otherwise downward descent from the first directly
/// computable s + 2m. Tables are memoized.
Eigen::VectorXcd riesz_multipliers(const Dimension& dim, cplx s, int lmax, double margin = 0.5);

/// Same, but always starting `steps` levels up: e(s) from e(s + 2 steps).
Eigen::VectorXcd riesz_multipliers_descent(const Dimension& dim, cplx s, int lmax, int steps,
                                           double margin = 0.5);

/// Funk-Hecke eigenvalue of the Knapp-Stein kernel |x-y|^{-rho+alpha} on degree l.
cplx knapp_stein_multiplier(const Dimension& dim, cplx alpha, int l, double margin = 0.5);

}  // namespace conftri
