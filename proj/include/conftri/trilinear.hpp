#pragma once

// Conformally invariant trilinear forms on S^2.
//
//   K_alpha(f1,f2,f3) = iiint |x2-x3|^{-rho+a1} |x3-x1|^{-rho+a2} |x1-x2|^{-rho+a3}
//                       f1(x1) f2(x2) f3(x3)
//   T_k(f1,f2,f3)     = iint f3(x3) f2(x) Delta_k[f1(.) |x3-.|^{-rho+a2}](x) |x-x3|^{-rho+a1}
//
// with alpha = (a1, a2, a3) linked to lambda by a1 = -l1+l2+l3, a2 = l1-l2+l3,
// a3 = l1+l2-l3, and a3 = -rho-2k for T_k.

#include <array>
#include <string>
#include <vector>

#include "conftri/lorentz.hpp"
#include "conftri/mero.hpp"
#include "conftri/reps.hpp"
#include "conftri/sphgrid.hpp"

namespace conftri {

/// alpha and lambda triples, always kept consistent.
class ParameterTriple {
public:
    using Triple = std::array<cplx, 3>;

    static ParameterTriple from_alpha(const Triple& alpha);
    static ParameterTriple from_lambda(const Triple& lambda);

    const Triple& alpha() const { return alpha_; }
    const Triple& lambda() const { return lambda_; }
    cplx alpha(int j) const { return alpha_[j]; }
    cplx lambda(int j) const { return lambda_[j]; }

private:
    ParameterTriple(const Triple& a, const Triple& l) : alpha_(a), lambda_(l) {}
    Triple alpha_;
    Triple lambda_;
};

ParameterTriple alpha_from_lambda(const ParameterTriple::Triple& lambda);
ParameterTriple lambda_from_alpha(const ParameterTriple::Triple& alpha);

enum class KMethod { direct, fast };
const char* to_string(KMethod m);

struct TrilinearOptions {
    int n_theta = 24;
    int n_phi = 48;
    /// Required margin inside Re a_j > -rho, Re(a1+a2+a3) > -rho.
    double margin = 0.25;
};

/// Throws unless alpha lies in the absolute-convergence region with margin.
void require_convergent(const Dimension& dim, const ParameterTriple& alpha, double margin);

/// Product-grid quadrature of K_alpha. `direct` sums the triple product rule
/// exactly (azimuthal circulant structure accelerates the sum; the value is
/// the full N^3 node sum). `fast` convolves with k_{a1} by Funk-Hecke
/// multipliers for each x1 node.
cplx K_form(const ParameterTriple& alpha, const SphereFunction& f1, const SphereFunction& f2,
            const SphereFunction& f3, KMethod method = KMethod::direct, const TrilinearOptions& opts = {});

/// Relative change of K_alpha under (pi_l1(g), pi_l2(g), pi_l3(g)).
double K_invariance_defect(const ParameterTriple& alpha, const ConformalMap& g, const SphereFunction& f1,
                           const SphereFunction& f2, const SphereFunction& f3, const TrilinearOptions& opts = {});

/// K_alpha as a meromorphic function of a3 with (a1, a2) fixed: the x3 integral
/// is done by quadrature, and the (x1, x2) kernel |x1-x2|^{-rho+a3} is applied
/// spectrally around each x1 through the continued Riesz multipliers.
class KAlphaInA3 {
public:
    KAlphaInA3(cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2, const SphereFunction& f3,
               const TrilinearOptions& opts = {});
    cplx operator()(cplx a3) const;
    /// Residue at a3 = -rho - 2k from the exact residues of the multipliers, 2 c_k Delta_k.
    cplx residue_exact(int k) const;

private:
    Eigen::VectorXcd degree_sums_;  // S_l = sum_x1 w f1(x1) proj_l[phi_x1](x1)
};

struct TFormOptions {
    int n_theta = 24;  ///< outer x3 grid
    int n_phi = 48;
    int inner_L = 48;  ///< truncation for Delta_k of the inner function
    bool estimate_truncation = true;
};

struct TFormResult {
    cplx value;
    /// |value - value computed with half the inner truncation|.
    double truncation_error_estimate;
};

/// Direct regime: Re(-rho + a2) > 2k + 1 and Re a1 > -rho + 1/4.
void require_T_direct(int k, cplx a1, cplx a2);

TFormResult T_form(int k, cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                   const SphereFunction& f3, const TFormOptions& opts = {});

/// Relative change of T_k under pi_lambda(g) with lambda from (a1, a2, -rho-2k).
double T_invariance_defect(int k, cplx a1, cplx a2, const ConformalMap& g, const SphereFunction& f1,
                           const SphereFunction& f2, const SphereFunction& f3, const TFormOptions& opts = {});

struct RegresReport {
    LaurentFit ring;     ///< ring fit of a3 -> K_alpha
    cplx T_value;        ///< T_k
    cplx predicted;      ///< c_k T_k
    double defect;       ///< |ring.residue - predicted| / |predicted|
    /// Same against 2 c_k T_k, the residue normalization of the Riesz multipliers.
    double normalized_defect;
};

RegresReport regres(int k, cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                    const SphereFunction& f3, double ring_radius = 0.15, const TrilinearOptions& kopts = {},
                    const TFormOptions& topts = {});

double regres_defect(int k, cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                     const SphereFunction& f3, double ring_radius = 0.15);

/// Sup-norm relative defect, over the nodes of grid, of
/// F_{x3}[pi_l1(g) f1] = kappa(g, y3)^{(-rho+a2)/2} pi_{-k}(g) F_{y3}[f1], x3 = g(y3),
/// with l1 = -k - rho/2 + a2/2.
double lemma_astuce_defect(int k, cplx a2, const ConformalMap& g, const SphereFunction& f1, const Vec3& x3,
                           const GridPtr& grid);

/// Tangential gradient of f at x by fourth-order central differences along great circles.
Eigen::Vector3cd surface_gradient(const SphereFunction& f, const Vec3& x, double h = 1e-3);

/// Relative defect between a spectral Delta_x[|x-y|^s phi(x)] (expansion to degree L)
/// and |x-y|^{s-2} psi(x,y,s) assembled from the product rule.
double derker_split_defect(cplx s, const HarmonicCoeffs& phi, const Vec3& x, const Vec3& y, int L = 96);

/// Relative defect of [Delta_x + (s/2)(s/2+1)] |x-y|^s = s^2 |x-y|^{s-2} at one pair (n = 3).
double bernstein_kernel_defect(cplx s, const Vec3& x, const Vec3& y, int L = 96);

// ---------------------------------------------------------------------------
// Closed forms for f1 = f2 = f3 = 1 (up to one global constant).

/// Gamma-ratio expression for K_alpha(1,1,1).
cplx K111_closed_form(const Dimension& dim, const ParameterTriple& alpha);
/// Residue expression at a3 = -rho-2k (Gamma form).
cplx K111_residue_closed_form(const Dimension& dim, int k, cplx a1, cplx a2);
/// The same residue written with the polynomial prefactor.
cplx K111_residue_product_form(const Dimension& dim, int k, cplx a1, cplx a2);

enum class PoleFamily { alpha1, alpha2, alpha3, sum, T_k_line, unexpected };
const char* to_string(PoleFamily f);

struct PoleReport {
    PoleFamily family;
    int index;         ///< k for the plane/line
    cplx location;     ///< scanned-variable value
    cplx residue;
    std::string description;
};

enum class ScanVariable { alpha1, alpha2, alpha3, alpha_sum_T };

struct ScanSpec {
    ScanVariable variable = ScanVariable::alpha3;
    Dimension dim{3};
    ParameterTriple::Triple fixed{};  ///< values of the non-scanned alphas (for alpha_sum_T: fixed[1] = a2)
    int k = 1;                        ///< T_k line scans only
    double from = -6.5;
    double to = 0.5;
    double radius = 0.05;
    int ring_size = 32;
    double threshold = 1e-6;
};

/// Ring-fit scan of the closed forms along the real segment [from, to].
std::vector<PoleReport> pole_scan(const ScanSpec& spec);

/// Theoretical pole locations in the scanned variable inside [from, to].
std::vector<std::pair<PoleFamily, double>> expected_poles(const ScanSpec& spec);

}  // namespace conftri
