#include "conftri/mero.hpp"

#include <cmath>
#include <numbers>

#include "conftri/special.hpp"

namespace conftri {

namespace {

constexpr double kPoleGuard = 1e-6;

void require_off_pole(const Dimension& dim, cplx s, const char* what) {
    const double shifted = -(s.real() + (dim.n() - 1)) / 2.0;
    if (shifted < -0.5) return;
    const double k = std::max(0.0, std::round(shifted));
    if (std::abs(s - hs_pole(dim, int(k))) < kPoleGuard)
        throw Error(std::string(what) + ": parameter within 1e-6 of a pole");
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

LaurentFit residue_ring(const ComplexFunction& F, cplx center, double radius, int m) {
    if (m < 8) throw Error("residue_ring: ring size must be >= 8");
    if (!(radius > 0.0)) throw Error("residue_ring: radius must be positive");
    special::CompensatedSum<cplx> a0, am1, am2;
    for (int j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi * (j + 0.5) / m;
        const cplx u = std::polar(1.0, th);
        const cplx v = F(center + radius * u);
        if (!finite(v)) throw Error("residue_ring: non-finite sample");
        a0.add(v);
        am1.add(v * u);
        am2.add(v * u * u);
    }
    LaurentFit fit;
    fit.center = center;
    fit.radius = radius;
    fit.ring_size = m;
    fit.regular_value = a0.value() / double(m);
    fit.residue = radius * am1.value() / double(m);
    const cplx a_m2 = radius * radius * am2.value() / double(m);
    const double res_abs = std::abs(fit.residue);
    fit.condition = res_abs > 0.0 ? std::abs(a_m2) / (radius * res_abs) : std::numeric_limits<double>::infinity();
    fit.location = res_abs > 0.0 ? center + a_m2 / fit.residue : center;
    return fit;
}

cplx hs_pole(const Dimension& dim, int k) { return -(dim.n() - 1.0) - 2.0 * k; }

cplx pair_hs_projections(const Dimension& dim, cplx s, const Eigen::VectorXcd& proj_at_one, double margin) {
    require_off_pole(dim, s, "pair_hs");
    const int L = int(proj_at_one.size()) - 1;
    if (L < 0) return 0.0;
    const Eigen::VectorXcd e = riesz_multipliers(dim, s, L, margin);
    special::CompensatedSum<cplx> sum;
    for (int l = 0; l <= L; ++l) sum.add(e(l) * proj_at_one(l));
    return sum.value();
}

Eigen::VectorXcd projections_at_base(const HarmonicCoeffs& f) {
    Eigen::VectorXcd p(f.L() + 1);
    for (int l = 0; l <= f.L(); ++l) p(l) = f(l, 0) * std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi));
    return p;
}

cplx pair_hs(const Dimension& dim, cplx s, const HarmonicCoeffs& f, double margin) {
    if (dim.n() != 3) throw Error("pair_hs: harmonic coefficients are defined on S^2 (n = 3)");
    return pair_hs_projections(dim, s, projections_at_base(f), margin);
}

LaurentFit residue_pair_hs(const Dimension& dim, int k, const HarmonicCoeffs& f, RingOptions ring) {
    if (k < 0) throw Error("residue_pair_hs: k must be >= 0");
    if (dim.n() != 3) throw Error("residue_pair_hs: harmonic coefficients are defined on S^2 (n = 3)");
    const Eigen::VectorXcd proj = projections_at_base(f);
    return residue_ring([&](cplx s) { return pair_hs_projections(dim, s, proj); }, hs_pole(dim, k), ring.radius,
                        ring.size);
}

cplx residue_pair_hs_expected(const Dimension& dim, int k, const HarmonicCoeffs& f) {
    const Eigen::VectorXcd proj = projections_at_base(f);
    cplx v = 0.0;
    for (int l = 0; l <= f.L(); ++l) v += riesz_multiplier_residue(dim, k, l) * proj(l);
    return v;
}

namespace {

// sum_m c1(l,m) (-1)^m c2(l,-m) = int (degree-l part of f1) f2.
Eigen::VectorXcd degree_products(const HarmonicCoeffs& f1, const HarmonicCoeffs& f2) {
    const int L = std::min(f1.L(), f2.L());
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(L + 1);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) p(l) += (m % 2 ? -1.0 : 1.0) * f1(l, m) * f2(l, -m);
    return p;
}

}  // namespace

cplx pair_kalpha(const Dimension& dim, cplx alpha, const HarmonicCoeffs& f1, const HarmonicCoeffs& f2,
                 double margin) {
    return pair_kalpha(dim, alpha, {{f1, f2}}, margin);
}

cplx pair_kalpha(const Dimension& dim, cplx alpha,
                 const std::vector<std::pair<HarmonicCoeffs, HarmonicCoeffs>>& terms, double margin) {
    if (dim.n() != 3) throw Error("pair_kalpha: harmonic coefficients are defined on S^2 (n = 3)");
    const cplx s = alpha - dim.rho();
    require_off_pole(dim, s, "pair_kalpha");
    int L = 0;
    for (const auto& t : terms) L = std::max(L, std::min(t.first.L(), t.second.L()));
    const Eigen::VectorXcd e = riesz_multipliers(dim, s, L, margin);
    special::CompensatedSum<cplx> sum;
    for (const auto& [f1, f2] : terms) {
        const Eigen::VectorXcd p = degree_products(f1, f2);
        for (Eigen::Index l = 0; l < p.size(); ++l) sum.add(e(l) * p(l));
    }
    return sum.value();
}

LaurentFit residue_pair_kalpha(const Dimension& dim, int k, const HarmonicCoeffs& f1, const HarmonicCoeffs& f2,
                               RingOptions ring) {
    if (k < 0) throw Error("residue_pair_kalpha: k must be >= 0");
    return residue_ring([&](cplx a) { return pair_kalpha(dim, a, f1, f2); }, -dim.rho() - 2.0 * k, ring.radius,
                        ring.size);
}

cplx kalpha_residue_on_diagonal(const Dimension& dim, int k, const HarmonicCoeffs& f1, const HarmonicCoeffs& f2,
                                Variable v) {
    const int L = std::max(f1.L(), f2.L());
    const GridPtr grid = make_grid(std::max(1, L));
    const HarmonicCoeffs a = v == Variable::first ? residue_operator_apply(dim, k, f1) : f1;
    const HarmonicCoeffs b = v == Variable::second ? residue_operator_apply(dim, k, f2) : f2;
    const GridFunction ga = sht_inverse(a, grid), gb = sht_inverse(b, grid);
    return quad(GridFunction(grid, ga.values * gb.values));
}

}  // namespace conftri
