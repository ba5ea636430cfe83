#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conftri/mero.hpp"
#include "conftri/special.hpp"
#include "conftri/spectral_ops.hpp"

using namespace conftri;
using std::numbers::pi;

namespace {

cplx riesz_closed(cplx s, int l) {
    const cplx h = s / 2.0;
    const double sign = l % 2 ? -1.0 : 1.0;
    return sign * 2 * pi * std::pow(2.0, s + 1.0) * special::gamma(h + 1.0) * special::gamma(h + 1.0) *
           special::rgamma(h + double(l) + 2.0) * special::rgamma(h - double(l) + 1.0);
}

HarmonicCoeffs single(int L, int l, int m, cplx v = 1.0) {
    HarmonicCoeffs c(L);
    c(l, m) = v;
    return c;
}

}  // namespace

TEST_CASE("ring fit recovers a known Laurent expansion") {
    const auto F = [](cplx z) { return 3.0 / (z - 1.0) + 2.0 + z * z; };
    const LaurentFit fit = residue_ring(F, 1.0, 0.1, 16);
    CHECK(std::abs(fit.residue - 3.0) <= 1e-13);
    CHECK(std::abs(fit.regular_value - 3.0) <= 1e-13);
    CHECK(fit.condition <= 1e-12);
    // a double pole shows up in the condition number
    const LaurentFit bad = residue_ring([](cplx z) { return 1.0 / (z * z) + 1.0 / z; }, 0.0, 0.1, 16);
    CHECK(bad.condition > 1.0);
    CHECK_THROWS_AS(residue_ring(F, 1.0, -0.1), Error);
}

TEST_CASE("pair_hs against the closed forms") {
    const Dimension d3(3);
    for (cplx s : {cplx(2.0), cplx(0.5), cplx(-1.5, 0.3), cplx(-3.2, 0.4)}) {
        const cplx area = 4.0 * pi * std::pow(2.0, s) * special::gamma(s / 2.0 + 1.0) * special::rgamma(s / 2.0 + 2.0);
        CHECK(std::abs(pair_hs(d3, s, single(0, 0, 0, std::sqrt(4 * pi))) - area) <= 1e-9 * std::abs(area));
        // degree-l data: (h_s, f) = e_l(s) f(1)
        for (int l = 1; l <= 4; ++l) {
            const HarmonicCoeffs f = single(4, l, 0);
            const cplx ref = riesz_closed(s, l) * spherical_harmonic(l, 0, Vec3(1, 0, 0));
            CHECK(std::abs(pair_hs(d3, s, f) - ref) <= 1e-9 * std::abs(riesz_closed(s, 0)));
            // non-zonal data vanishes at the base point
            CHECK(std::abs(pair_hs(d3, s, single(4, l, 1))) <= 1e-14 * std::abs(riesz_closed(s, 0)));
        }
    }
}

TEST_CASE("pair_hs against a direct integral") {
    const Dimension d3(3);
    const HarmonicCoeffs c = random_coeffs(5, 19);
    const SphereFunction f = as_function(c);
    const GridPtr g = make_grid(60);
    for (cplx s : {cplx(2.0), cplx(4.0), cplx(1.3, 0.5)}) {
        const cplx direct = quad(sample(g, [&](const Vec3& x) {
            return std::pow(cplx((x - Vec3(1, 0, 0)).norm()), s) * f(x);
        }));
        CHECK(std::abs(pair_hs(d3, s, c) - direct) <= 1e-6 * std::abs(direct));
    }
}

TEST_CASE("pole locations") {
    CHECK(hs_pole(Dimension(3), 0) == cplx(-2.0));
    CHECK(hs_pole(Dimension(5), 2) == cplx(-8.0));
}

TEST_CASE("ring residues of pair_hs equal 2 c_k Delta_k f(1)") {
    const Dimension d3(3);
    for (int k = 0; k <= 2; ++k) {
        const HarmonicCoeffs f = random_coeffs(6, 100 + k);
        const LaurentFit fit = residue_pair_hs(d3, k, f);
        const cplx expected = residue_pair_hs_expected(d3, k, f);
        CHECK(std::abs(fit.residue - expected) <= 1e-8 * std::abs(expected));
        // the same value straight from the closed-form multipliers
        cplx ref = 0.0;
        const Eigen::VectorXcd proj = projections_at_base(f);
        for (int l = 0; l <= 6; ++l) {
            cplx r = 0.0;
            for (int j = 0; j < 64; ++j) {
                const cplx u = std::polar(1.0, 2 * pi * j / 64);
                r += riesz_closed(-2.0 - 2.0 * k + 0.2 * u, l) * 0.2 * u;
            }
            ref += r / 64.0 * proj(l);
        }
        CHECK(std::abs(expected - ref) <= 1e-10 * std::abs(ref));
    }
}

TEST_CASE("pair_kalpha on matched harmonics") {
    const Dimension d3(3);
    const cplx alpha(0.9, 0.2);
    for (int l = 0; l <= 3; ++l) {
        // f2 = conj(Y_l^m) = (-1)^m Y_l^{-m}
        const HarmonicCoeffs f1 = single(3, l, l), f2 = single(3, l, -l, l % 2 ? -1.0 : 1.0);
        const cplx ref = riesz_closed(alpha - 1.0, l);
        CHECK(std::abs(pair_kalpha(d3, alpha, f1, f2) - ref) <= 1e-9 * std::abs(ref));
    }
}

TEST_CASE("k_alpha residues on the diagonal") {
    const Dimension d3(3);
    const HarmonicCoeffs f1 = random_coeffs(4, 1), f2 = random_coeffs(4, 2);
    for (int k = 0; k <= 2; ++k) {
        const cplx a = kalpha_residue_on_diagonal(d3, k, f1, f2, Variable::first);
        const cplx b = kalpha_residue_on_diagonal(d3, k, f1, f2, Variable::second);
        CHECK(std::abs(a - b) <= 1e-11 * std::abs(a));
        // ring residue of alpha -> (k_alpha, f1 (x) f2) is 2 R_k paired on the diagonal
        const LaurentFit fit = residue_pair_kalpha(d3, k, f1, f2);
        CHECK(std::abs(fit.residue - 2.0 * a) <= 1e-8 * std::abs(a));
    }
}
