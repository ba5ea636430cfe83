#include "conftri/reps.hpp"

#include "conftri/spectral_ops.hpp"

namespace conftri {

namespace {

void require_s2(const Dimension& dim, const ConformalMap& g) {
    if (dim.n() != 3 || g.n() != 3) throw Error("principal series on grids is implemented for n = 3 only");
}

}  // namespace

Vec3 act3(const ConformalMap& g, const Vec3& x) {
    const auto& m = g.matrix();
    const double l0 = m(0, 0) + m.row(0).tail<3>().dot(x);
    Vec3 y = (m.block<3, 1>(1, 0) + m.block<3, 3>(1, 1) * x) / l0;
    return y / y.norm();
}

double kappa3(const ConformalMap& g, const Vec3& x) {
    const auto& m = g.matrix();
    return 1.0 / (m(0, 0) + m.row(0).tail<3>().dot(x));
}

SphereFunction pi_function(const Dimension& dim, RepParameter lambda, const ConformalMap& g, SphereFunction f) {
    require_s2(dim, g);
    const cplx expo = dim.rho() + lambda.lambda;
    return [ginv = g.inverse(), expo, f = std::move(f)](const Vec3& x) {
        return real_power(kappa3(ginv, x), expo) * f(act3(ginv, x));
    };
}

GridFunction pi_act(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& f,
                    const GridPtr& grid) {
    require_s2(dim, g);
    const ConformalMap ginv = g.inverse();
    const cplx expo = dim.rho() + lambda.lambda;
    GridFunction out(grid);
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j) {
            const Vec3 x = grid->point(i, j);
            out.values(i, j) = real_power(kappa3(ginv, x), expo) * synthesize(f, act3(ginv, x));
        }
    return out;
}

GridFunction pi_act(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const GridFunction& f) {
    return pi_act(dim, lambda, g, sht_forward(f), f.grid);
}

double duality_defect(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& f,
                      const HarmonicCoeffs& phi, const GridPtr& grid) {
    const GridFunction pf = pi_act(dim, lambda, g, f, grid);
    const GridFunction pphi = pi_act(dim, {-lambda.lambda}, g.inverse(), phi, grid);
    const GridFunction fs = sht_inverse(f, grid);
    const GridFunction phis = sht_inverse(phi, grid);
    const cplx lhs = quad(GridFunction(grid, pf.values * phis.values));
    const cplx rhs = quad(GridFunction(grid, fs.values * pphi.values));
    return std::abs(lhs - rhs);
}

double intertwining_defect(const Dimension& dim, int k, const ConformalMap& g, const HarmonicCoeffs& f,
                           int truncation) {
    if (truncation < f.L()) throw Error("intertwining_defect: truncation below the degree of f");
    const GridPtr grid = make_grid(truncation);
    const GridFunction moved = pi_act(dim, {-double(k)}, g, f, grid);
    const GridFunction lhs = sht_inverse(residue_operator_apply(dim, k, sht_forward(moved, truncation)), grid);
    const GridFunction rhs = pi_act(dim, {double(k)}, g, residue_operator_apply(dim, k, f), grid);
    return l2_norm(GridFunction(grid, lhs.values - rhs.values)) / l2_norm(sht_inverse(f, grid));
}

cplx dirac_pair(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& phi) {
    require_s2(dim, g);
    const Vec3 one(1.0, 0.0, 0.0);
    return real_power(kappa3(g, one), dim.rho() - lambda.lambda) * synthesize(phi, act3(g, one));
}

cplx dirac_pair_dual(const Dimension& dim, RepParameter lambda, const ConformalMap& g, const HarmonicCoeffs& phi) {
    const SphereFunction dual = pi_function(dim, {-lambda.lambda}, g.inverse(), as_function(phi));
    return dual(Vec3(1.0, 0.0, 0.0));
}

}  // namespace conftri
