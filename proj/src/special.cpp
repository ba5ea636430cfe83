#include "conftri/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace conftri::special {

GaussRule gauss_legendre(int order) {
    if (order < 1) throw Error("gauss_legendre: order must be positive");
    GaussRule rule{Eigen::VectorXd(order), Eigen::VectorXd(order)};
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on the three-term recurrence.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Final derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes(i) = -x;
        rule.nodes(order - 1 - i) = x;
        rule.weights(i) = rule.weights(order - 1 - i) = w;
    }
    if (order % 2 == 1) rule.nodes(order / 2) = 0.0;
    return rule;
}

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re z >= 1/2.
cplx log_gamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczosCoeffs[0];
    for (int i = 1; i < 9; ++i) x += kLanczosCoeffs[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx gamma(cplx z) {
    if (z.real() < 0.5) {
        const cplx s = std::sin(std::numbers::pi * z);
        if (s == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
        return std::numbers::pi / (s * std::exp(log_gamma_right(1.0 - z)));
    }
    return std::exp(log_gamma_right(z));
}

cplx rgamma(cplx z) {
    if (z.real() < 0.5) {
        if (z.imag() == 0.0 && z.real() == std::round(z.real())) return 0.0;
        return std::sin(std::numbers::pi * z) * std::exp(log_gamma_right(1.0 - z)) / std::numbers::pi;
    }
    return std::exp(-log_gamma_right(z));
}

double sphere_area(int d) {
    const double h = 0.5 * (d + 1);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

void zonal_polynomials(const Dimension& dim, int lmax, double t, double* out) {
    const int n = dim.n();
    out[0] = 1.0;
    if (lmax >= 1) out[1] = t;
    for (int l = 2; l <= lmax; ++l)
        out[l] = ((2.0 * l + n - 4) * t * out[l - 1] - (l - 1.0) * out[l - 2]) / (l + n - 3.0);
}

}  // namespace conftri::special
