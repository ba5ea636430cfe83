#pragma once

#include <vector>

#include <Eigen/Dense>

#include "conftri/dimension.hpp"

namespace conftri::special {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussRule gauss_legendre(int order);

/// Complex Gamma function (Lanczos, g = 7, with reflection for Re z < 1/2).
/// Relative error is about 1e-14 away from the poles. Intended for closed-form
/// reference values only.
cplx gamma(cplx z);

/// 1 / Gamma(z), entire; exactly zero at the poles of Gamma.
cplx rgamma(cplx z);

/// Surface area of S^{d} (the unit sphere in R^{d+1}).
double sphere_area(int d);

/// Ultraspherical polynomials normalized to 1 at t = 1, for S^{n-1}:
/// C_l^{(n-2)/2}(t) / C_l^{(n-2)/2}(1), l = 0..lmax (Legendre P_l when n = 3).
/// Writes lmax + 1 values into out.
void zonal_polynomials(const Dimension& dim, int lmax, double t, double* out);

/// Neumaier compensated summation.
template <typename T>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <>
class CompensatedSum<cplx> {
public:
    void add(cplx x) {
        re_.add(x.real());
        im_.add(x.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<double> re_;
    CompensatedSum<double> im_;
};

}  // namespace conftri::special
