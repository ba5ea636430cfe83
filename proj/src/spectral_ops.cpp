#include "conftri/spectral_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace conftri {

const char* to_string(MultiplierKind kind) {
    switch (kind) {
        case MultiplierKind::identity: return "identity";
        case MultiplierKind::laplacian: return "laplacian";
        case MultiplierKind::gjms: return "gjms";
        case MultiplierKind::bernstein: return "bernstein";
        case MultiplierKind::knapp_stein: return "knapp_stein";
        case MultiplierKind::residue: return "residue";
    }
    return "unknown";
}

double laplacian_multiplier(const Dimension& dim, int l) {
    if (l < 0) throw Error("laplacian_multiplier: negative degree");
    return -double(l) * (l + dim.n() - 2);
}

double gjms_multiplier(const Dimension& dim, int k, int l) {
    if (k < 0) throw Error("gjms_multiplier: k must be >= 0");
    const double rho = dim.rho();
    const double lap = laplacian_multiplier(dim, l);
    double v = 1.0;
    for (int j = 1; j <= k; ++j) v *= lap - (rho + j - 1) * (rho - j);
    return v;
}

GjmsConstant gjms_constant(const Dimension& dim, int k) {
    if (k < 0) throw Error("gjms_constant: k must be >= 0");
    const double rho = dim.rho();
    const double c = std::pow(std::numbers::pi, rho) /
                     (std::pow(4.0, k) * std::tgamma(rho + k) * std::tgamma(k + 1.0));
    return {k, c};
}

namespace {

template <typename F>
MultiplierFamily tabulate(const Dimension& dim, int L, cplx param, MultiplierKind kind, F&& f) {
    if (L < 0) throw Error("multiplier family: negative degree");
    Eigen::VectorXcd v(L + 1);
    for (int l = 0; l <= L; ++l) v(l) = f(l);
    return {dim, L, std::move(v), param, kind};
}

}  // namespace

MultiplierFamily identity_family(const Dimension& dim, int L) {
    return tabulate(dim, L, 0.0, MultiplierKind::identity, [](int) { return cplx(1.0); });
}

MultiplierFamily laplacian_family(const Dimension& dim, int L) {
    return tabulate(dim, L, 0.0, MultiplierKind::laplacian,
                    [&](int l) { return cplx(laplacian_multiplier(dim, l)); });
}

MultiplierFamily gjms_family(const Dimension& dim, int k, int L) {
    return tabulate(dim, L, double(k), MultiplierKind::gjms,
                    [&](int l) { return cplx(gjms_multiplier(dim, k, l)); });
}

double riesz_multiplier_residue(const Dimension& dim, int k, int l) {
    return 2.0 * gjms_constant(dim, k).c * gjms_multiplier(dim, k, l);
}

MultiplierFamily residue_family(const Dimension& dim, int k, int L) {
    const double c = gjms_constant(dim, k).c;
    return tabulate(dim, L, double(k), MultiplierKind::residue,
                    [&](int l) { return cplx(c * gjms_multiplier(dim, k, l)); });
}

MultiplierFamily bernstein_family(const Dimension& dim, cplx s, int L) {
    const cplx shift = 0.5 * s * (0.5 * s + double(dim.n() - 2));
    return tabulate(dim, L, s, MultiplierKind::bernstein,
                    [&](int l) { return laplacian_multiplier(dim, l) + shift; });
}

MultiplierFamily knapp_stein_family(const Dimension& dim, cplx alpha, int L, double margin) {
    return {dim, L, riesz_multipliers(dim, alpha - dim.rho(), L, margin), alpha, MultiplierKind::knapp_stein};
}

HarmonicCoeffs apply_multiplier(const MultiplierFamily& fam, const HarmonicCoeffs& c) {
    if (fam.dim.n() != 3) throw Error("apply_multiplier: coefficient vectors live on S^2 (n = 3)");
    if (fam.L < c.L()) throw Error("apply_multiplier: family degree below coefficient degree");
    HarmonicCoeffs out = c;
    for (int l = 0; l <= c.L(); ++l)
        for (int m = -l; m <= l; ++m) out(l, m) *= fam.values(l);
    return out;
}

HarmonicCoeffs bernstein_apply(const Dimension& dim, cplx s, const HarmonicCoeffs& f) {
    return apply_multiplier(bernstein_family(dim, s, f.L()), f);
}

HarmonicCoeffs residue_operator_apply(const Dimension& dim, int k, const HarmonicCoeffs& f) {
    return apply_multiplier(residue_family(dim, k, f.L()), f);
}

int descent_steps(const Dimension& dim, cplx s, double margin) {
    const double floor = -(dim.n() - 1) + margin;
    if (s.real() > floor) return 0;
    return int(std::floor((floor - s.real()) / 2.0)) + 1;
}

cplx descent_factor(const Dimension& dim, cplx s, int l) {
    constexpr double kZeroGuard = 1e-6;
    const double n = dim.n();
    if (std::abs(s) < kZeroGuard || std::abs(s + (n - 3)) < kZeroGuard)
        throw DescentError("Bernstein descent passes within 1e-6 of a zero of s(s+n-3) at s = (" +
                           std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                           "); perturb alpha off the real axis");
    const cplx num = laplacian_multiplier(dim, l) + 0.5 * s * (0.5 * s + (n - 2));
    return num / (s * (s + (n - 3)));
}

namespace {

class MultiplierCache {
public:
    using Key = std::tuple<int, double, double, int, double>;

    template <typename Build>
    Eigen::VectorXcd get(const Key& key, Build&& build) {
        {
            std::lock_guard lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        Eigen::VectorXcd v = build();
        std::lock_guard lock(mutex_);
        if (table_.size() > 4096) table_.clear();
        table_.emplace(key, v);
        return v;
    }

private:
    std::mutex mutex_;
    std::map<Key, Eigen::VectorXcd> table_;
};

MultiplierCache& cache() {
    static MultiplierCache c;
    return c;
}

}  // namespace

Eigen::VectorXcd riesz_multipliers_descent(const Dimension& dim, cplx s, int lmax, int steps, double margin) {
    if (steps < 0) throw Error("riesz_multipliers_descent: negative step count");
    const cplx top = s + 2.0 * double(steps);
    Eigen::VectorXcd e = riesz_multipliers_direct(dim, top, lmax, margin);
    for (int j = steps; j >= 1; --j) {
        const cplx sj = s + 2.0 * double(j);
        for (int l = 0; l <= lmax; ++l) e(l) *= descent_factor(dim, sj, l);
    }
    return e;
}

Eigen::VectorXcd riesz_multipliers(const Dimension& dim, cplx s, int lmax, double margin) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw Error("riesz_multipliers: non-finite s");
    const MultiplierCache::Key key{dim.n(), s.real(), s.imag(), lmax, margin};
    return cache().get(key, [&] {
        return riesz_multipliers_descent(dim, s, lmax, descent_steps(dim, s, margin), margin);
    });
}

cplx knapp_stein_multiplier(const Dimension& dim, cplx alpha, int l, double margin) {
    if (l < 0) throw Error("knapp_stein_multiplier: negative degree");
    return riesz_multipliers(dim, alpha - dim.rho(), l, margin)(l);
}

}  // namespace conftri
