#include "conftri/trilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "conftri/special.hpp"
#include "conftri/spectral_ops.hpp"

namespace conftri {

ParameterTriple ParameterTriple::from_alpha(const Triple& a) {
    const Triple l{(a[1] + a[2]) / 2.0, (a[2] + a[0]) / 2.0, (a[0] + a[1]) / 2.0};
    return ParameterTriple(a, l);
}

ParameterTriple ParameterTriple::from_lambda(const Triple& l) {
    const Triple a{-l[0] + l[1] + l[2], l[0] - l[1] + l[2], l[0] + l[1] - l[2]};
    return ParameterTriple(a, l);
}

ParameterTriple alpha_from_lambda(const ParameterTriple::Triple& lambda) {
    return ParameterTriple::from_lambda(lambda);
}

ParameterTriple lambda_from_alpha(const ParameterTriple::Triple& alpha) { return ParameterTriple::from_alpha(alpha); }

const char* to_string(KMethod m) { return m == KMethod::direct ? "direct" : "fast"; }

void require_convergent(const Dimension& dim, const ParameterTriple& p, double margin) {
    const double rho = dim.rho();
    cplx sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        const cplx a = p.alpha(j);
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw Error("K_form: non-finite parameter");
        if (a.real() <= -rho + margin)
            throw Error("K_form: Re alpha_" + std::to_string(j + 1) +
                        " outside the convergence region (needs > -rho + margin)");
        sum += a;
    }
    if (sum.real() <= -rho + margin)
        throw Error("K_form: Re(alpha_1 + alpha_2 + alpha_3) outside the convergence region");
}

namespace {

constexpr double kPi = std::numbers::pi;

int wrap(int j, int N) { return ((j % N) + N) % N; }

// The coincident node is dropped for singular kernels; a zero exponent is the constant 1.
cplx chord_power(double d2, cplx a) {
    if (d2 > 0.0) return std::exp(0.5 * a * std::log(d2));
    return a == cplx(0.0) ? cplx(1.0) : cplx(0.0);
}

// |x - y|^a between grid nodes, which depends only on the two rings and the
// azimuth offset. raw[i*nt + i2](d) is the value between ring i at offset d
// and ring i2 at offset 0; hat[m] holds the matrices (i, i2) of the DFT in d.
struct KernelBlocks {
    int nt = 0, N = 0;
    std::vector<Eigen::VectorXcd> raw;
    std::vector<Eigen::MatrixXcd> hat;

    const Eigen::VectorXcd& at(int i, int i2) const { return raw[std::size_t(i) * nt + i2]; }
};

KernelBlocks kernel_blocks(const Grid& g, cplx a, bool with_hat) {
    KernelBlocks kb;
    kb.nt = g.n_theta();
    kb.N = g.n_phi();
    const int nt = kb.nt, N = kb.N;
    const auto& c = g.cos_theta();
    const auto& s = g.sin_theta();
    Eigen::VectorXd sin2(N);
    for (int d = 0; d < N; ++d) {
        const double h = std::sin(kPi * d / N);
        sin2(d) = h * h;
    }
    kb.raw.assign(std::size_t(nt) * nt, Eigen::VectorXcd());
    for (int i = 0; i < nt; ++i)
        for (int i2 = 0; i2 <= i; ++i2) {
            Eigen::VectorXcd v(N);
            const double dc = c(i) - c(i2), ds = s(i) - s(i2);
            for (int d = 0; d < N; ++d) v(d) = chord_power(dc * dc + ds * ds + 4.0 * s(i) * s(i2) * sin2(d), a);
            kb.raw[std::size_t(i) * nt + i2] = v;
            kb.raw[std::size_t(i2) * nt + i] = std::move(v);
        }
    if (with_hat) {
        Eigen::FFT<double> fft;
        kb.hat.assign(N, Eigen::MatrixXcd(nt, nt));
        std::vector<cplx> in(N), out(N);
        for (int i = 0; i < nt; ++i)
            for (int i2 = 0; i2 < nt; ++i2) {
                const auto& v = kb.at(i, i2);
                for (int d = 0; d < N; ++d) in[d] = v(d);
                fft.fwd(out, in);
                for (int m = 0; m < N; ++m) kb.hat[m](i, i2) = out[m];
            }
    }
    return kb;
}

// Row-wise DFT of an nt x N array.
Eigen::MatrixXcd rows_fwd(Eigen::FFT<double>& fft, const Eigen::MatrixXcd& a) {
    const int N = int(a.cols());
    Eigen::MatrixXcd out(a.rows(), N);
    std::vector<cplx> in(N), sp(N);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < N; ++j) in[j] = a(i, j);
        fft.fwd(sp, in);
        for (int j = 0; j < N; ++j) out(i, j) = sp[j];
    }
    return out;
}

Eigen::MatrixXcd rows_inv(Eigen::FFT<double>& fft, const Eigen::MatrixXcd& a) {
    const int N = int(a.cols());
    Eigen::MatrixXcd out(a.rows(), N);
    std::vector<cplx> in(N), sp(N);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < N; ++j) sp[j] = a(i, j);
        fft.inv(in, sp);
        for (int j = 0; j < N; ++j) out(i, j) = in[j];
    }
    return out;
}

// (A q) for the block-circulant kernel matrix of kb, q given in the DFT domain.
Eigen::MatrixXcd circulant_apply_hat(const KernelBlocks& kb, const Eigen::MatrixXcd& qhat) {
    Eigen::MatrixXcd r(kb.nt, kb.N);
    for (int m = 0; m < kb.N; ++m) r.col(m) = kb.hat[m] * qhat.col(m);
    return r;
}

Eigen::MatrixXcd sample_weighted(const Grid& g, const SphereFunction& f, bool weighted) {
    Eigen::MatrixXcd v(g.n_theta(), g.n_phi());
    for (int i = 0; i < g.n_theta(); ++i) {
        const double w = weighted ? g.area_weight(i) : 1.0;
        for (int j = 0; j < g.n_phi(); ++j) v(i, j) = w * f(g.point(i, j));
    }
    return v;
}

cplx K_direct(const Grid& g, const ParameterTriple& p, const SphereFunction& f1, const SphereFunction& f2,
              const SphereFunction& f3, double rho) {
    const int nt = g.n_theta(), N = g.n_phi();
    const KernelBlocks k1 = kernel_blocks(g, -rho + p.alpha(0), false);
    const KernelBlocks k2 = kernel_blocks(g, -rho + p.alpha(1), false);
    const KernelBlocks k3 = kernel_blocks(g, -rho + p.alpha(2), true);
    const Eigen::MatrixXcd u = sample_weighted(g, f1, true);
    const Eigen::MatrixXcd v = sample_weighted(g, f2, true);
    const Eigen::MatrixXcd z = sample_weighted(g, f3, true);
    Eigen::FFT<double> fft;
    Eigen::MatrixXcd pm(nt, N), qm(nt, N);
    special::CompensatedSum<cplx> total;
    for (int i3 = 0; i3 < nt; ++i3)
        for (int j3 = 0; j3 < N; ++j3) {
            const cplx zl = z(i3, j3);
            if (zl == 0.0) continue;
            for (int i = 0; i < nt; ++i) {
                const auto& r2 = k2.at(i3, i);
                const auto& r1 = k1.at(i, i3);
                for (int j = 0; j < N; ++j) {
                    const int d = wrap(j - j3, N);
                    pm(i, j) = u(i, j) * r2(d);
                    qm(i, j) = v(i, j) * r1(d);
                }
            }
            const Eigen::MatrixXcd ph = rows_fwd(fft, pm);
            const Eigen::MatrixXcd rh = circulant_apply_hat(k3, rows_fwd(fft, qm));
            // sum_j p_j r_j = (1/N) sum_m phat(-m) rhat(m)
            cplx acc = 0.0;
            for (int m = 0; m < N; ++m) acc += ph.col(wrap(-m, N)).cwiseProduct(rh.col(m)).sum();
            total.add(zl * acc / double(N));
        }
    return total.value();
}

cplx K_fast(const GridPtr& gp, const ParameterTriple& p, const SphereFunction& f1, const SphereFunction& f2,
            const SphereFunction& f3, const Dimension& dim) {
    const Grid& g = *gp;
    const int nt = g.n_theta(), N = g.n_phi();
    const double rho = dim.rho();
    const int L = g.L();
    const KernelBlocks k2 = kernel_blocks(g, -rho + p.alpha(1), false);
    const KernelBlocks k3 = kernel_blocks(g, -rho + p.alpha(2), false);
    const Eigen::VectorXcd e1 = riesz_multipliers(dim, -rho + p.alpha(0), L);
    const Eigen::MatrixXcd u = sample_weighted(g, f1, true);
    const Eigen::MatrixXcd v = sample_weighted(g, f2, true);
    const Eigen::MatrixXcd f3v = sample_weighted(g, f3, false);
    GridFunction gf(gp);
    special::CompensatedSum<cplx> total;
    for (int i1 = 0; i1 < nt; ++i1)
        for (int j1 = 0; j1 < N; ++j1) {
            if (u(i1, j1) == 0.0) continue;
            for (int i = 0; i < nt; ++i) {
                const auto& r2 = k2.at(i, i1);
                for (int j = 0; j < N; ++j) gf.values(i, j) = f3v(i, j) * r2(wrap(j - j1, N));
            }
            HarmonicCoeffs c = sht_forward(gf, L);
            for (int l = 0; l <= L; ++l)
                for (int m = -l; m <= l; ++m) c(l, m) *= e1(l);
            const GridFunction h = sht_inverse(c, gp);
            cplx acc = 0.0;
            for (int i = 0; i < nt; ++i) {
                const auto& r3 = k3.at(i, i1);
                for (int j = 0; j < N; ++j) acc += v(i, j) * r3(wrap(j - j1, N)) * h.values(i, j);
            }
            total.add(u(i1, j1) * acc);
        }
    return total.value();
}

}  // namespace

cplx K_form(const ParameterTriple& alpha, const SphereFunction& f1, const SphereFunction& f2,
            const SphereFunction& f3, KMethod method, const TrilinearOptions& opts) {
    const Dimension dim(3);
    require_convergent(dim, alpha, opts.margin);
    const GridPtr grid = make_grid(opts.n_theta, opts.n_phi);
    return method == KMethod::direct ? K_direct(*grid, alpha, f1, f2, f3, dim.rho())
                                     : K_fast(grid, alpha, f1, f2, f3, dim);
}

double K_invariance_defect(const ParameterTriple& alpha, const ConformalMap& g, const SphereFunction& f1,
                           const SphereFunction& f2, const SphereFunction& f3, const TrilinearOptions& opts) {
    const Dimension dim(3);
    const cplx base = K_form(alpha, f1, f2, f3, KMethod::direct, opts);
    const cplx moved = K_form(alpha, pi_function(dim, {alpha.lambda(0)}, g, f1),
                              pi_function(dim, {alpha.lambda(1)}, g, f2), pi_function(dim, {alpha.lambda(2)}, g, f3),
                              KMethod::direct, opts);
    return std::abs(moved - base) / std::abs(base);
}

KAlphaInA3::KAlphaInA3(cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                       const SphereFunction& f3, const TrilinearOptions& opts) {
    const Dimension dim(3);
    const double rho = dim.rho();
    if (a1.real() <= -rho + opts.margin || a2.real() <= -rho + opts.margin)
        throw Error("KAlphaInA3: Re alpha_1 and Re alpha_2 must exceed -rho + margin");
    const GridPtr gp = make_grid(opts.n_theta, opts.n_phi);
    const Grid& g = *gp;
    const int nt = g.n_theta(), N = g.n_phi(), L = g.L();
    const KernelBlocks k1 = kernel_blocks(g, -rho + a1, true);
    const KernelBlocks k2 = kernel_blocks(g, -rho + a2, false);
    const Eigen::MatrixXcd u = sample_weighted(g, f1, true);
    const Eigen::MatrixXcd f2v = sample_weighted(g, f2, false);
    const Eigen::MatrixXcd z = sample_weighted(g, f3, true);
    Eigen::FFT<double> fft;
    std::vector<special::CompensatedSum<cplx>> sums(L + 1);
    std::vector<double> ptab(tri_index(L, L) + 1);
    Eigen::MatrixXcd y(nt, N);
    GridFunction phi(gp);
    for (int i1 = 0; i1 < nt; ++i1) {
        legendre_table(L, g.cos_theta()(i1), g.sin_theta()(i1), ptab.data());
        for (int j1 = 0; j1 < N; ++j1) {
            if (u(i1, j1) == 0.0) continue;
            for (int i3 = 0; i3 < nt; ++i3) {
                const auto& r2 = k2.at(i3, i1);
                for (int j3 = 0; j3 < N; ++j3) y(i3, j3) = z(i3, j3) * r2(wrap(j3 - j1, N));
            }
            const Eigen::MatrixXcd F3 = rows_inv(fft, circulant_apply_hat(k1, rows_fwd(fft, y)));
            phi.values = (f2v.array() * F3.array());
            const HarmonicCoeffs c = sht_forward(phi, L);
            const double ph = g.phi(j1);
            for (int l = 0; l <= L; ++l) {
                cplx proj = ptab[tri_index(l, 0)] * c(l, 0);
                for (int m = 1; m <= l; ++m) {
                    const cplx e = std::polar(1.0, m * ph);
                    const double sign = m % 2 ? -1.0 : 1.0;
                    proj += ptab[tri_index(l, m)] * (c(l, m) * e + sign * c(l, -m) * std::conj(e));
                }
                sums[l].add(u(i1, j1) * proj);
            }
        }
    }
    degree_sums_.resize(L + 1);
    for (int l = 0; l <= L; ++l) degree_sums_(l) = sums[l].value();
}

cplx KAlphaInA3::operator()(cplx a3) const {
    const Dimension dim(3);
    const int L = int(degree_sums_.size()) - 1;
    const Eigen::VectorXcd e = riesz_multipliers(dim, -dim.rho() + a3, L);
    special::CompensatedSum<cplx> s;
    for (int l = 0; l <= L; ++l) s.add(e(l) * degree_sums_(l));
    return s.value();
}

cplx KAlphaInA3::residue_exact(int k) const {
    const Dimension dim(3);
    const int L = int(degree_sums_.size()) - 1;
    cplx s = 0.0;
    for (int l = 0; l <= L; ++l) s += riesz_multiplier_residue(dim, k, l) * degree_sums_(l);
    return s;
}

void require_T_direct(int k, cplx a1, cplx a2) {
    const double rho = Dimension(3).rho();
    if (k < 0) throw Error("T_form: k must be >= 0");
    if (!((-rho + a2).real() > 2.0 * k + 1.0) || !(a1.real() > -rho + 0.25))
        throw Error("T_form: (alpha_1, alpha_2) outside the direct regime Re(-rho+alpha_2) > 2k+1, "
                    "Re alpha_1 > -rho+1/4; elsewhere T_k exists only as a meromorphic continuation, "
                    "which is not evaluated numerically");
}

TFormResult T_form(int k, cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                   const SphereFunction& f3, const TFormOptions& opts) {
    require_T_direct(k, a1, a2);
    const Dimension dim(3);
    const double rho = dim.rho();
    const cplx e1 = -rho + a1, e2 = -rho + a2;
    const GridPtr outer = make_grid(opts.n_theta, opts.n_phi);
    const GridPtr fine = make_grid(opts.inner_L);
    const int Lf = opts.inner_L, Lh = Lf / 2;
    const Eigen::MatrixXcd f1v = sample_weighted(*fine, f1, false);
    const Eigen::MatrixXcd f2v = sample_weighted(*fine, f2, false);
    std::vector<Vec3> pts;
    pts.reserve(fine->size());
    for (int i = 0; i < fine->n_theta(); ++i)
        for (int j = 0; j < fine->n_phi(); ++j) pts.push_back(fine->point(i, j));
    Eigen::VectorXd dk(Lf + 1);
    for (int l = 0; l <= Lf; ++l) dk(l) = gjms_multiplier(dim, k, l);

    GridFunction F(fine), B(fine);
    special::CompensatedSum<cplx> full, half;
    for (int i3 = 0; i3 < outer->n_theta(); ++i3)
        for (int j3 = 0; j3 < outer->n_phi(); ++j3) {
            const Vec3 x3 = outer->point(i3, j3);
            const cplx w3 = outer->area_weight(i3) * f3(x3);
            if (w3 == 0.0) continue;
            std::size_t idx = 0;
            for (int i = 0; i < fine->n_theta(); ++i)
                for (int j = 0; j < fine->n_phi(); ++j, ++idx) {
                    const double d2 = (pts[idx] - x3).squaredNorm();
                    F.values(i, j) = f1v(i, j) * chord_power(d2, e2);
                    B.values(i, j) = f2v(i, j) * chord_power(d2, e1);
                }
            const HarmonicCoeffs cf = sht_forward(F, Lf);
            const HarmonicCoeffs cb = sht_forward(B, Lf);
            // quad(B * synth(Delta_k cf)) = sum dk(l) cf(l,m) (-1)^m cb(l,-m)
            cplx lo = 0.0, hi = 0.0;
            for (int l = 0; l <= Lf; ++l) {
                cplx t = 0.0;
                for (int m = -l; m <= l; ++m) t += (m % 2 ? -1.0 : 1.0) * cf(l, m) * cb(l, -m);
                (l <= Lh ? lo : hi) += dk(l) * t;
            }
            full.add(w3 * (lo + hi));
            half.add(w3 * lo);
        }
    TFormResult r;
    r.value = full.value();
    r.truncation_error_estimate = opts.estimate_truncation ? std::abs(full.value() - half.value()) : 0.0;
    return r;
}

double T_invariance_defect(int k, cplx a1, cplx a2, const ConformalMap& g, const SphereFunction& f1,
                           const SphereFunction& f2, const SphereFunction& f3, const TFormOptions& opts) {
    const Dimension dim(3);
    const auto p = ParameterTriple::from_alpha({a1, a2, -dim.rho() - 2.0 * k});
    TFormOptions o = opts;
    o.estimate_truncation = false;
    const cplx base = T_form(k, a1, a2, f1, f2, f3, o).value;
    const cplx moved = T_form(k, a1, a2, pi_function(dim, {p.lambda(0)}, g, f1),
                              pi_function(dim, {p.lambda(1)}, g, f2), pi_function(dim, {p.lambda(2)}, g, f3), o)
                           .value;
    return std::abs(moved - base) / std::abs(base);
}

RegresReport regres(int k, cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                    const SphereFunction& f3, double ring_radius, const TrilinearOptions& kopts,
                    const TFormOptions& topts) {
    const Dimension dim(3);
    require_T_direct(k, a1, a2);
    const KAlphaInA3 K(a1, a2, f1, f2, f3, kopts);
    RegresReport rep;
    rep.ring = residue_ring([&](cplx a3) { return K(a3); }, -dim.rho() - 2.0 * k, ring_radius, 16);
    rep.T_value = T_form(k, a1, a2, f1, f2, f3, topts).value;
    rep.predicted = gjms_constant(dim, k).c * rep.T_value;
    rep.defect = std::abs(rep.ring.residue - rep.predicted) / std::abs(rep.predicted);
    rep.normalized_defect = std::abs(rep.ring.residue - 2.0 * rep.predicted) / std::abs(2.0 * rep.predicted);
    return rep;
}

double regres_defect(int k, cplx a1, cplx a2, const SphereFunction& f1, const SphereFunction& f2,
                     const SphereFunction& f3, double ring_radius) {
    return regres(k, a1, a2, f1, f2, f3, ring_radius).defect;
}

double lemma_astuce_defect(int k, cplx a2, const ConformalMap& g, const SphereFunction& f1, const Vec3& x3,
                           const GridPtr& grid) {
    const Dimension dim(3);
    const double rho = dim.rho();
    const cplx e2 = -rho + a2;
    const cplx lambda1 = -double(k) - rho / 2.0 + a2 / 2.0;
    const Vec3 y3 = act3(g.inverse(), x3);
    const SphereFunction moved = pi_function(dim, {lambda1}, g, f1);
    const SphereFunction Fy3 = [&f1, y3, e2](const Vec3& y) { return f1(y) * chord_power((y3 - y).squaredNorm(), e2); };
    const SphereFunction rhs_inner = pi_function(dim, {-double(k)}, g, Fy3);
    const cplx factor = real_power(kappa3(g, y3), e2 / 2.0);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j) {
            const Vec3 x = grid->point(i, j);
            const cplx lhs = moved(x) * chord_power((x3 - x).squaredNorm(), e2);
            const cplx rhs = factor * rhs_inner(x);
            num = std::max(num, std::abs(lhs - rhs));
            den = std::max(den, std::abs(lhs));
        }
    return den > 0.0 ? num / den : num;
}

Eigen::Vector3cd surface_gradient(const SphereFunction& f, const Vec3& x, double h) {
    // orthonormal tangent frame at x
    const Vec3 a = std::abs(x(0)) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = (a - a.dot(x) * x).normalized();
    const Vec3 t2 = x.cross(t1);
    auto deriv = [&](const Vec3& t) {
        auto at = [&](double u) { return f(std::cos(u) * x + std::sin(u) * t); };
        return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
    };
    return deriv(t1) * t1.cast<cplx>() + deriv(t2) * t2.cast<cplx>();
}

double derker_split_defect(cplx s, const HarmonicCoeffs& phi, const Vec3& x, const Vec3& y, int L) {
    const Dimension dim(3);
    const double n = dim.n();
    const double d2 = (x - y).squaredNorm();
    if (!(d2 > 0.0)) throw Error("derker_split_defect: x and y must differ");
    // spectral side
    const GridPtr grid = make_grid(L);
    const SphereFunction phif = as_function(phi);
    const GridFunction G = sample(grid, [&](const Vec3& p) { return chord_power((p - y).squaredNorm(), s) * phif(p); });
    HarmonicCoeffs c = sht_forward(G, L);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) c(l, m) *= laplacian_multiplier(dim, l);
    const cplx spectral = synthesize(c, x);
    // product-rule side
    const Vec3 grad_d2 = -2.0 * (y - x.dot(y) * x);
    const cplx ph = phif(x);
    const Eigen::Vector3cd gphi = surface_gradient(phif, x);
    const HarmonicCoeffs lap = apply_multiplier(laplacian_family(dim, phi.L()), phi);
    const cplx lphi = synthesize(lap, x);
    const cplx t_bern = s * (s + n - 3.0) * ph;
    const cplx t_shift = -(s / 2.0) * (s / 2.0 + n - 2.0) * d2 * ph;
    const cplx t_grad = s * grad_d2.cast<cplx>().dot(gphi);  // dot() conjugates the first factor, which is real
    const cplx t_lap = d2 * lphi;
    const cplx pref = chord_power(d2, s - 2.0);
    const cplx explicit_value = pref * (t_bern + t_shift + t_grad + t_lap);
    const double scale = std::abs(pref) * (std::abs(t_bern) + std::abs(t_shift) + std::abs(t_grad) + std::abs(t_lap));
    return std::abs(spectral - explicit_value) / scale;
}

double bernstein_kernel_defect(cplx s, const Vec3& x, const Vec3& y, int L) {
    HarmonicCoeffs one(0);
    one(0, 0) = std::sqrt(4.0 * kPi);
    return derker_split_defect(s, one, x, y, L);
}

cplx K111_closed_form(const Dimension& dim, const ParameterTriple& p) {
    using special::gamma;
    using special::rgamma;
    const double rho = dim.rho();
    const cplx a1 = p.alpha(0), a2 = p.alpha(1), a3 = p.alpha(2);
    return gamma((a1 + a2 + a3 + rho) / 2.0) * gamma((a1 + rho) / 2.0) * gamma((a2 + rho) / 2.0) *
           gamma((a3 + rho) / 2.0) * rgamma(rho + (a2 + a3) / 2.0) * rgamma(rho + (a3 + a1) / 2.0) *
           rgamma(rho + (a1 + a2) / 2.0);
}

cplx K111_residue_closed_form(const Dimension& dim, int k, cplx a1, cplx a2) {
    using special::gamma;
    using special::rgamma;
    const double rho = dim.rho();
    const double sign = k % 2 ? -1.0 : 1.0;
    return sign / std::tgamma(k + 1.0) * gamma((a1 + a2) / 2.0 - double(k)) * gamma((a1 + rho) / 2.0) *
           gamma((a2 + rho) / 2.0) * rgamma((rho + a2) / 2.0 - double(k)) * rgamma((rho + a1) / 2.0 - double(k)) *
           rgamma(rho + (a1 + a2) / 2.0);
}

cplx K111_residue_product_form(const Dimension& dim, int k, cplx a1, cplx a2) {
    const double rho = dim.rho();
    cplx poly = (k % 2 ? -1.0 : 1.0) / std::tgamma(k + 1.0);
    for (int j = 1; j <= k; ++j) poly *= ((rho + a1) / 2.0 - double(j)) * ((rho + a2) / 2.0 - double(j));
    return poly * special::gamma((a1 + a2) / 2.0 - double(k)) * special::rgamma(rho + (a1 + a2) / 2.0);
}

const char* to_string(PoleFamily f) {
    switch (f) {
        case PoleFamily::alpha1: return "alpha1";
        case PoleFamily::alpha2: return "alpha2";
        case PoleFamily::alpha3: return "alpha3";
        case PoleFamily::sum: return "sum";
        case PoleFamily::T_k_line: return "T_k_line";
        case PoleFamily::unexpected: return "unexpected";
    }
    return "?";
}

namespace {

ComplexFunction scan_function(const ScanSpec& sp) {
    const int v = int(sp.variable);
    if (sp.variable == ScanVariable::alpha_sum_T)
        return [sp](cplx z) { return K111_residue_product_form(sp.dim, sp.k, z - sp.fixed[1], sp.fixed[1]); };
    return [sp, v](cplx z) {
        auto a = sp.fixed;
        a[v] = z;
        return K111_closed_form(sp.dim, ParameterTriple::from_alpha(a));
    };
}

struct Candidate {
    double location;
    int order;  // +1 for a Gamma pole in the numerator, -1 for a zero from 1/Gamma
    PoleFamily family;
    int index;
};

// Points z in [lo, hi] with (z * slope + offset) / 2 at a non-positive integer -j.
template <typename Fn>
void lattice(double slope, double offset, double lo, double hi, Fn&& emit) {
    // (slope z + offset)/2 = -j  =>  z = (-2j - offset) / slope
    for (int j = 0; j < 400; ++j) {
        const double z = (-2.0 * j - offset) / slope;
        if (z >= lo && z <= hi) emit(z, j);
    }
}

}  // namespace

std::vector<std::pair<PoleFamily, double>> expected_poles(const ScanSpec& sp) {
    const double rho = sp.dim.rho();
    const double lo = sp.from, hi = sp.to;
    std::vector<Candidate> cands;
    auto add = [&](double offset, int order, PoleFamily fam) {
        // argument (z + offset)/2 of a Gamma factor, as a function of the scanned z
        lattice(1.0, offset, lo, hi, [&](double z, int j) { cands.push_back({z, order, fam, j}); });
    };
    if (sp.variable == ScanVariable::alpha_sum_T) {
        // Gamma(z/2 - k) and 1/Gamma(rho + z/2) in z = a1 + a2
        add(-2.0 * sp.k, +1, PoleFamily::T_k_line);
        add(2.0 * rho, -1, PoleFamily::T_k_line);
    } else {
        const int v = int(sp.variable);
        double others = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != v) {
                if (std::abs(sp.fixed[j].imag()) > 0.0) throw Error("expected_poles: fixed parameters must be real");
                others += sp.fixed[j].real();
            }
        const PoleFamily own = v == 0 ? PoleFamily::alpha1 : v == 1 ? PoleFamily::alpha2 : PoleFamily::alpha3;
        add(rho, +1, own);                  // Gamma((a_v + rho)/2)
        add(rho + others, +1, PoleFamily::sum);  // Gamma((sum + rho)/2)
        for (int j = 0; j < 3; ++j)
            if (j != v) add(2.0 * rho + sp.fixed[j].real(), -1, own);  // 1/Gamma(rho + (a_v + a_j)/2)
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.location < b.location; });
    std::vector<std::pair<PoleFamily, double>> out;
    for (std::size_t i = 0; i < cands.size();) {
        std::size_t j = i;
        int order = 0;
        PoleFamily fam = PoleFamily::unexpected;
        while (j < cands.size() && std::abs(cands[j].location - cands[i].location) < 1e-9) {
            order += cands[j].order;
            if (cands[j].order > 0) fam = cands[j].family;
            ++j;
        }
        if (order > 0) out.emplace_back(fam, cands[i].location);
        i = j;
    }
    return out;
}

std::vector<PoleReport> pole_scan(const ScanSpec& sp) {
    if (!(sp.radius > 0.0) || !(sp.to > sp.from)) throw Error("pole_scan: invalid window");
    const ComplexFunction F = scan_function(sp);
    const double rho = sp.dim.rho();
    std::vector<PoleReport> found;
    const int steps = int(std::ceil((sp.to - sp.from) / sp.radius));
    for (int i = 0; i <= steps; ++i) {
        const double c = sp.from + i * sp.radius;
        double fmax = 0.0;
        const LaurentFit fit = residue_ring(
            [&](cplx z) {
                const cplx v = F(z);
                fmax = std::max(fmax, std::abs(v));
                return v;
            },
            c, sp.radius, sp.ring_size);
        if (!(std::abs(fit.residue) > sp.threshold * sp.radius * fmax)) continue;
        if (std::abs(fit.location - fit.center) > 0.5 * sp.radius) continue;
        const double loc = fit.location.real();
        if (loc < sp.from || loc > sp.to) continue;
        bool dup = false;
        for (auto& r : found)
            if (std::abs(r.location - fit.location) < 0.5 * sp.radius) dup = true;
        if (dup) continue;
        PoleReport r;
        r.location = fit.location;
        r.residue = fit.residue;
        r.family = PoleFamily::unexpected;
        r.index = -1;
        found.push_back(r);
    }
    // classify against the theoretical lattices
    const auto expected = expected_poles(sp);
    const char* var = sp.variable == ScanVariable::alpha_sum_T ? "alpha1+alpha2"
                      : sp.variable == ScanVariable::alpha1   ? "alpha1"
                      : sp.variable == ScanVariable::alpha2   ? "alpha2"
                                                              : "alpha3";
    for (auto& r : found) {
        for (const auto& [fam, z] : expected)
            if (std::abs(r.location - z) < 1e-5) {
                r.family = fam;
                switch (fam) {
                    case PoleFamily::T_k_line:
                        r.index = int(std::lround((2.0 * sp.k - z) / 2.0));
                        r.description = "alpha1+alpha2 = 2k-2l, k=" + std::to_string(sp.k) +
                                        ", l=" + std::to_string(r.index);
                        break;
                    case PoleFamily::sum: {
                        double total = z;
                        for (int j = 0; j < 3; ++j)
                            if (j != int(sp.variable)) total += sp.fixed[j].real();
                        r.index = int(std::lround((-rho - total) / 2.0));
                        r.description = "alpha1+alpha2+alpha3 = -rho-2k, k=" + std::to_string(r.index);
                        break;
                    }
                    default:
                        r.index = int(std::lround((-rho - z) / 2.0));
                        r.description = std::string(to_string(fam)) + " = -rho-2k, k=" + std::to_string(r.index);
                }
            }
        if (r.family == PoleFamily::unexpected)
            r.description = std::string("unexpected pole in ") + var;
    }
    std::sort(found.begin(), found.end(),
              [](const PoleReport& a, const PoleReport& b) { return a.location.real() < b.location.real(); });
    return found;
}

}  // namespace conftri
