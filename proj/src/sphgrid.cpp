#include "conftri/sphgrid.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/FFT>

#include "conftri/special.hpp"

namespace conftri {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Eigen::Index kMaxGridNodes = 50'000'000;

int wrap(int m, int n) {
    const int r = m % n;
    return r < 0 ? r + n : r;
}

}  // namespace

Grid::Grid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
    if (n_theta < 1 || n_phi < 1) throw Error("Grid: sizes must be positive");
    if (Eigen::Index(n_theta) * n_phi > kMaxGridNodes)
        throw Error("Grid: " + std::to_string(n_theta) + "x" + std::to_string(n_phi) +
                    " nodes exceeds the memory budget");
    dphi_ = 2.0 * kPi / n_phi;
    const auto rule = special::gauss_legendre(n_theta);
    // Rings run from the base point (t = +1) toward the antipode.
    cos_theta_ = rule.nodes.reverse();
    weights_ = rule.weights.reverse();
    sin_theta_ = (1.0 - cos_theta_.array().square()).sqrt();
}

Vec3 Grid::point(int i, int j) const {
    const double phi = j * dphi_;
    return {cos_theta_(i), sin_theta_(i) * std::cos(phi), sin_theta_(i) * std::sin(phi)};
}

GridPtr make_grid(int L) {
    if (L < 1) throw Error("make_grid: L must be >= 1");
    return std::make_shared<const Grid>(L);
}

GridPtr make_grid(int n_theta, int n_phi) { return std::make_shared<const Grid>(n_theta, n_phi); }

GridFunction::GridFunction(GridPtr g, Eigen::ArrayXXcd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.rows() != grid->n_theta() || values.cols() != grid->n_phi())
        throw Error("GridFunction: shape does not match grid");
    if (!values.allFinite()) throw Error("GridFunction: non-finite values");
}

HarmonicCoeffs::HarmonicCoeffs(int L, Eigen::VectorXcd c) : L_(L), c_(std::move(c)) {
    if (L < 0 || c_.size() != size_for(L)) throw Error("HarmonicCoeffs: size mismatch");
    if (!c_.allFinite()) throw Error("HarmonicCoeffs: non-finite entries");
}

HarmonicCoeffs HarmonicCoeffs::resized(int L) const {
    HarmonicCoeffs out(L);
    const Eigen::Index k = std::min(c_.size(), out.c_.size());
    out.c_.head(k) = c_.head(k);
    return out;
}

bool HarmonicCoeffs::is_real(double tol) const {
    for (int l = 0; l <= L_; ++l)
        for (int m = 1; m <= l; ++m) {
            const cplx expect = (m % 2 ? -1.0 : 1.0) * std::conj((*this)(l, m));
            if (std::abs((*this)(l, -m) - expect) > tol) return false;
        }
    for (int l = 0; l <= L_; ++l)
        if (std::abs((*this)(l, 0).imag()) > tol) return false;
    return true;
}

void legendre_table(int L, double t, double s, double* out) {
    out[0] = 0.5 / std::sqrt(kPi);
    for (int m = 0; m <= L; ++m) {
        const Eigen::Index mm = tri_index(m, m);
        if (m > 0) out[mm] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * out[tri_index(m - 1, m - 1)];
        if (m + 1 <= L) out[tri_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * t * out[mm];
        for (int l = m + 2; l <= L; ++l) {
            const double l2 = double(l) * l, m2 = double(m) * m;
            const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
            const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m2) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            out[tri_index(l, m)] = a * (t * out[tri_index(l - 1, m)] - b * out[tri_index(l - 2, m)]);
        }
    }
}

std::pair<double, double> angles(const Vec3& x) {
    const double rho = std::hypot(x(1), x(2));
    return {std::atan2(rho, x(0)), std::atan2(x(2), x(1))};
}

cplx spherical_harmonic(int l, int m, const Vec3& x) {
    if (l < 0 || std::abs(m) > l) throw Error("spherical_harmonic: need |m| <= l");
    const auto [theta, phi] = angles(x);
    std::vector<double> p(tri_index(l, l) + 1);
    legendre_table(l, std::cos(theta), std::sin(theta), p.data());
    const int am = std::abs(m);
    const double sign = (m < 0 && am % 2) ? -1.0 : 1.0;
    return sign * p[tri_index(l, am)] * std::polar(1.0, m * phi);
}

GridFunction sample(const GridPtr& grid, const SphereFunction& f) {
    Eigen::ArrayXXcd v(grid->n_theta(), grid->n_phi());
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j) v(i, j) = f(grid->point(i, j));
    return GridFunction(grid, std::move(v));
}

cplx quad(const GridFunction& f) {
    const Grid& g = *f.grid;
    special::CompensatedSum<cplx> total;
    for (int i = 0; i < g.n_theta(); ++i) {
        special::CompensatedSum<cplx> ring;
        for (int j = 0; j < g.n_phi(); ++j) ring.add(f.values(i, j));
        total.add(g.area_weight(i) * ring.value());
    }
    return total.value();
}

double l2_norm(const GridFunction& f) {
    GridFunction sq(f.grid, f.values.abs2().cast<cplx>());
    return std::sqrt(std::max(0.0, quad(sq).real()));
}

HarmonicCoeffs sht_forward(const GridFunction& f, int L) {
    const Grid& g = *f.grid;
    if (L < 0) L = g.L();
    HarmonicCoeffs c(L);
    const int N = g.n_phi();
    Eigen::FFT<double> fft;
    std::vector<cplx> row(N), spec(N);
    std::vector<double> p(tri_index(L, L) + 1);
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int j = 0; j < N; ++j) row[j] = f.values(i, j);
        fft.fwd(spec, row);
        legendre_table(L, g.cos_theta()(i), g.sin_theta()(i), p.data());
        const double w = g.area_weight(i);
        for (int m = 0; m <= L; ++m) {
            const cplx fp = w * spec[wrap(m, N)];
            const cplx fm = w * spec[wrap(-m, N)];
            const double sign = m % 2 ? -1.0 : 1.0;
            for (int l = m; l <= L; ++l) {
                const double pl = p[tri_index(l, m)];
                c(l, m) += pl * fp;
                if (m > 0) c(l, -m) += sign * pl * fm;
            }
        }
    }
    return c;
}

GridFunction sht_inverse(const HarmonicCoeffs& c, const GridPtr& grid) {
    const Grid& g = *grid;
    const int L = c.L();
    const int N = g.n_phi();
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<cplx> bins(N), row(N);
    std::vector<double> p(tri_index(L, L) + 1);
    Eigen::ArrayXXcd v(g.n_theta(), N);
    for (int i = 0; i < g.n_theta(); ++i) {
        std::fill(bins.begin(), bins.end(), cplx(0.0));
        legendre_table(L, g.cos_theta()(i), g.sin_theta()(i), p.data());
        for (int m = 0; m <= L; ++m) {
            cplx gp = 0.0, gm = 0.0;
            for (int l = m; l <= L; ++l) {
                const double pl = p[tri_index(l, m)];
                gp += pl * c(l, m);
                if (m > 0) gm += pl * c(l, -m);
            }
            bins[wrap(m, N)] += gp;
            if (m > 0) bins[wrap(-m, N)] += (m % 2 ? -1.0 : 1.0) * gm;
        }
        fft.inv(row, bins);
        for (int j = 0; j < N; ++j) v(i, j) = row[j];
    }
    return GridFunction(grid, std::move(v));
}

cplx synthesize(const HarmonicCoeffs& c, const Vec3& x) {
    const int L = c.L();
    const auto [theta, phi] = angles(x);
    thread_local std::vector<double> p;
    p.resize(tri_index(L, L) + 1);
    legendre_table(L, std::cos(theta), std::sin(theta), p.data());
    const cplx e = std::polar(1.0, phi);
    cplx total = 0.0;
    cplx em = 1.0;
    for (int m = 0; m <= L; ++m) {
        cplx gp = 0.0, gm = 0.0;
        for (int l = m; l <= L; ++l) {
            const double pl = p[tri_index(l, m)];
            gp += pl * c(l, m);
            if (m > 0) gm += pl * c(l, -m);
        }
        total += gp * em;
        if (m > 0) total += (m % 2 ? -1.0 : 1.0) * gm * std::conj(em);
        em *= e;
    }
    return total;
}

SphereFunction as_function(HarmonicCoeffs c) {
    return [c = std::move(c)](const Vec3& x) { return synthesize(c, x); };
}

// ---------------------------------------------------------------------------

ZonalRule zonal_rule(const Dimension& dim, int lmax) {
    constexpr int kOrder = 20;
    constexpr int kLevels = 80;
    const int panels = std::max(8, lmax / 2 + 8);
    const double h = kPi / panels;
    const auto gl = special::gauss_legendre(kOrder);
    const int count = kOrder * (panels - 1 + kLevels);
    ZonalRule rule{Eigen::VectorXd(count), Eigen::VectorXd(count)};
    const double area = special::sphere_area(dim.n() - 2);
    int k = 0;
    auto add_panel = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < kOrder; ++q) {
            const double th = mid + half * gl.nodes(q);
            rule.theta(k) = th;
            rule.weight(k) = area * half * gl.weights(q) * std::pow(std::sin(th), dim.n() - 2);
            ++k;
        }
    };
    double b = h;
    for (int j = 0; j < kLevels; ++j, b *= 0.5) add_panel(0.5 * b, b);
    for (int p = 1; p < panels; ++p) add_panel(p * h, (p + 1) * h);
    return rule;
}

cplx zonal_integral_chord(const Dimension& dim, const ChordProfile& G) {
    const ZonalRule rule = zonal_rule(dim, 0);
    special::CompensatedSum<cplx> sum;
    for (Eigen::Index k = 0; k < rule.theta.size(); ++k) {
        const cplx v = G(2.0 * std::sin(0.5 * rule.theta(k)));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("zonal_integral: profile returned a non-finite value");
        sum.add(rule.weight(k) * v);
    }
    return sum.value();
}

cplx zonal_integral(const Dimension& dim, const TProfile& F) {
    return zonal_integral_chord(dim, [&](double d) { return F(1.0 - 0.5 * d * d); });
}

Eigen::VectorXcd funk_hecke_chord(const Dimension& dim, const ChordProfile& G, int lmax) {
    if (lmax < 0) throw Error("funk_hecke: negative degree");
    const ZonalRule rule = zonal_rule(dim, lmax);
    std::vector<special::CompensatedSum<cplx>> sums(lmax + 1);
    std::vector<double> q(lmax + 1);
    for (Eigen::Index k = 0; k < rule.theta.size(); ++k) {
        const double th = rule.theta(k);
        const cplx v = G(2.0 * std::sin(0.5 * th));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("funk_hecke: profile returned a non-finite value");
        special::zonal_polynomials(dim, lmax, std::cos(th), q.data());
        const cplx wv = rule.weight(k) * v;
        for (int l = 0; l <= lmax; ++l) sums[l].add(wv * q[l]);
    }
    Eigen::VectorXcd e(lmax + 1);
    for (int l = 0; l <= lmax; ++l) e(l) = sums[l].value();
    return e;
}

cplx funk_hecke(const Dimension& dim, const TProfile& F, int l) {
    return funk_hecke_chord(dim, [&](double d) { return F(1.0 - 0.5 * d * d); }, l)(l);
}

Eigen::VectorXcd riesz_multipliers_direct(const Dimension& dim, cplx s, int lmax, double margin) {
    if (!(s.real() > -(dim.n() - 1) + margin))
        throw Error("riesz_multipliers_direct: Re s must exceed -(n-1) + margin");
    return funk_hecke_chord(dim, [s](double d) { return std::exp(s * std::log(d)); }, lmax);
}

HarmonicCoeffs random_coeffs(int L, std::uint64_t seed, bool real) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    HarmonicCoeffs c(L);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) c(l, m) = cplx(normal(rng), normal(rng));
    if (real)
        for (int l = 0; l <= L; ++l) {
            c(l, 0) = c(l, 0).real();
            for (int m = 1; m <= l; ++m) c(l, -m) = (m % 2 ? -1.0 : 1.0) * std::conj(c(l, m));
        }
    return c;
}

}  // namespace conftri
