#include "conftri/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include <json.hpp>

#include "conftri/io.hpp"
#include "conftri/lorentz.hpp"
#include "conftri/mero.hpp"
#include "conftri/reps.hpp"
#include "conftri/spectral_ops.hpp"
#include "conftri/trilinear.hpp"

namespace conftri {

using nlohmann::json;

double RunConfig::tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    if (it != tolerances.end()) return it->second;
    const auto slash = key.find('/');
    if (slash != std::string::npos) {
        it = tolerances.find(key.substr(0, slash));
        if (it != tolerances.end()) return it->second;
    }
    return fallback;
}

void RunConfig::validate() const {
    if (n < 3) throw Error("config: n must be >= 3");
    if (L < 1) throw Error("config: L must be >= 1");
    if (grid_theta < 2 || grid_phi < 4) throw Error("config: grid too small");
    if (!(ring_radius > 0.0) || ring_radius >= 1.0) throw Error("config: ring radius must lie in (0, 1)");
    if (ring_size < 8) throw Error("config: ring size must be >= 8");
    if (instances < 1) throw Error("config: instances must be >= 1");
    for (const auto& [k, v] : tolerances)
        if (!(v >= 1e-15)) throw Error("config: tolerance for '" + k + "' below the 1e-15 floor");
    for (const auto& s : suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw Error("config: unknown suite '" + s + "'");
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("config: expected a JSON object");
    try {
        c.n = j.value("n", c.n);
        c.L = j.value("L", c.L);
        if (j.contains("grid")) {
            c.grid_theta = j["grid"].at(0).get<int>();
            c.grid_phi = j["grid"].at(1).get<int>();
        }
        c.ring_radius = j.value("ring_radius", c.ring_radius);
        c.ring_size = j.value("ring_size", c.ring_size);
        c.instances = j.value("instances", c.instances);
        c.seed = j.value("seed", c.seed);
        c.output = j.value("output", c.output);
        c.fault_inject = j.value("fault_inject", c.fault_inject);
        if (j.contains("suites")) c.suites = j["suites"].get<std::vector<std::string>>();
        if (j.contains("tolerances")) c.tolerances = j["tolerances"].get<std::map<std::string, double>>();
    } catch (const json::exception& e) {
        throw Error(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

bool SuiteResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; });
}

bool VerificationReport::all_pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass(); });
}

std::string VerificationReport::to_json() const {
    json cfg = {{"n", config.n},
                {"L", config.L},
                {"grid", {config.grid_theta, config.grid_phi}},
                {"ring_radius", config.ring_radius},
                {"ring_size", config.ring_size},
                {"instances", config.instances},
                {"seed", config.seed},
                {"fault_inject", config.fault_inject},
                {"suites", config.suites},
                {"tolerances", config.tolerances}};
    json js = json::array();
    for (const auto& s : suites) {
        json checks = json::array();
        for (const auto& r : s.checks)
            checks.push_back({{"id", r.id},
                              {"anchor", r.anchor},
                              {"defect", io::number_token(r.defect)},
                              {"tolerance", io::number_token(r.tolerance)},
                              {"pass", r.pass}});
        js.push_back({{"suite", s.name}, {"pass", s.pass()}, {"seconds", s.seconds}, {"checks", checks}});
    }
    json out = {{"config", cfg}, {"pass", all_pass()}, {"suites", js}};
    return io::unquote_numbers(out.dump(2));
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"geometry", "representation", "bernstein",
                                                "residues", "intertwining",   "trilinear"};
    return names;
}

namespace {

constexpr double kPi = std::numbers::pi;

class Suite {
public:
    Suite(const RunConfig& cfg, std::string name) : cfg_(cfg) { result_.name = std::move(name); }

    /// Records the worst defect over a family of instances.
    void check(const std::string& id, const std::string& anchor, double defect, double tolerance) {
        const double tol = cfg_.tolerance(result_.name + "/" + id, tolerance);
        result_.checks.push_back({id, anchor, defect, tol, std::isfinite(defect) && defect <= tol});
    }

    SuiteResult& result() { return result_; }

private:
    const RunConfig& cfg_;
    SuiteResult result_;
};

Eigen::VectorXd random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v.normalized();
}

// 1 plus a random perturbation of norm 1/2: keeps the forms away from zero.
HarmonicCoeffs mean_one_coeffs(int L, std::uint64_t seed) {
    HarmonicCoeffs c = random_coeffs(L, seed);
    c(0, 0) = 0.0;
    c.data() *= 0.5 * std::sqrt(4.0 * kPi) / c.data().norm();
    c(0, 0) = std::sqrt(4.0 * kPi);
    return c;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void geometry(const RunConfig& cfg, Suite& s) {
    const Dimension dim(cfg.n);
    std::mt19937_64 rng(cfg.seed);
    double coc = 0.0, inv = 0.0, cov = 0.0, var = 0.0;
    for (int i = 0; i < cfg.instances; ++i) {
        const auto g1 = random_element<double>(dim, cfg.seed + 2 * i);
        const auto g2 = random_element<double>(dim, cfg.seed + 2 * i + 1);
        const SpherePoint x(random_unit(rng, cfg.n)), y(random_unit(rng, cfg.n));
        const double lhs = conformal_factor(g1 * g2, x);
        const double rhs = conformal_factor(g1, act(g2, x)) * conformal_factor(g2, x);
        coc = std::max(coc, std::abs(lhs - rhs) / std::abs(rhs));
        inv = std::max(inv, std::abs(conformal_factor(g1.inverse(), act(g1, x)) * conformal_factor(g1, x) - 1.0));
        const double d = (act(g1, x).coords() - act(g1, y).coords()).norm();
        const double pred = std::sqrt(conformal_factor(g1, x)) * (x.coords() - y.coords()).norm() *
                            std::sqrt(conformal_factor(g1, y));
        cov = std::max(cov, std::abs(d - pred) / pred);
        if (cfg.n == 3) {
            const SphereFunction f = as_function(random_coeffs(4, cfg.seed + 100 + i));
            const GridPtr grid = make_grid(64);
            const cplx a = quad(sample(grid, f));
            const cplx b = quad(sample(grid, [&](const Vec3& p) {
                const double k = kappa3(g1, p);
                return k * k * f(act3(g1, p));
            }));
            var = std::max(var, rel(b, a));
        }
    }
    s.check("cocycle", "cocycle of the conformal factor", coc, 1e-10);
    s.check("inverse", "kappa(g^-1, g x) kappa(g, x) = 1", inv, 1e-10);
    s.check("distance", "distance covariance", cov, 1e-10);
    if (cfg.n == 3) s.check("change_of_variables", "change of variables with kappa^(n-1)", var, 1e-8);
}

void representation(const RunConfig& cfg, Suite& s) {
    if (cfg.n != 3) return;
    const Dimension dim(3);
    std::mt19937_64 rng(cfg.seed + 7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double dual = 0.0, dirac = 0.0, hom = 0.0;
    const GridPtr grid = make_grid(48);
    for (int i = 0; i < cfg.instances; ++i) {
        const auto g = random_element<double>(dim, cfg.seed + 30 + i, 0.5);
        const auto h = random_element<double>(dim, cfg.seed + 60 + i, 0.5);
        const cplx lambda(u(rng), u(rng));
        const HarmonicCoeffs f = random_coeffs(4, cfg.seed + 90 + i);
        const HarmonicCoeffs phi = random_coeffs(4, cfg.seed + 120 + i);
        const double scale = l2_norm(sht_inverse(f, grid)) * l2_norm(sht_inverse(phi, grid));
        dual = std::max(dual, duality_defect(dim, {lambda}, g, f, phi, grid) / scale);
        dirac = std::max(dirac, rel(dirac_pair(dim, {lambda}, g, phi), dirac_pair_dual(dim, {lambda}, g, phi)));
        // pi(g) pi(h) = pi(gh) pointwise
        const SphereFunction ff = as_function(f);
        const SphereFunction two = pi_function(dim, {lambda}, g, pi_function(dim, {lambda}, h, ff));
        const SphereFunction one = pi_function(dim, {lambda}, g * h, ff);
        const Vec3 x = random_unit(rng, 3);
        hom = std::max(hom, rel(two(x), one(x)));
    }
    s.check("duality", "(pi_l(g) f, phi) = (f, pi_-l(g^-1) phi)", dual, 1e-8);
    s.check("dirac", "pi_l(g) delta_1 = kappa(g,1)^(rho-l) delta_g(1)", dirac, 1e-10);
    s.check("homomorphism", "pi_l(g) pi_l(h) = pi_l(gh)", hom, 1e-10);
}

void bernstein(const RunConfig& cfg, Suite& s) {
    std::mt19937_64 rng(cfg.seed + 11);
    double kern = 0.0;
    for (int i = 0; i < std::min(cfg.instances, 4); ++i) {
        const Vec3 x = random_unit(rng, 3), y = random_unit(rng, 3);
        kern = std::max(kern, bernstein_kernel_defect(i % 2 ? cplx(4.5, 1.0) : cplx(5.0), x, y, 64));
    }
    s.check("kernel", "[Delta + (s/2)(s/2+n-2)] |x-y|^s = s(s+n-3) |x-y|^(s-2)", kern, 1e-6);
    double desc = 0.0;
    for (int n : {3, 4, 5}) {
        const Dimension dim(n);
        // overlap: s and s + 2 both inside the direct range, one descent step
        for (cplx off : {cplx(0.6, 0.2), cplx(1.2, -0.3), cplx(1.8, 0.0)}) {
            const cplx sv = -(n - 1.0) + off;
            const Eigen::VectorXcd a = riesz_multipliers_direct(dim, sv, 32);
            const Eigen::VectorXcd b = riesz_multipliers_descent(dim, sv, 32, 1);
            for (int l = 0; l <= 32; ++l) desc = std::max(desc, rel(b(l), a(l)));
        }
    }
    s.check("descent", "direct and Bernstein-descent multipliers agree", desc, 1e-8);
}

void residues(const RunConfig& cfg, Suite& s) {
    if (cfg.n != 3) return;
    const Dimension dim(3);
    const RingOptions ring{cfg.ring_radius, cfg.ring_size};
    for (int k = 0; k <= 2; ++k) {
        double worst = 0.0, worst_kk = 0.0;
        for (int i = 0; i < cfg.instances; ++i) {
            const HarmonicCoeffs f = random_coeffs(cfg.L, cfg.seed + 200 + 10 * k + i);
            const Eigen::VectorXcd proj = projections_at_base(f);
            double c = 2.0 * gjms_constant(dim, k).c;
            if (cfg.fault_inject && k == 1) c *= 1.01;
            cplx expected = 0.0;
            for (int l = 0; l <= f.L(); ++l) expected += c * gjms_multiplier(dim, k, l) * proj(l);
            worst = std::max(worst, rel(residue_pair_hs(dim, k, f, ring).residue, expected));
            // double pairing with k_alpha, residue through R_k on the diagonal
            const HarmonicCoeffs f2 = random_coeffs(cfg.L, cfg.seed + 300 + 10 * k + i);
            const cplx diag = (c / gjms_constant(dim, k).c) *
                              kalpha_residue_on_diagonal(dim, k, f, f2, i % 2 ? Variable::second : Variable::first);
            worst_kk = std::max(worst_kk, rel(residue_pair_kalpha(dim, k, f, f2, ring).residue, diag));
        }
        const std::string ks = std::to_string(k);
        s.check("r" + ks, "Res(h_s, -(n-1)-2k) = 2 c_k Delta_k delta_1, k=" + ks, worst, 1e-4);
        s.check("k_alpha_r" + ks, "Res(k_alpha, -rho-2k) = 2 int R_k f(x,x), k=" + ks, worst_kk, 1e-4);
    }
}

void intertwining(const RunConfig& cfg, Suite& s) {
    if (cfg.n != 3) return;
    const Dimension dim(3);
    for (int k : {1, 2}) {
        double worst = 0.0;
        for (int i = 0; i < cfg.instances; ++i) {
            const auto g = random_element<double>(dim, cfg.seed + 400 + 10 * k + i, 0.3);
            worst = std::max(worst, intertwining_defect(dim, k, g, random_coeffs(cfg.L, cfg.seed + 500 + i), 4 * cfg.L));
        }
        s.check("R" + std::to_string(k), "R_k pi_-k(g) = pi_k(g) R_k, k=" + std::to_string(k), worst, 1e-4);
    }
}

void trilinear(const RunConfig& cfg, Suite& s) {
    if (cfg.n != 3) return;
    const Dimension dim(3);
    TrilinearOptions opts;
    opts.n_theta = cfg.grid_theta;
    opts.n_phi = cfg.grid_phi;
    const SphereFunction one = [](const Vec3&) { return cplx(1.0); };
    const int count = std::min(cfg.instances, 2);
    double inv = 0.0;
    for (int i = 0; i < count; ++i) {
        const auto g = random_element<double>(dim, cfg.seed + 600 + i, 0.3);
        const auto p = ParameterTriple::from_alpha({2.5 + 0.1 * i, 2.7, 3.1 - 0.1 * i});
        inv = std::max(inv, K_invariance_defect(p, g, as_function(mean_one_coeffs(3, cfg.seed + 610 + i)),
                                                as_function(mean_one_coeffs(3, cfg.seed + 620 + i)),
                                                as_function(mean_one_coeffs(3, cfg.seed + 630 + i)), opts));
    }
    s.check("K_invariance", "K_alpha invariant under (pi_l1, pi_l2, pi_l3)", inv, 1e-3);

    // closed form, with the factor 2^(a1+a2+a3) the Gamma ratio omits
    auto normalized = [&](const ParameterTriple& p) {
        const cplx sum = p.alpha(0) + p.alpha(1) + p.alpha(2);
        return K_form(p, one, one, one, KMethod::direct, opts) / (std::pow(2.0, sum) * K111_closed_form(dim, p));
    };
    const auto pa = ParameterTriple::from_alpha({4.5, 4.7, 5.3});
    const auto pb = ParameterTriple::from_alpha({5.1, 6.2, 4.4});
    s.check("K111_closed_form", "K_alpha(1,1,1) = C 2^(a1+a2+a3) Gamma ratio", rel(normalized(pa), normalized(pb)), 1e-6);

    const HarmonicCoeffs f = random_coeffs(3, cfg.seed + 700);
    const RegresReport rep =
        regres(0, 6.5, 6.5, as_function(f), as_function(random_coeffs(3, cfg.seed + 701)),
               as_function(random_coeffs(3, cfg.seed + 702)), 0.15, opts);
    s.check("regres_k0", "Res_{a3=-rho} K_alpha = 2 c_0 T_0", rep.normalized_defect, 5e-3);

    ScanSpec scan;
    scan.variable = ScanVariable::alpha3;
    scan.fixed = {0.3, 0.45, 0.0};
    const auto found = pole_scan(scan);
    const auto expected = expected_poles(scan);
    double mismatch = double(found.size() != expected.size());
    for (const auto& r : found)
        if (r.family == PoleFamily::unexpected) mismatch += 1.0;
    s.check("pole_scan_alpha3", "poles of K_alpha(1,1,1) along alpha_3", mismatch, 0.5);
}

}  // namespace

VerificationReport cmd_verify(const RunConfig& config) {
    config.validate();
    VerificationReport report;
    report.config = config;
    const std::map<std::string, std::function<void(const RunConfig&, Suite&)>> runners{
        {"geometry", geometry},   {"representation", representation}, {"bernstein", bernstein},
        {"residues", residues},   {"intertwining", intertwining},     {"trilinear", trilinear}};
    for (const auto& name : suite_names()) {
        if (!config.suites.empty() && std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end())
            continue;
        Suite suite(config, name);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            runners.at(name)(config, suite);
        } catch (const std::exception& e) {
            suite.check("exception", e.what(), std::numeric_limits<double>::infinity(), 0.0);
        }
        suite.result().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.suites.push_back(std::move(suite.result()));
    }
    return report;
}

}  // namespace conftri
