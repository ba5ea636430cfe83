// conftri command-line driver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "conftri/io.hpp"
#include "conftri/mero.hpp"
#include "conftri/spectral_ops.hpp"
#include "conftri/trilinear.hpp"
#include "conftri/verify.hpp"

using namespace conftri;
using nlohmann::json;

namespace {

// "re" or "re,im"
cplx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return re;
        }
        const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
        const double re = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        const double im = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return {re, im};
    } catch (const std::exception&) {
        throw Error("cannot parse complex number '" + text + "' (expected RE or RE,IM)");
    }
}

json num(double x) { return io::number_token(x); }
json num(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

std::string resolve_output(const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(io::output_dir()) / p).string();
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    const std::string path = resolve_output(out);
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

HarmonicCoeffs constant_coeffs(cplx value) {
    HarmonicCoeffs c(0);
    c(0, 0) = value * std::sqrt(4.0 * std::numbers::pi);
    return c;
}

HarmonicCoeffs load_function(const std::string& path, const std::string& constant) {
    if (!path.empty() && !constant.empty()) throw Error("give either a coefficient file or --const, not both");
    if (!path.empty()) return io::read_coeffs_json(path);
    return constant_coeffs(constant.empty() ? cplx(1.0) : parse_complex(constant));
}

MultiplierKind parse_kind(const std::string& s) {
    for (auto k : {MultiplierKind::identity, MultiplierKind::laplacian, MultiplierKind::gjms, MultiplierKind::bernstein,
                   MultiplierKind::knapp_stein, MultiplierKind::residue})
        if (s == to_string(k)) return k;
    throw Error("unknown multiplier kind '" + s + "'");
}

json fit_json(const LaurentFit& f) {
    return {{"center", num(f.center)},
            {"radius", num(f.radius)},
            {"residue", num(f.residue)},
            {"regular", num(f.regular_value)},
            {"condition", num(f.condition)}};
}

ScanVariable parse_variable(const std::string& s) {
    if (s == "alpha1") return ScanVariable::alpha1;
    if (s == "alpha2") return ScanVariable::alpha2;
    if (s == "alpha3") return ScanVariable::alpha3;
    if (s == "alpha_sum_T") return ScanVariable::alpha_sum_T;
    throw Error("unknown scan variable '" + s + "' (alpha1, alpha2, alpha3, alpha_sum_T)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformally invariant trilinear forms on spheres"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "Run the verification suites");
    std::string config_path, report_path;
    std::vector<std::string> suites;
    bool fault = false;
    std::uint64_t seed = 0;
    int instances = 0;
    verify->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    verify->add_option("--suite", suites, "Run only these suites")->check(CLI::IsMember(suite_names()));
    verify->add_flag("--fault-inject", fault, "Scale c_1 by 1.01 on the expected side of the residue checks");
    verify->add_option("--output", report_path, "Report path (default: verify_report.json in the output dir)");
    verify->add_option("--seed", seed, "Override the seed");
    verify->add_option("--instances", instances, "Override the number of random instances")->check(CLI::PositiveNumber);

    // multiplier
    auto* mult = app.add_subcommand("multiplier", "Print a multiplier family as CSV (l,re,im)");
    std::string kind = "gjms", param = "0", out;
    int n = 3, L = 16, k = 1;
    mult->add_option("--kind", kind, "identity|laplacian|gjms|bernstein|knapp_stein|residue")->required();
    mult->add_option("--n", n, "Dimension of the ambient space R^n")->check(CLI::Range(3, 64));
    mult->add_option("--L", L, "Largest degree")->check(CLI::Range(0, 4096));
    mult->add_option("--k", k, "Order for gjms/residue")->check(CLI::NonNegativeNumber);
    mult->add_option("--param", param, "s for bernstein, alpha for knapp_stein (RE or RE,IM)");
    mult->add_option("--out", out, "Output file (relative paths go to the output dir)");

    // pair
    auto* pair = app.add_subcommand("pair", "Regularized pairing (h_s, f)");
    std::string s_text, f_path, f_const;
    pair->add_option("--s", s_text, "s (RE or RE,IM)")->required();
    pair->add_option("--f", f_path, "Coefficient file")->check(CLI::ExistingFile);
    pair->add_option("--const", f_const, "Constant function value instead of a file");
    pair->add_option("--n", n, "Dimension (n = 3 with coefficient files; any n for constants)")->check(CLI::Range(3, 64));
    pair->add_option("--out", out, "Output file");

    // residue
    auto* res = app.add_subcommand("residue", "Ring-fit residue of s -> (h_s, f) at s = -(n-1)-2k");
    double radius = 0.1;
    int ring_size = 16;
    res->add_option("--k", k, "Pole index")->required()->check(CLI::NonNegativeNumber);
    res->add_option("--f", f_path, "Coefficient file")->check(CLI::ExistingFile);
    res->add_option("--const", f_const, "Constant function value instead of a file");
    res->add_option("--radius", radius, "Ring radius")->check(CLI::Range(1e-6, 0.9));
    res->add_option("--ring-size", ring_size, "Samples on the ring")->check(CLI::Range(8, 1 << 16));
    res->add_option("--out", out, "Output file");

    // trilinear
    auto* tri = app.add_subcommand("trilinear", "Evaluate K_alpha(f1, f2, f3) on S^2");
    std::vector<std::string> alpha_text, lambda_text;
    std::string f1p, f2p, f3p, method = "direct";
    std::vector<int> grid{24, 48};
    tri->add_option("--alpha", alpha_text, "alpha_1 alpha_2 alpha_3 (each RE or RE,IM)")->expected(3);
    tri->add_option("--lambda", lambda_text, "lambda_1 lambda_2 lambda_3, converted to alpha")->expected(3);
    tri->add_option("--f1", f1p, "Coefficient file (default: constant 1)")->check(CLI::ExistingFile);
    tri->add_option("--f2", f2p, "Coefficient file (default: constant 1)")->check(CLI::ExistingFile);
    tri->add_option("--f3", f3p, "Coefficient file (default: constant 1)")->check(CLI::ExistingFile);
    tri->add_option("--method", method, "direct|fast")->check(CLI::IsMember({"direct", "fast"}));
    tri->add_option("--grid", grid, "n_theta n_phi")->expected(2);
    tri->add_option("--out", out, "Output file");

    // pole-scan
    auto* scan = app.add_subcommand("pole-scan", "Locate poles of the K(1,1,1) closed forms along a real segment");
    std::string variable = "alpha3";
    std::vector<double> fixed{0.3, 0.45, 0.0};
    double from = -6.5, to = 0.5, threshold = 1e-6;
    double scan_radius = 0.05;
    scan->add_option("--variable", variable, "alpha1|alpha2|alpha3|alpha_sum_T");
    scan->add_option("--fixed", fixed, "Values of alpha_1 alpha_2 alpha_3 (the scanned one is ignored)")->expected(3);
    scan->add_option("--from", from, "Segment start");
    scan->add_option("--to", to, "Segment end");
    scan->add_option("--k", k, "T_k line order for alpha_sum_T")->check(CLI::NonNegativeNumber);
    scan->add_option("--n", n, "Dimension")->check(CLI::Range(3, 64));
    scan->add_option("--radius", scan_radius, "Ring radius and center spacing")->check(CLI::Range(1e-4, 0.5));
    scan->add_option("--threshold", threshold, "Relative residue threshold");
    scan->add_option("--out", out, "Output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            RunConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                std::stringstream ss;
                ss << in.rdbuf();
                cfg = parse_run_config(ss.str());
            }
            if (!suites.empty()) cfg.suites = suites;
            if (fault) cfg.fault_inject = true;
            if (verify->count("--seed")) cfg.seed = seed;
            if (instances > 0) cfg.instances = instances;
            if (!report_path.empty()) cfg.output = report_path;
            if (cfg.output.empty()) cfg.output = "verify_report.json";
            const VerificationReport rep = cmd_verify(cfg);
            for (const auto& su : rep.suites)
                for (const auto& c : su.checks)
                    std::cout << (c.pass ? "PASS " : "FAIL ") << su.name << "/" << c.id << "  defect "
                              << io::format_number(c.defect) << "  tol " << io::format_number(c.tolerance) << "  ["
                              << c.anchor << "]\n";
            emit(rep.to_json() + "\n", cfg.output);
            std::cout << (rep.all_pass() ? "all checks passed" : "some checks failed") << "\n";
            return rep.all_pass() ? 0 : 1;
        }
        if (*mult) {
            const Dimension dim(n);
            const cplx p = parse_complex(param);
            MultiplierFamily fam = [&] {
                switch (parse_kind(kind)) {
                    case MultiplierKind::identity: return identity_family(dim, L);
                    case MultiplierKind::laplacian: return laplacian_family(dim, L);
                    case MultiplierKind::gjms: return gjms_family(dim, k, L);
                    case MultiplierKind::residue: return residue_family(dim, k, L);
                    case MultiplierKind::bernstein: return bernstein_family(dim, p, L);
                    case MultiplierKind::knapp_stein: return knapp_stein_family(dim, p, L);
                }
                throw Error("unreachable");
            }();
            std::ostringstream os;
            io::write_multipliers_csv(fam, os);
            emit(os.str(), out);
            return 0;
        }
        if (*pair) {
            const cplx s = parse_complex(s_text);
            cplx value;
            if (n != 3) {
                if (!f_path.empty()) throw Error("pair: coefficient files are defined on S^2 only (n = 3)");
                const cplx c = f_const.empty() ? cplx(1.0) : parse_complex(f_const);
                Eigen::VectorXcd proj(1);
                proj(0) = c;
                value = pair_hs_projections(Dimension(n), s, proj);
            } else {
                value = pair_hs(Dimension(3), s, load_function(f_path, f_const));
            }
            emit(io::format_number(value.real()) + " " + io::format_number(value.imag()) + "\n", out);
            return 0;
        }
        if (*res) {
            const LaurentFit fit =
                residue_pair_hs(Dimension(3), k, load_function(f_path, f_const), {radius, ring_size});
            emit(io::unquote_numbers(fit_json(fit).dump(2)) + "\n", out);
            return 0;
        }
        if (*tri) {
            if (alpha_text.empty() == lambda_text.empty()) throw Error("trilinear: give exactly one of --alpha, --lambda");
            const bool from_lambda = !lambda_text.empty();
            const auto& src = from_lambda ? lambda_text : alpha_text;
            ParameterTriple::Triple t{parse_complex(src[0]), parse_complex(src[1]), parse_complex(src[2])};
            const ParameterTriple p = from_lambda ? alpha_from_lambda(t) : lambda_from_alpha(t);
            auto fn = [](const std::string& path) {
                return as_function(path.empty() ? constant_coeffs(1.0) : io::read_coeffs_json(path));
            };
            TrilinearOptions opts;
            opts.n_theta = grid[0];
            opts.n_phi = grid[1];
            const KMethod m = method == "fast" ? KMethod::fast : KMethod::direct;
            const SphereFunction a = fn(f1p), b = fn(f2p), c = fn(f3p);
            const cplx value = K_form(p, a, b, c, m, opts);
            // truncation estimate: change against the half-resolution grid
            TrilinearOptions coarse = opts;
            coarse.n_theta = std::max(2, opts.n_theta / 2);
            coarse.n_phi = std::max(4, opts.n_phi / 2);
            const cplx v2 = K_form(p, a, b, c, m, coarse);
            json j = {{"value", num(value)},
                      {"method", to_string(m)},
                      {"grid", {opts.n_theta, opts.n_phi}},
                      {"truncation_error_estimate", num(std::abs(value - v2))},
                      {"alpha", {num(p.alpha(0)), num(p.alpha(1)), num(p.alpha(2))}},
                      {"lambda", {num(p.lambda(0)), num(p.lambda(1)), num(p.lambda(2))}}};
            emit(io::unquote_numbers(j.dump(2)) + "\n", out);
            return 0;
        }
        if (*scan) {
            ScanSpec sp;
            sp.variable = parse_variable(variable);
            sp.dim = Dimension(n);
            sp.fixed = {fixed[0], fixed[1], fixed[2]};
            sp.k = k;
            sp.from = from;
            sp.to = to;
            sp.radius = scan_radius;
            sp.threshold = threshold;
            json poles = json::array();
            for (const auto& r : pole_scan(sp))
                poles.push_back({{"family", to_string(r.family)},
                                 {"index", r.index},
                                 {"location", num(r.location)},
                                 {"residue", num(r.residue)},
                                 {"description", r.description}});
            json expected = json::array();
            for (const auto& [fam, z] : expected_poles(sp))
                expected.push_back({{"family", to_string(fam)}, {"location", num(z)}});
            emit(io::unquote_numbers(json{{"poles", poles}, {"expected", expected}}.dump(2)) + "\n", out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
