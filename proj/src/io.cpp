#include "conftri/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace conftri::io {

using nlohmann::json;

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

namespace {
constexpr const char* kNumberMark = "#num#";
}

std::string number_token(double x) { return kNumberMark + format_number(x); }

std::string unquote_numbers(const std::string& dumped) {
    static const std::regex token(std::string("\"") + kNumberMark + "([^\"]*)\"");
    return std::regex_replace(dumped, token, "$1");
}

HarmonicCoeffs parse_coeffs_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("coefficient file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("L") || !j.contains("coeffs"))
        throw Error("coefficient file: expected an object with keys \"L\" and \"coeffs\"");
    if (j.contains("n") && j["n"].get<int>() != 3) throw Error("coefficient file: only n = 3 is supported");
    const int L = j["L"].get<int>();
    if (L < 0) throw Error("coefficient file: negative L");
    HarmonicCoeffs c(L);
    for (const auto& e : j["coeffs"]) {
        if (!e.is_array() || e.size() != 4) throw Error("coefficient file: each entry must be [l, m, re, im]");
        const int l = e[0].get<int>(), m = e[1].get<int>();
        if (l < 0 || l > L || std::abs(m) > l)
            throw Error("coefficient file: index (" + std::to_string(l) + ", " + std::to_string(m) +
                        ") outside 0 <= l <= L, |m| <= l");
        c(l, m) += cplx(e[2].get<double>(), e[3].get<double>());
    }
    return c;
}

HarmonicCoeffs read_coeffs_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open coefficient file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_coeffs_json(ss.str());
}

std::string coeffs_to_json(const HarmonicCoeffs& c) {
    // written by hand so numbers keep the fixed 12-digit format
    std::string s = "{\"n\": 3, \"L\": " + std::to_string(c.L()) + ", \"coeffs\": [";
    bool first = true;
    for (int l = 0; l <= c.L(); ++l)
        for (int m = -l; m <= l; ++m) {
            const cplx v = c(l, m);
            if (v == 0.0) continue;
            if (!first) s += ", ";
            first = false;
            s += "[" + std::to_string(l) + ", " + std::to_string(m) + ", " + format_number(v.real()) + ", " +
                 format_number(v.imag()) + "]";
        }
    return s + "]}";
}

void write_coeffs_json(const HarmonicCoeffs& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << coeffs_to_json(c) << "\n";
}

void write_grid_csv(const GridFunction& f, std::ostream& out) {
    const Grid& g = *f.grid;
    out << "theta,phi,re,im\n";
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j) {
            const cplx v = f.values(i, j);
            out << format_number(std::acos(g.cos_theta()(i))) << ',' << format_number(g.phi(j)) << ','
                << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
        }
}

void write_multipliers_csv(const MultiplierFamily& fam, std::ostream& out) {
    out << "l,re,im\n";
    for (int l = 0; l <= fam.L; ++l)
        out << l << ',' << format_number(fam.values(l).real()) << ',' << format_number(fam.values(l).imag()) << '\n';
}

std::string output_dir() {
    const char* d = std::getenv("CONFTRI_OUTPUT_DIR");
    return d && *d ? std::string(d) : std::string(".");
}

}  // namespace conftri::io
