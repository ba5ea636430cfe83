#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "conftri/io.hpp"

using namespace conftri;

TEST_CASE("numbers carry 12 significant digits") {
    CHECK(io::format_number(1.0) == "1.00000000000e+00");
    CHECK(io::format_number(-3.14159265358979) == "-3.14159265359e+00");
    CHECK(io::format_number(6.02214076e23) == "6.02214076000e+23");
    CHECK(io::unquote_numbers("{\"x\": \"" + io::number_token(0.5) + "\", \"s\": \"text\"}") ==
          "{\"x\": 5.00000000000e-01, \"s\": \"text\"}");
}

TEST_CASE("coefficient JSON round trip") {
    const HarmonicCoeffs c = random_coeffs(5, 3);
    const HarmonicCoeffs back = io::parse_coeffs_json(io::coeffs_to_json(c));
    CHECK(back.L() == 5);
    CHECK((back.data() - c.data()).norm() <= 1e-11 * c.data().norm());

    const auto path = std::filesystem::temp_directory_path() / "conftri_coeffs_test.json";
    io::write_coeffs_json(c, path.string());
    CHECK((io::read_coeffs_json(path.string()).data() - c.data()).norm() <= 1e-11 * c.data().norm());
    std::filesystem::remove(path);
}

TEST_CASE("sparse coefficient files") {
    const HarmonicCoeffs c = io::parse_coeffs_json(R"({"n": 3, "L": 2, "coeffs": [[1, -1, 0.5, 0.25], [2, 2, -1, 0]]})");
    CHECK(c(1, -1) == cplx(0.5, 0.25));
    CHECK(c(2, 2) == cplx(-1.0));
    CHECK(c(0, 0) == cplx(0.0));
}

TEST_CASE("malformed coefficient files are rejected") {
    CHECK_THROWS_AS(io::parse_coeffs_json("not json"), Error);
    CHECK_THROWS_AS(io::parse_coeffs_json("[1, 2]"), Error);
    CHECK_THROWS_AS(io::parse_coeffs_json(R"({"n": 4, "L": 1, "coeffs": []})"), Error);
    CHECK_THROWS_AS(io::parse_coeffs_json(R"({"L": -1, "coeffs": []})"), Error);
    CHECK_THROWS_AS(io::parse_coeffs_json(R"({"L": 1, "coeffs": [[2, 0, 1, 0]]})"), Error);
    CHECK_THROWS_AS(io::parse_coeffs_json(R"({"L": 2, "coeffs": [[1, 2, 1, 0]]})"), Error);
    CHECK_THROWS_AS(io::parse_coeffs_json(R"({"L": 2, "coeffs": [[1, 0, 1]]})"), Error);
    CHECK_THROWS_AS(io::read_coeffs_json("/nonexistent/coeffs.json"), Error);
}

TEST_CASE("CSV writers") {
    std::ostringstream m;
    io::write_multipliers_csv(laplacian_family(Dimension(3), 2), m);
    CHECK(m.str() ==
          "l,re,im\n"
          "0,0.00000000000e+00,0.00000000000e+00\n"
          "1,-2.00000000000e+00,0.00000000000e+00\n"
          "2,-6.00000000000e+00,0.00000000000e+00\n");
    std::ostringstream g;
    const GridPtr grid = make_grid(2, 4);
    io::write_grid_csv(sample(grid, [](const Vec3&) { return cplx(1.0, -1.0); }), g);
    std::istringstream lines(g.str());
    std::string line;
    int count = 0;
    std::getline(lines, line);
    CHECK(line == "theta,phi,re,im");
    while (std::getline(lines, line)) {
        ++count;
        CHECK(line.find(",1.00000000000e+00,-1.00000000000e+00") != std::string::npos);
    }
    CHECK(count == 8);
}
