#include <doctest.h>

#include "conftri/verify.hpp"

using namespace conftri;

TEST_CASE("run config defaults and overrides") {
    const RunConfig d = parse_run_config("{}");
    CHECK(d.n == 3);
    CHECK(d.suites.empty());
    const RunConfig c = parse_run_config(
        R"({"n": 4, "grid": [12, 24], "suites": ["geometry"], "tolerances": {"geometry": 1e-9, "geometry/distance": 1e-12}})");
    CHECK(c.n == 4);
    CHECK(c.grid_theta == 12);
    CHECK(c.grid_phi == 24);
    CHECK(c.tolerance("geometry/distance", 1.0) == 1e-12);
    CHECK(c.tolerance("geometry/cocycle", 1.0) == 1e-9);
    CHECK(c.tolerance("residues/r0", 0.5) == 0.5);
}

TEST_CASE("invalid configs are rejected") {
    CHECK_THROWS_AS(parse_run_config("{"), Error);
    CHECK_THROWS_AS(parse_run_config(R"({"n": 2})"), Error);
    CHECK_THROWS_AS(parse_run_config(R"({"suites": ["nope"]})"), Error);
    CHECK_THROWS_AS(parse_run_config(R"({"tolerances": {"geometry": 1e-20}})"), Error);
    CHECK_THROWS_AS(parse_run_config(R"({"ring_radius": 2.0})"), Error);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": "big"})"), Error);
}

TEST_CASE("geometry and residue suites pass; fault injection is caught") {
    RunConfig cfg = parse_run_config(R"({"suites": ["geometry", "residues"], "instances": 3})");
    const VerificationReport ok = cmd_verify(cfg);
    CHECK(ok.suites.size() == 2);
    CHECK(ok.all_pass());
    cfg.fault_inject = true;
    const VerificationReport bad = cmd_verify(cfg);
    CHECK_FALSE(bad.all_pass());
    CHECK(bad.suites[0].pass());
    bool r1_failed = false;
    for (const auto& r : bad.suites[1].checks)
        if (r.id == "r1") r1_failed = !r.pass;
    CHECK(r1_failed);
    CHECK(bad.to_json().find("\"pass\": false") != std::string::npos);
}
