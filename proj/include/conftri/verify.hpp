#pragma once

// Verification suites run by `conftri verify`. Each check records the identity
// it exercises, the measured defect and the tolerance it is held to.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conftri/dimension.hpp"

namespace conftri {

struct RunConfig {
    int n = 3;
    int L = 16;  ///< degree of random band-limited test functions
    int grid_theta = 24;
    int grid_phi = 48;
    double ring_radius = 0.1;
    int ring_size = 16;
    int instances = 10;
    std::uint64_t seed = 20240611;
    std::string output;               ///< report path; empty means stdout only
    std::vector<std::string> suites;  ///< empty means all
    bool fault_inject = false;        ///< scale c_1 by 1.01 on the expected side of the residue checks
    std::map<std::string, double> tolerances;  ///< per-suite override of the default tolerance scale

    double tolerance(const std::string& suite, double fallback) const;
    void validate() const;
};

/// Parse a JSON config; missing keys keep their defaults.
RunConfig parse_run_config(const std::string& json_text);

struct CheckRecord {
    std::string id;
    std::string anchor;  ///< identity being checked
    double defect;
    double tolerance;
    bool pass;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckRecord> checks;
    double seconds = 0.0;
    bool pass() const;
};

struct VerificationReport {
    RunConfig config;
    std::vector<SuiteResult> suites;
    bool all_pass() const;
    std::string to_json() const;
};

/// Suites in run order: geometry, representation, bernstein, residues, intertwining, trilinear.
const std::vector<std::string>& suite_names();

VerificationReport cmd_verify(const RunConfig& config);

}  // namespace conftri
