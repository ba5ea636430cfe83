#pragma once

// File formats.
//   coefficients: JSON {"n": 3, "L": L, "coeffs": [[l, m, re, im], ...]}
//   grid samples: CSV theta,phi,re,im
//   multipliers:  CSV l,re,im
// Numbers are written in scientific notation with 12 significant digits.

#include <iosfwd>
#include <string>

#include "conftri/spectral_ops.hpp"
#include "conftri/sphgrid.hpp"

namespace conftri::io {

/// 12 significant digits, scientific notation.
std::string format_number(double x);

/// JSON output: number_token(x) stands for x inside a string value; after
/// dumping, unquote_numbers turns each token back into a bare number written
/// with format_number.
std::string number_token(double x);
std::string unquote_numbers(const std::string& dumped);

HarmonicCoeffs read_coeffs_json(const std::string& path);
HarmonicCoeffs parse_coeffs_json(const std::string& text);
std::string coeffs_to_json(const HarmonicCoeffs& c);
void write_coeffs_json(const HarmonicCoeffs& c, const std::string& path);

void write_grid_csv(const GridFunction& f, std::ostream& out);
void write_multipliers_csv(const MultiplierFamily& fam, std::ostream& out);

/// Directory for output files: $CONFTRI_OUTPUT_DIR, or "." when unset.
std::string output_dir();

}  // namespace conftri::io
