// JSON serialization of operators and reports.
//
// Operator files:
//
//   {
//     "block_size": 1,
//     "window": [-2, 2],
//     "exact_interior": [-2, 2],          // or null; omitted means the window
//     "diagonals": {
//       "0": [block, block, block, block, block],
//       "1": [block, ...]
//     }
//   }
//
// where each block is an m x m array of [re, im] pairs and every diagonal
// array has exactly window-length entries (columns window.lo .. window.hi).
// Duplicate offsets are rejected.  The writer is canonical: offsets ascend
// numerically, arrays are padded to the full window, and doubles are printed
// with %.17g, so write(read(file)) reproduces a canonically written file
// byte for byte.
#pragma once

#include <string>
#include <vector>

#include "nswiener/algebra.hpp"
#include "nswiener/diag_core.hpp"
#include "nswiener/factorization.hpp"

namespace nswiener {

// Throws ParseError naming the offending key or file on any problem.
NSOperator parse_operator_json(const std::string& text);
NSOperator read_operator_file(const std::string& path);

std::string operator_to_json(const NSOperator& f);
void write_operator_file(const NSOperator& f, const std::string& path);

std::string norm_report_to_json(const NormReport& r);
std::string factorization_report_to_json(const FactorizationReport& r);
std::string verification_to_json(const VerificationResult& v, const std::vector<double>& t_samples);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace nswiener
