#pragma once

// Command-line front end: rank, classify, verify, catalog, leaves.
//
// Exit codes:
//   0  success
//   1  bad input (unknown web, malformed flag, invalid function spec)
//   2  rank did not stabilize (or hit the Bol bound)
//   3  classifier returned Indeterminate
//   4  verify found a residual above its tolerance

#include <websmith/jets.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace websmith::cli {

enum ExitCode : int { kOk = 0, kBadInput = 1, kUnstable = 2, kIndeterminate = 3, kVerifyFailed = 4 };

struct RunConfig {
    std::string command;
    std::string web;                       // catalog id or path to a web JSON file
    std::optional<cplx> k, tau;
    std::optional<Point> base;
    std::vector<int> degrees{6, 10, 14};
    double svd_gap = 1e-8;
    std::string out;                       // JSON output path
    std::string format = "table";          // table, json, csv
    std::string vx, wx;                    // classify slopes
    std::optional<double> perturb;         // verify: scale theta_3 by 1 + eps
    std::optional<std::string> only;       // verify: single identity
    std::vector<double> levels;            // leaves
    std::optional<std::vector<double>> box;  // leaves: xmin, xmax, ymin, ymax
    double step = 0.02;                    // leaves: max arc-length step
    std::optional<int> foliation;          // leaves: single foliation index
};

/// Throws StructuralError on non-positive tolerances or unsorted degrees.
void validate(const RunConfig& config);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace websmith::cli
