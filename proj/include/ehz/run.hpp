#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ehz/polytope.hpp"

namespace ehz {

/**
 * Parsed command line for the driver. `command` is one of capacity,
 * symmetric, pruned, orbit, cut-check, gen, selftest; the remaining fields
 * apply where meaningful. Reports written to `output` are byte-deterministic
 * for fixed input and seed (timings go to stdout only).
 */
struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string mode = "exact";  // capacity command: exact|heuristic|symmetric|pruned
    int exact_limit = 10;        // clamped to 12 by the front end
    int workers = 1;
    std::uint64_t seed = 0;
    double tol = 1e-9;  // comparison tolerance for cut-check and orbit verification

    // cut-check: explicit planes, or `samples` random center cuts when empty
    std::vector<Vec> cut_normals;
    std::vector<double> cut_offsets;
    int samples = 0;

    // gen
    std::string shape;  // cube|cross|simplex|random
    int n = 1;
    double radius = 1.0;
    int facets = 6;

    // selftest
    bool quick = false;
    std::string inject;  // "" or "omega-sign"
};

/**
 * Executes one command, writing human-readable progress to `out` and
 * diagnostics to `err`. Returns the process exit code: 0 success,
 * 2 input/validation error, 3 solver error, 4 property violation
 * (cut-check inequality or selftest failure).
 */
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ehz
