#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fheight::cli {

/// Everything a run depends on; echoed into every JSON record.
struct JobConfig {
    std::string command;
    std::uint32_t q = 0;
    std::string phi = "T+tau";
    std::string alpha;
    std::vector<std::string> minpolys;
    std::string B, C;
    std::string x, y;
    std::string generate;  // "", "semistable" or "general": draw the curve from --seed instead of --B/--C
    std::vector<std::string> S;
    std::optional<long> rank;
    std::string mode = "auto";  // census threshold: auto | semistable | general
    int max_degree = 2;
    bool constants = true;
    int torsion_bound = 12;
    long radius = -1;       // ec-report search radius; -1 = derived from the census
    long radius_cap = 4;    // ec-integral
    std::uint64_t seed = 0;
    int cap = 40;
    std::string width = "1/10000";
    std::string out, csv;
    bool parallel = false;
};

enum ExitCode { kOk = 0, kInputError = 1, kInconclusive = 2 };

/// Parses argv (argv[0] is the program name), runs the job and writes the JSON record to --out
/// (or `out` when no path is given). Diagnostics and usage go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fheight::cli
