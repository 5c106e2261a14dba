#pragma once

// Command dispatch shared by the CLI binary and the tests: build the chart
// and structures described by a spec file, run one command, produce a
// Report.  run() throws (ParseError and domain errors); run_cli() catches,
// prints and maps to the exit-code contract (0 ok, 2 domain error, 1
// parse/IO/usage error).

#include "bcx/report.hpp"
#include "bcx/specfile.hpp"

#include <iosfwd>

namespace bcx {

struct JobSpec {
    std::string command;
    std::string input_path;
    unsigned order = 4;       // nn-correct truncation order
    int samples = 5;          // transversality samples per stratum
    std::uint64_t seed = 1;   // sampling seed
    unsigned threads = 1;     // reserved; this build is single-threaded
    std::size_t degree_cap = 16;
    bool json = false;
};

Report run(const JobSpec& job);
int run_cli(const JobSpec& job, std::ostream& out, std::ostream& err);

} // namespace bcx
