#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dirac {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSolver = 2,
    kExitTolerance = 3,
};

/// Names accepted by `verify --check` besides "all".
const std::vector<std::string>& verify_check_names();

/// Entry point of dirac_cli. `args` excludes the program name.
///
///   direct     potential + boundary -> spectral.json, prints the asymptotics table
///   inverse    spectral.json -> potential.csv, boundary.json, diagnostics.json [, K??.csv]
///   roundtrip  direct + inverse, compared with the generator -> report.json
///   verify     parseval | expansion | zero_sum | hadamard | all -> report.json
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirac
