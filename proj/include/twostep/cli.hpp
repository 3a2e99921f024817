#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "twostep/majorant.hpp"
#include "twostep/riccati.hpp"

namespace twostep::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kCriterionFailed = 2,
    kNonConvergence = 3,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json certificate_json(const majorant::ConvergenceCertificate& cert);

nlohmann::json solution_json(const riccati::TransportParameters& params,
                             const riccati::MinimalSolution& sol,
                             const majorant::ConvergenceCertificate& cert);

/// Scientific notation, 17 significant digits.
std::string format_number(double value);

}  // namespace twostep::cli
