#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fvklab::cli {

/// Exit codes.
enum : int {
  kOk = 0,
  kCertificateViolation = 1,
  kValidationError = 2,
  kNumericalError = 3,
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fvklab::cli
