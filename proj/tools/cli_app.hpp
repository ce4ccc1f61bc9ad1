#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cipher_autopsy::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoError = 2,
  kKeyError = 3,
  kImageError = 4,
  kAttackFailed = 5,
  kCurveError = 6,
  kInternal = 7,
};

/// Runs one command. `args` excludes the program name. Results go to `out`;
/// failures are reported as a JSON object on `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cipher_autopsy::cli
