#pragma once

// finslerlab command line: analyze | s-curvature | geodesic | validate | bh | catalog.
//
// Exit codes: 0 success (or the criterion holds), 1 invalid spec, 2 usage
// error, 3 criterion fails or a check fails, 4 domain warning (a geodesic left
// the chart).

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace finslerlab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidSpec = 1,
  kUsage = 2,
  kCheckFailed = 3,
  kDomainWarning = 4,
};

/// Runs one command in-process. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

std::string_view version();

}  // namespace finslerlab::cli
