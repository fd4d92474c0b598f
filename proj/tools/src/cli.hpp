#pragma once

#include <iosfwd>

namespace dualrail::cli {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3 };

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dualrail::cli
