#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irrigation::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kValidation = 5,
  kModel = 6,
  kSolverFault = 7,
  kReportFailed = 8,
};

/// args excludes the program name. Errors go to err as a single line
/// "error:<class>: <detail>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace irrigation::cli
