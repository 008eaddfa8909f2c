#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pod::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,  // bad scenario, flags or parameter domain
    kRuntime = 3,     // I/O failure, insolvent operator, unexpected exception
    kTooLarge = 4,    // game too large to enumerate
};

const char* version();

/// Entry point behind the `pod` binary; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pod::cli
