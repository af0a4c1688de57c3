#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace decolemma::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,  // also: Decoheres
    kInputError = 2,
    kNoDecoherence = 3,
    kInconclusive = 4,
};

// Runs one command line (without the program name). Reports go to `out`
// unless --output redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace decolemma::cli
