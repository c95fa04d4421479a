#pragma once

// Command-line front end. Every flag --some-name can also be supplied through
// the environment variable SQG_SOME_NAME; the command line wins.
//
// Exit status: 0 success, 2 invalid configuration, 3 numerical-domain error
// (including a flow leaving 𝒪), 4 failed verification suite.

#include <iosfwd>
#include <string>
#include <vector>

namespace sqg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitVerify = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace sqg::cli
