#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace cohui {

inline constexpr const char* kToolName = "cohui";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses "re,im", "re" or "(re,im)" into a complex amplitude.
std::complex<double> parse_amplitude(const std::string& text);

/// Runs the command line. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cohui
